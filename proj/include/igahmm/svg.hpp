#pragma once

#include <string>
#include <vector>

#include "igahmm/convergence.hpp"
#include "igahmm/nurbs_patch.hpp"

namespace igahmm {

enum class ErrorColumn { H1, L2, L2Alt };

/// Self-contained log-log plot of error against N_mac, one polyline per
/// degree, with the fitted slope in the legend.
std::string convergence_svg(const std::vector<ConvergenceRecord>& records, ErrorColumn column, const std::string& title);

/// Element boundaries (mapped knot lines) and the control net of a patch.
std::string patch_svg(const NurbsPatch& patch, const std::string& title);

}  // namespace igahmm
