#pragma once

#include <iosfwd>
#include <string>

#include "igahmm/nurbs_patch.hpp"

namespace igahmm {

// Plain-text patch format, one keyword per line, '#' starts a comment:
//
//   nurbs_patch 1
//   degrees <p_u> <p_v>
//   knots_u <k_1> ... <k_{n+p+1}>
//   knots_v <k_1> ... <k_{m+q+1}>
//   control_points <n> <m>
//   <x> <y> <w>          (n*m lines, u index fastest)
//
// Numbers are written with 17 significant digits so a load/save cycle is exact.

NurbsPatch read_patch(std::istream& in);
NurbsPatch read_patch_file(const std::string& path);

void write_patch(std::ostream& out, const NurbsPatch& patch);
void write_patch_file(const std::string& path, const NurbsPatch& patch);

}  // namespace igahmm
