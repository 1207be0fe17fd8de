#pragma once

#include <vector>

#include "igahmm/nurbs_patch.hpp"

namespace igahmm {

enum class Direction { U = 0, V = 1 };

/// Interior continuity of a k-refined mesh: C^0 or the maximal C^{p-1}.
enum class Continuity { C0, Cmax };

/// Continuity order k for a degree-p mesh.
inline int continuity_order(Continuity c, int degree) { return c == Continuity::C0 ? 0 : degree - 1; }

/// h-refinement. Knots are inserted one by one on the homogeneous control
/// points (w P, w), so the rational surface is reproduced exactly.
/// Throws ConfigError if a knot is not strictly inside (0, 1) or its
/// multiplicity would exceed the degree.
NurbsPatch insert_knots(const NurbsPatch& patch, Direction dir, const std::vector<double>& new_knots);

/// p-refinement by `times` degrees in one direction. Every distinct knot gains
/// `times` in multiplicity so existing continuity is kept.
NurbsPatch elevate_degree(const NurbsPatch& patch, Direction dir, int times);

/// k-refinement: elevate both directions to `degree`, then insert the knots
/// i/N (i = 1..N-1) with multiplicity degree - k so the interior continuity is
/// C^k with k = `continuity_k`.
NurbsPatch make_mesh(const NurbsPatch& patch, int elements, int degree, int continuity_k);

inline NurbsPatch make_mesh(const NurbsPatch& patch, int elements, int degree, Continuity continuity) {
    return make_mesh(patch, elements, degree, continuity_order(continuity, degree));
}

}  // namespace igahmm
