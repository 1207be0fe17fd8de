#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "igahmm/hmm.hpp"
#include "igahmm/macro_solver.hpp"
#include "igahmm/nurbs_patch.hpp"
#include "igahmm/refinement.hpp"
#include "igahmm/tensor_field.hpp"

namespace igahmm {

/// A homogenization benchmark: oscillating tensor, source, geometry and
/// boundary data, plus whatever homogenized data is known in closed form.
struct ProblemSpec {
    std::string id;
    NurbsPatch geometry;  ///< coarsest exact patch
    TensorField tensor;
    ScalarField source;
    std::function<bool(const Eigen::Vector2d&)> on_dirichlet;
    EdgeConditions edges{};  ///< classification of the geometry's parametric edges

    MatrixField homogenized;      ///< a0(x), empty if unknown
    ScalarField solution;         ///< u0, empty if unknown
    VectorField solution_gradient;

    bool has_solution() const { return static_cast<bool>(solution); }
};

/// (cos(2 pi x1/eps) + 2) I on the unit square, f = 1, Dirichlet on x1 = 0 and x1 = 1.
ProblemSpec problem_square_fast(double eps = 1e-6);

/// Diagonal two-scale sine tensor on the unit square, f = 1, Dirichlet on
/// x1 = 0 and x1 = 1. Homogenized entries are the 1D harmonic means, each
/// computed by a 64-point rule.
ProblemSpec problem_square_slowfast(double eps = 1e-6);

/// Quarter annulus 1 < r < 2 in the first quadrant, fully Dirichlet, with the
/// manufactured rational source whose homogenized solution is known.
ProblemSpec problem_quarter_annulus(double eps = 1e-6);

/// Looks up "square_fast", "square_slowfast" or "quarter_annulus".
ProblemSpec problem_by_name(const std::string& name, double eps = 1e-6);

std::vector<std::string> problem_names();

/// Exact single-element quadratic patch of the quarter annulus.
NurbsPatch quarter_annulus_patch();

/// a0_11 and a0_22 of the two-scale sine problem at x.
Eigen::Matrix2d slowfast_homogenized(const Eigen::Vector2d& x);

/// Replaces the patch's geometry with a degree-1 interpolation at the
/// (N+1)^2 uniform parameter vertices; used when the requested macro degree
/// is below the exact geometry degree.
NurbsPatch bilinear_approximation(const NurbsPatch& patch, int elements);

/// Macro mesh of N x N elements of degree p and the given continuity,
/// refined from the problem geometry.
MacroMesh build_macro_mesh(const ProblemSpec& spec, int elements, int degree, Continuity continuity = Continuity::Cmax);

/// Full IGA-HMM solve on a macro mesh.
HmmSolution solve_problem(const ProblemSpec& spec, const MacroMesh& mesh, const HmmSettings& settings);

/// Single-scale solve with a macroscopic tensor sampled at the Gauss points.
SolutionField reference_solve(const ProblemSpec& spec, const MatrixField& tensor, int elements, int degree,
                              Continuity continuity = Continuity::Cmax);

/// Absolute norms of u^H - u_ref and of u_ref. H1 norms are full norms.
struct ErrorNorms {
    double abs_h1 = 0;
    double abs_l2 = 0;
    double ref_h1 = 0;
    double ref_l2 = 0;

    double rel_h1() const { return abs_h1 / ref_h1; }
    /// L2 error normalized by the reference H1 norm.
    double rel_l2() const { return abs_l2 / ref_h1; }
    /// L2 error normalized by the reference L2 norm.
    double rel_l2_alt() const { return abs_l2 / ref_l2; }
};

/// Against an analytic solution, with `points` Gauss points per direction on
/// every element of the field (0 selects p + 3).
ErrorNorms error_norms(const SolutionField& field, const ScalarField& u, const VectorField& grad, int points = 0);

/// Against a reference field on the same parameterization. The quadrature
/// runs over the elements of the finer of the two patches.
ErrorNorms error_norms(const SolutionField& field, const SolutionField& reference, int points = 0);

}  // namespace igahmm
