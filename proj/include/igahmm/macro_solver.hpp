#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "igahmm/nurbs_patch.hpp"
#include "igahmm/quadrature.hpp"
#include "igahmm/sparse_assembly.hpp"
#include "igahmm/tensor_field.hpp"

namespace igahmm {

enum class EdgeCondition { Dirichlet, Neumann };

/// Conditions on the parametric edges, ordered xi=0, xi=1, eta=0, eta=1.
using EdgeConditions = std::array<EdgeCondition, 4>;

/// Classifies each parametric edge by sampling its interior against a
/// physical Dirichlet predicate. An edge that is only partly Dirichlet is a
/// ConfigError.
EdgeConditions classify_edges(const NurbsPatch& patch, const std::function<bool(const Eigen::Vector2d&)>& on_dirichlet);

/// Macro discretization: patch, quadrature and dof numbering.
///
/// Gauss points are numbered element-major (elements as in patch_elements),
/// then by local point; every per-point table in the library uses this order.
class MacroMesh {
public:
    MacroMesh(NurbsPatch patch, EdgeConditions edges, int points_per_dir = 0);

    const NurbsPatch& patch() const { return patch_; }
    const EdgeConditions& edges() const { return edges_; }
    int degree() const { return patch_.degree_u(); }
    int points_per_dir() const { return points_per_dir_; }

    const std::vector<Element>& elements() const { return elements_; }
    const std::vector<std::vector<QuadraturePoint>>& quadrature() const { return quadrature_; }
    int num_gauss_points() const { return num_gauss_points_; }
    /// Flattened Gauss points, in table order.
    std::vector<QuadraturePoint> gauss_points() const;

    int num_dofs() const { return num_dofs_; }
    int dof(int control) const { return dof_[static_cast<std::size_t>(control)]; }
    bool is_dirichlet(int control) const { return dof(control) < 0; }

    /// Element control point lists (same order as elements()).
    const std::vector<std::vector<int>>& element_controls() const { return element_controls_; }

    /// H = max element diameter.
    double mesh_size() const { return mesh_size_; }

private:
    NurbsPatch patch_;
    EdgeConditions edges_;
    int points_per_dir_ = 0;
    std::vector<Element> elements_;
    std::vector<std::vector<QuadraturePoint>> quadrature_;
    std::vector<std::vector<int>> element_controls_;
    int num_gauss_points_ = 0;
    std::vector<int> dof_;
    int num_dofs_ = 0;
    double mesh_size_ = 0;
};

/// Full system over every control point.
struct LinearSystem {
    SparseMatrix matrix;
    Eigen::VectorXd load;
};

/// B_H(R_I, R_J) = sum_K sum_l w_Kl a0_h(x_Kl) grad R_J . grad R_I and <f, R_I>.
/// `tensors` holds one effective tensor per Gauss point in mesh order.
LinearSystem assemble_macro(const MacroMesh& mesh, const std::vector<Eigen::Matrix2d>& tensors, const ScalarField& source);

/// Tensor table sampled from a macroscopic field at the Gauss points.
std::vector<Eigen::Matrix2d> sample_tensor(const MacroMesh& mesh, const MatrixField& tensor);

/// System restricted to free control points (homogeneous Dirichlet by elimination).
struct ReducedSystem {
    SparseMatrix matrix;
    Eigen::VectorXd load;
};

ReducedSystem apply_boundary_conditions(const LinearSystem& system, const MacroMesh& mesh);

/// u^H = sum R_I u_I over a patch.
struct SolutionField {
    NurbsPatch patch;
    Eigen::VectorXd coefficients;  ///< one per control point
    double residual = 0;           ///< relative residual of the reduced solve
};

/// Sparse Cholesky with iterative refinement; relative residual <= 1e-12.
/// Throws SolverError when the matrix is not SPD.
SolutionField solve_macro(const ReducedSystem& system, const MacroMesh& mesh);

struct FieldSample {
    Eigen::Vector2d param;
    Eigen::Vector2d x;
    double value = 0;
    Eigen::Vector2d gradient;
};

FieldSample evaluate(const SolutionField& field, double xi, double eta);

/// Samples on an (n+1)x(n+1) uniform parameter grid, xi fastest.
std::vector<FieldSample> evaluate_grid(const SolutionField& field, int n);

/// CSV with header xi,eta,x,y,u on the uniform parameter grid.
void write_solution_csv(std::ostream& out, const SolutionField& field, int n);

}  // namespace igahmm
