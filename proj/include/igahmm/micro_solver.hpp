#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SparseCholesky>

#include "igahmm/nurbs_patch.hpp"
#include "igahmm/refinement.hpp"
#include "igahmm/sparse_assembly.hpp"
#include "igahmm/tensor_field.hpp"

namespace igahmm {

/// Square sampling domain x_Kl + delta * (-1/2, 1/2)^2 around a macro Gauss point.
struct SamplingDomain {
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    double delta = 0;
    double eps = 0;

    Eigen::AlignedBox2d bounds() const {
        const Eigen::Vector2d half = Eigen::Vector2d::Constant(0.5 * delta);
        return {center - half, center + half};
    }
    double area() const { return delta * delta; }
};

/// Throws ConfigError unless delta >= eps > 0.
SamplingDomain build_sampling_domain(const Eigen::Vector2d& center, double delta, double eps);

enum class Coupling { Periodic, Dirichlet };

struct MicroSettings {
    int degree = 1;    ///< q
    int elements = 1;  ///< N_mic per direction
    Coupling coupling = Coupling::Periodic;
    Continuity continuity = Continuity::C0;
};

/// Discrete micro space on the unit cell Y = (0,1)^2, shared by every
/// sampling domain (each domain is an affine image of Y).
///
/// Periodic coupling identifies control points on opposite edges and pins the
/// representative of the corner to remove the constant kernel; the zero-mean
/// condition is restored afterwards through the mass-weighted constraint row.
/// Dirichlet coupling eliminates every boundary control point.
class MicroSpace {
public:
    struct ElementData {
        std::vector<int> dofs;       ///< solved-system dof per local function, -1 if eliminated
        std::vector<int> controls;   ///< control point per local function
        std::vector<int> positions;  ///< value-array positions of (a, b) pairs
        Points2 y;                   ///< quadrature points in Y
        Eigen::VectorXd weights;     ///< quadrature weights in Y
        Eigen::MatrixXd values;      ///< points x local functions
        Eigen::MatrixXd grad_u;      ///< d/dy1, points x local functions
        Eigen::MatrixXd grad_v;      ///< d/dy2
    };

    explicit MicroSpace(const MicroSettings& settings);

    const MicroSettings& settings() const { return settings_; }
    const NurbsPatch& patch() const { return patch_; }
    int num_control_points() const { return patch_.size(); }
    int num_dofs() const { return num_dofs_; }
    int dof(int control) const { return dof_[static_cast<std::size_t>(control)]; }
    /// Control point whose coefficient this one shares (itself unless merged).
    int representative(int control) const { return rep_[static_cast<std::size_t>(control)]; }
    const SparsePattern& pattern() const { return pattern_; }
    const std::vector<ElementData>& elements() const { return elements_; }
    /// Zero-mean constraint row: integral of each basis function over Y.
    const Eigen::VectorXd& mean_row() const { return mean_row_; }

private:
    MicroSettings settings_;
    NurbsPatch patch_;
    std::vector<int> rep_;
    std::vector<int> dof_;
    int num_dofs_ = 0;
    SparsePattern pattern_;
    std::vector<ElementData> elements_;
    Eigen::VectorXd mean_row_;
};

/// Assembled cell problems for the two unit gradient directions.
struct MicroSystem {
    SparseMatrix stiffness;                   ///< over MicroSpace dofs
    Eigen::Matrix<double, Eigen::Dynamic, 2> rhs;
    std::vector<Eigen::Matrix2d> tensors;     ///< a at every micro quadrature point, element-major
};

/// Assembles the micro stiffness and the right-hand sides -int a e_j . grad z.
/// The tensor is sampled at x = x_Kl + delta (y - 1/2) with the slow variable
/// collocated at x_Kl. Throws SolverError on a non-elliptic sample.
MicroSystem assemble_micro(const MicroSpace& space, const SamplingDomain& domain, const TensorField& tensor);

struct MicroResult {
    Eigen::Matrix2d effective = Eigen::Matrix2d::Zero();  ///< a0_h(x_Kl)
    /// Corrector coefficients per control point, in cell units (chi_x = delta * chi_y).
    Eigen::Matrix<double, Eigen::Dynamic, 2> correctors;
    double mean_residual = 0;   ///< |int chi| for periodic coupling
    double linear_residual = 0; ///< relative residual of the solved system
};

/// Solves the cell problems and returns a0_h = int_Y (I + grad chi)^T a (I + grad chi) dy.
MicroResult solve_micro(const MicroSpace& space, const MicroSystem& system);

/// Reusable solver: the symbolic factorization is computed once per space.
/// Not thread-safe; use one instance per worker.
class MicroSolver {
public:
    explicit MicroSolver(std::shared_ptr<const MicroSpace> space);

    MicroResult solve(const SamplingDomain& domain, const TensorField& tensor);
    MicroResult solve(const MicroSystem& system);

    const MicroSpace& space() const { return *space_; }

private:
    std::shared_ptr<const MicroSpace> space_;
    Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
    bool analyzed_ = false;
};

}  // namespace igahmm
