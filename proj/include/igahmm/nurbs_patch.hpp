#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "igahmm/knot_vector.hpp"

namespace igahmm {

using Points2 = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Control points P_I and weights w_I of a tensor-product patch.
///
/// Storage is flat with the u index running fastest: I = i + count_u * j.
struct ControlNet {
    int count_u = 0;
    int count_v = 0;
    Points2 points;
    Eigen::VectorXd weights;

    int index(int i, int j) const { return i + count_u * j; }
    int size() const { return count_u * count_v; }
};

/// A rational tensor-product patch: two knot vectors and a control net.
///
/// Patches are immutable values; refinement returns a new patch.
class NurbsPatch {
public:
    NurbsPatch() = default;
    NurbsPatch(KnotVector knots_u, KnotVector knots_v, ControlNet net);

    const KnotVector& knots_u() const { return knots_u_; }
    const KnotVector& knots_v() const { return knots_v_; }
    const KnotVector& knots(int direction) const { return direction == 0 ? knots_u_ : knots_v_; }
    const ControlNet& net() const { return net_; }

    int degree_u() const { return knots_u_.degree(); }
    int degree_v() const { return knots_v_.degree(); }
    int count_u() const { return net_.count_u; }
    int count_v() const { return net_.count_v; }
    int size() const { return net_.size(); }
    int index(int i, int j) const { return net_.index(i, j); }

    /// True when every weight equals one, i.e. the patch is a plain B-spline.
    bool is_polynomial() const;

private:
    KnotVector knots_u_;
    KnotVector knots_v_;
    ControlNet net_;
};

/// Geometry map, Jacobian and active rational basis at one parameter point.
struct PatchPoint {
    Eigen::Vector2d param = Eigen::Vector2d::Zero();
    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    Eigen::Matrix2d jacobian = Eigen::Matrix2d::Zero();  ///< columns dx/dxi, dx/deta
    std::vector<int> indices;                             ///< active control point indices
    Eigen::VectorXd values;                               ///< R_I at the point
    Points2 param_gradients;                              ///< (dR_I/dxi, dR_I/deta)

    double det() const { return jacobian.determinant(); }
    /// dR_I/dx via the inverse Jacobian.
    Points2 physical_gradients() const;
};

/// Evaluates the patch at (xi, eta); throws GeometryError where det J <= 0.
PatchPoint eval_patch(const NurbsPatch& patch, double xi, double eta);

/// Same evaluation without the Jacobian sign check.
PatchPoint eval_patch_unchecked(const NurbsPatch& patch, double xi, double eta);

/// Physical point only.
Eigen::Vector2d map_point(const NurbsPatch& patch, double xi, double eta);

/// Bilinear patch with corners (x0,y0)-(x1,y1), unit weights.
NurbsPatch rectangle_patch(double x0, double y0, double x1, double y1);

inline NurbsPatch unit_square_patch() { return rectangle_patch(0.0, 0.0, 1.0, 1.0); }

}  // namespace igahmm
