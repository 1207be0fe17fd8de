#include "igahmm/nurbs_patch.hpp"

#include <sstream>

#include <Eigen/LU>

#include "igahmm/errors.hpp"

namespace igahmm {

NurbsPatch::NurbsPatch(KnotVector knots_u, KnotVector knots_v, ControlNet net)
    : knots_u_(std::move(knots_u)), knots_v_(std::move(knots_v)), net_(std::move(net)) {
    if (net_.count_u != knots_u_.num_basis() || net_.count_v != knots_v_.num_basis()) {
        std::ostringstream os;
        os << "control net " << net_.count_u << "x" << net_.count_v << " does not match knot vectors ("
           << knots_u_.num_basis() << "x" << knots_v_.num_basis() << " basis functions)";
        throw ConfigError(os.str());
    }
    if (net_.points.rows() != net_.size() || net_.weights.size() != net_.size())
        throw ConfigError("control net: point/weight count mismatch");
    if ((net_.weights.array() <= 0.0).any()) throw ConfigError("control net: weights must be positive");
}

bool NurbsPatch::is_polynomial() const { return (net_.weights.array() == 1.0).all(); }

Points2 PatchPoint::physical_gradients() const {
    // rows of param_gradients are (dR/dxi, dR/deta); dR/dx = grad_param^T J^{-1}
    return param_gradients * jacobian.inverse();
}

PatchPoint eval_patch_unchecked(const NurbsPatch& patch, double xi, double eta) {
    const BasisSpan bu = eval_basis(patch.knots_u(), xi);
    const BasisSpan bv = eval_basis(patch.knots_v(), eta);
    const int nu = static_cast<int>(bu.values.size());
    const int nv = static_cast<int>(bv.values.size());
    const int n = nu * nv;
    const ControlNet& net = patch.net();

    PatchPoint pt;
    pt.param = Eigen::Vector2d(xi, eta);
    pt.indices.resize(static_cast<std::size_t>(n));
    pt.values.resize(n);
    pt.param_gradients.resize(n, 2);

    double w = 0.0, w_u = 0.0, w_v = 0.0;
    for (int b = 0; b < nv; ++b) {
        for (int a = 0; a < nu; ++a) {
            const int k = a + nu * b;
            const int idx = net.index(bu.first_index + a, bv.first_index + b);
            const double wi = net.weights[idx];
            pt.indices[static_cast<std::size_t>(k)] = idx;
            pt.values[k] = bu.values[a] * bv.values[b] * wi;
            pt.param_gradients(k, 0) = bu.derivs[a] * bv.values[b] * wi;
            pt.param_gradients(k, 1) = bu.values[a] * bv.derivs[b] * wi;
            w += pt.values[k];
            w_u += pt.param_gradients(k, 0);
            w_v += pt.param_gradients(k, 1);
        }
    }
    // quotient rule for R_I = N_I w_I / W
    for (int k = 0; k < n; ++k) {
        const double r = pt.values[k] / w;
        pt.param_gradients(k, 0) = (pt.param_gradients(k, 0) - r * w_u) / w;
        pt.param_gradients(k, 1) = (pt.param_gradients(k, 1) - r * w_v) / w;
        pt.values[k] = r;
    }
    for (int k = 0; k < n; ++k) {
        const auto P = net.points.row(pt.indices[static_cast<std::size_t>(k)]).transpose();
        pt.x += pt.values[k] * P;
        pt.jacobian.col(0) += pt.param_gradients(k, 0) * P;
        pt.jacobian.col(1) += pt.param_gradients(k, 1) * P;
    }
    return pt;
}

PatchPoint eval_patch(const NurbsPatch& patch, double xi, double eta) {
    PatchPoint pt = eval_patch_unchecked(patch, xi, eta);
    if (!(pt.det() > 0.0)) {
        std::ostringstream os;
        os << "singular geometry Jacobian (det = " << pt.det() << ") at parameter (" << xi << ", " << eta << ")";
        throw GeometryError(os.str());
    }
    return pt;
}

Eigen::Vector2d map_point(const NurbsPatch& patch, double xi, double eta) {
    return eval_patch_unchecked(patch, xi, eta).x;
}

NurbsPatch rectangle_patch(double x0, double y0, double x1, double y1) {
    ControlNet net;
    net.count_u = 2;
    net.count_v = 2;
    net.points.resize(4, 2);
    net.points << x0, y0, x1, y0, x0, y1, x1, y1;
    net.weights = Eigen::VectorXd::Ones(4);
    return NurbsPatch(KnotVector({0, 0, 1, 1}, 1), KnotVector({0, 0, 1, 1}, 1), std::move(net));
}

}  // namespace igahmm
