#pragma once

#include <vector>

#include <Eigen/Core>

#include "igahmm/nurbs_patch.hpp"

namespace igahmm {

/// Gauss-Legendre rule on the parent interval [-1, 1].
struct GaussRule {
    Eigen::VectorXd points;
    Eigen::VectorXd weights;
};

/// n-point rule, 1 <= n <= 16, nodes by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

/// A non-empty knot span pair (one element of the parameter mesh).
struct Element {
    int span_u = 0;
    int span_v = 0;
    double u0 = 0, u1 = 0, v0 = 0, v1 = 0;
};

/// Non-empty elements of a patch, v-major (u index runs fastest).
std::vector<Element> patch_elements(const NurbsPatch& patch);

struct QuadraturePoint {
    Eigen::Vector2d param;  ///< parametric location
    Eigen::Vector2d x;      ///< physical location
    double weight = 0;      ///< parent weight * span scaling * |det J|
    double jacobian_det = 0;
};

/// Tensor rule on one element: parent square -> knot span -> physical element.
std::vector<QuadraturePoint> element_rule(const NurbsPatch& patch, const Element& element, int points_per_dir);

/// Integral of a function on the parent interval mapped to [a, b] with a composite rule.
template <typename F>
double integrate_1d(F&& f, double a, double b, int panels, int points) {
    const GaussRule g = gauss_legendre(points);
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double mid = a + (k + 0.5) * h;
        for (int i = 0; i < points; ++i) sum += 0.5 * h * g.weights[i] * f(mid + 0.5 * h * g.points[i]);
    }
    return sum;
}

}  // namespace igahmm
