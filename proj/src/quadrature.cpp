#include "igahmm/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "igahmm/errors.hpp"

namespace igahmm {

GaussRule gauss_legendre(int n) {
    if (n < 1 || n > 16) {
        std::ostringstream os;
        os << "Gauss-Legendre: point count " << n << " outside [1, 16]";
        throw ConfigError(os.str());
    }
    GaussRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // P_n(x) and P_n'(x) by the three-term recurrence
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.points[i] = -x;
        rule.points[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.points[n / 2] = 0.0;
    return rule;
}

std::vector<Element> patch_elements(const NurbsPatch& patch) {
    const auto su = patch.knots_u().element_spans();
    const auto sv = patch.knots_v().element_spans();
    std::vector<Element> out;
    out.reserve(su.size() * sv.size());
    for (int j : sv) {
        for (int i : su) {
            out.push_back({i, j, patch.knots_u()[i], patch.knots_u()[i + 1], patch.knots_v()[j],
                           patch.knots_v()[j + 1]});
        }
    }
    return out;
}

std::vector<QuadraturePoint> element_rule(const NurbsPatch& patch, const Element& e, int points_per_dir) {
    const GaussRule g = gauss_legendre(points_per_dir);
    const double hu = 0.5 * (e.u1 - e.u0);
    const double hv = 0.5 * (e.v1 - e.v0);
    std::vector<QuadraturePoint> out;
    out.reserve(static_cast<std::size_t>(points_per_dir * points_per_dir));
    for (int b = 0; b < points_per_dir; ++b) {
        for (int a = 0; a < points_per_dir; ++a) {
            const double xi = e.u0 + hu * (g.points[a] + 1.0);
            const double eta = e.v0 + hv * (g.points[b] + 1.0);
            const PatchPoint pt = eval_patch(patch, xi, eta);
            const double det = pt.det();
            out.push_back({pt.param, pt.x, g.weights[a] * g.weights[b] * hu * hv * std::abs(det), det});
        }
    }
    return out;
}

}  // namespace igahmm
