#include "igahmm/knot_vector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "igahmm/errors.hpp"

namespace igahmm {

namespace {

constexpr double kRangeSlack = 1e-13;

}  // namespace

KnotVector::KnotVector(std::vector<double> knots, int degree) : knots_(std::move(knots)), degree_(degree) {
    if (degree_ < 0) throw ConfigError("knot vector: negative degree");
    const auto p = static_cast<std::size_t>(degree_);
    if (knots_.size() < 2 * (p + 1)) {
        std::ostringstream os;
        os << "knot vector: " << knots_.size() << " knots is too short for degree " << degree_;
        throw ConfigError(os.str());
    }
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        if (!(knots_[i] <= knots_[i + 1])) throw ConfigError("knot vector: knots must be non-decreasing");
    }
    const double lo = knots_.front();
    const double hi = knots_.back();
    if (!(hi > lo)) throw ConfigError("knot vector: empty parameter range");

    // open: exactly p+1 copies of each end knot
    for (std::size_t i = 0; i <= p; ++i) {
        if (knots_[i] != lo || knots_[knots_.size() - 1 - i] != hi)
            throw ConfigError("knot vector: end knots must be repeated p+1 times (open knot vector)");
    }
    if (knots_[p + 1] == lo || knots_[knots_.size() - p - 2] == hi)
        throw ConfigError("knot vector: end knots repeated more than p+1 times");

    if (lo != 0.0 || hi != 1.0) {
        for (double& k : knots_) k = (k - lo) / (hi - lo);
        for (std::size_t i = 0; i <= p; ++i) {
            knots_[i] = 0.0;
            knots_[knots_.size() - 1 - i] = 1.0;
        }
    }

    for (double u : unique_knots()) {
        if (u == 0.0 || u == 1.0) continue;
        if (multiplicity(u) > degree_) {
            std::ostringstream os;
            os << "knot vector: interior knot " << u << " has multiplicity " << multiplicity(u) << " > degree "
               << degree_;
            throw ConfigError(os.str());
        }
    }
}

std::vector<double> KnotVector::unique_knots() const {
    std::vector<double> out(knots_);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int KnotVector::multiplicity(double value) const {
    return static_cast<int>(std::count(knots_.begin(), knots_.end(), value));
}

int KnotVector::find_span(double xi) const {
    if (!(xi >= -kRangeSlack && xi <= 1.0 + kRangeSlack)) {
        std::ostringstream os;
        os << "parameter " << xi << " outside knot range [0, 1]";
        throw GeometryError(os.str());
    }
    const int n = num_basis();
    if (xi >= knots_[static_cast<std::size_t>(n)]) return n - 1;
    if (xi <= 0.0) return degree_;
    // first knot strictly greater than xi, searched over the span range [p, n]
    const auto first = knots_.begin() + degree_;
    const auto last = knots_.begin() + n + 1;
    const auto it = std::upper_bound(first, last, xi);
    return static_cast<int>(it - knots_.begin()) - 1;
}

std::vector<int> KnotVector::element_spans() const {
    std::vector<int> spans;
    for (int i = degree_; i < num_basis(); ++i) {
        if (knots_[static_cast<std::size_t>(i)] < knots_[static_cast<std::size_t>(i) + 1]) spans.push_back(i);
    }
    return spans;
}

Eigen::VectorXd KnotVector::greville() const {
    Eigen::VectorXd g(num_basis());
    for (int i = 0; i < num_basis(); ++i) {
        double s = 0.0;
        for (int k = 1; k <= degree_; ++k) s += knots_[static_cast<std::size_t>(i + k)];
        g[i] = degree_ > 0 ? s / degree_ : 0.5 * (knots_[static_cast<std::size_t>(i)] + knots_[static_cast<std::size_t>(i) + 1]);
    }
    return g;
}

BasisSpan eval_basis(const KnotVector& kv, double xi) { return eval_basis(kv, kv.find_span(xi), xi); }

BasisSpan eval_basis(const KnotVector& kv, int span, double xi) {
    const int p = kv.degree();
    xi = std::clamp(xi, 0.0, 1.0);

    // ndu: upper triangle holds basis values by degree, lower triangle knot differences
    Eigen::MatrixXd ndu(p + 1, p + 1);
    Eigen::VectorXd left(p + 1), right(p + 1);
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = xi - kv[span + 1 - j];
        right[j] = kv[span + j] - xi;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[r + 1] + left[j - r];
            // a zero knot difference means a zero-length support term: 0/0 := 0
            const double temp = ndu(j, r) != 0.0 ? ndu(r, j - 1) / ndu(j, r) : 0.0;
            ndu(r, j) = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu(j, j) = saved;
    }

    BasisSpan out;
    out.first_index = span - p;
    out.values.resize(p + 1);
    out.derivs.setZero(p + 1);
    for (int r = 0; r <= p; ++r) out.values[r] = ndu(r, p);
    if (p == 0) return out;

    for (int r = 0; r <= p; ++r) {
        double d = 0.0;
        if (r >= 1 && ndu(p, r - 1) != 0.0) d += ndu(r - 1, p - 1) / ndu(p, r - 1);
        if (r <= p - 1 && ndu(p, r) != 0.0) d -= ndu(r, p - 1) / ndu(p, r);
        out.derivs[r] = d * p;
    }
    return out;
}

}  // namespace igahmm
