#include "igahmm/refinement.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/LU>

#include "igahmm/errors.hpp"

namespace igahmm {

namespace {

// Curves along `dir`: row r is the r-th control point along dir, column block
// 3*o holds (w x, w y, w) of the o-th curve.
Eigen::MatrixXd to_homogeneous(const NurbsPatch& patch, Direction dir) {
    const int n_dir = dir == Direction::U ? patch.count_u() : patch.count_v();
    const int n_other = dir == Direction::U ? patch.count_v() : patch.count_u();
    Eigen::MatrixXd h(n_dir, 3 * n_other);
    for (int r = 0; r < n_dir; ++r) {
        for (int o = 0; o < n_other; ++o) {
            const int idx = dir == Direction::U ? patch.index(r, o) : patch.index(o, r);
            const double w = patch.net().weights[idx];
            h(r, 3 * o + 0) = w * patch.net().points(idx, 0);
            h(r, 3 * o + 1) = w * patch.net().points(idx, 1);
            h(r, 3 * o + 2) = w;
        }
    }
    return h;
}

NurbsPatch from_homogeneous(const NurbsPatch& patch, Direction dir, const Eigen::MatrixXd& h, KnotVector kv) {
    const int n_dir = static_cast<int>(h.rows());
    const int n_other = static_cast<int>(h.cols()) / 3;
    ControlNet net;
    net.count_u = dir == Direction::U ? n_dir : n_other;
    net.count_v = dir == Direction::U ? n_other : n_dir;
    net.points.resize(net.size(), 2);
    net.weights.resize(net.size());
    for (int r = 0; r < n_dir; ++r) {
        for (int o = 0; o < n_other; ++o) {
            const int idx = dir == Direction::U ? net.index(r, o) : net.index(o, r);
            const double w = h(r, 3 * o + 2);
            net.weights[idx] = w;
            net.points(idx, 0) = h(r, 3 * o + 0) / w;
            net.points(idx, 1) = h(r, 3 * o + 1) / w;
        }
    }
    if (dir == Direction::U) return NurbsPatch(std::move(kv), patch.knots_v(), std::move(net));
    return NurbsPatch(patch.knots_u(), std::move(kv), std::move(net));
}

// Boehm single-knot insertion on all curves at once.
void insert_one(const KnotVector& kv, double u, Eigen::MatrixXd& h, std::vector<double>& out_knots) {
    const int p = kv.degree();
    const int n = kv.num_basis();
    const int k = kv.find_span(u);
    const int s = kv.multiplicity(u);

    Eigen::MatrixXd q(n + 1, h.cols());
    for (int i = 0; i <= k - p; ++i) q.row(i) = h.row(i);
    for (int i = k - p + 1; i <= k - s; ++i) {
        const double alpha = (u - kv[i]) / (kv[i + p] - kv[i]);
        q.row(i) = alpha * h.row(i) + (1.0 - alpha) * h.row(i - 1);
    }
    for (int i = k - s + 1; i <= n; ++i) q.row(i) = h.row(i - 1);
    h = std::move(q);

    out_knots = kv.knots();
    out_knots.insert(out_knots.begin() + k + 1, u);
}

Eigen::MatrixXd collocation_matrix(const KnotVector& kv, const Eigen::VectorXd& sites) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(sites.size(), kv.num_basis());
    for (Eigen::Index r = 0; r < sites.size(); ++r) {
        const BasisSpan bs = eval_basis(kv, sites[r]);
        for (int a = 0; a < bs.values.size(); ++a) b(r, bs.first_index + a) = bs.values[a];
    }
    return b;
}

}  // namespace

NurbsPatch insert_knots(const NurbsPatch& patch, Direction dir, const std::vector<double>& new_knots) {
    if (new_knots.empty()) return patch;
    KnotVector kv = patch.knots(static_cast<int>(dir));
    Eigen::MatrixXd h = to_homogeneous(patch, dir);
    for (double u : new_knots) {
        if (!(u > 0.0 && u < 1.0)) {
            std::ostringstream os;
            os << "knot insertion: " << u << " is not strictly inside (0, 1)";
            throw ConfigError(os.str());
        }
        if (kv.multiplicity(u) + 1 > kv.degree()) {
            std::ostringstream os;
            os << "knot insertion: multiplicity of " << u << " would exceed degree " << kv.degree();
            throw ConfigError(os.str());
        }
        std::vector<double> knots;
        insert_one(kv, u, h, knots);
        kv = KnotVector(std::move(knots), kv.degree());
    }
    return from_homogeneous(patch, dir, h, std::move(kv));
}

NurbsPatch elevate_degree(const NurbsPatch& patch, Direction dir, int times) {
    if (times < 1) throw ConfigError("degree elevation: times must be >= 1");
    const KnotVector& kv = patch.knots(static_cast<int>(dir));

    std::vector<double> knots;
    for (double u : kv.unique_knots()) {
        const int m = kv.multiplicity(u) + times;
        knots.insert(knots.end(), static_cast<std::size_t>(m), u);
    }
    KnotVector elevated(std::move(knots), kv.degree() + times);

    // The old curve lies in the elevated spline space, so interpolating it at
    // the Greville sites of the new basis recovers the new control points.
    const Eigen::VectorXd sites = elevated.greville();
    const Eigen::MatrixXd b_new = collocation_matrix(elevated, sites);
    const Eigen::MatrixXd b_old = collocation_matrix(kv, sites);
    const Eigen::MatrixXd h = to_homogeneous(patch, dir);
    const Eigen::MatrixXd h_new = b_new.partialPivLu().solve(b_old * h);
    return from_homogeneous(patch, dir, h_new, std::move(elevated));
}

NurbsPatch make_mesh(const NurbsPatch& patch, int elements, int degree, int continuity_k) {
    if (elements < 1) throw ConfigError("mesh: need at least one element per direction");
    if (degree < 1) throw ConfigError("mesh: degree must be >= 1");
    if (continuity_k < 0 || continuity_k >= degree) {
        std::ostringstream os;
        os << "mesh: invalid continuity C^" << continuity_k << " for degree " << degree;
        throw ConfigError(os.str());
    }
    if (patch.degree_u() > degree || patch.degree_v() > degree) {
        std::ostringstream os;
        os << "mesh: patch degree (" << patch.degree_u() << ", " << patch.degree_v() << ") exceeds target "
           << degree;
        throw ConfigError(os.str());
    }

    NurbsPatch out = patch;
    if (out.degree_u() < degree) out = elevate_degree(out, Direction::U, degree - out.degree_u());
    if (out.degree_v() < degree) out = elevate_degree(out, Direction::V, degree - out.degree_v());

    const int target = degree - continuity_k;
    for (Direction dir : {Direction::U, Direction::V}) {
        const KnotVector& kv = out.knots(static_cast<int>(dir));
        std::vector<double> inserts;
        for (int i = 1; i < elements; ++i) {
            const double t = static_cast<double>(i) / elements;
            const int need = target - kv.multiplicity(t);
            for (int c = 0; c < need; ++c) inserts.push_back(t);
        }
        out = insert_knots(out, dir, inserts);
    }
    return out;
}

}  // namespace igahmm
