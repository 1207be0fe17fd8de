#include "igahmm/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "igahmm/errors.hpp"
#include "igahmm/quadrature.hpp"

namespace igahmm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kBoundaryTol = 1e-9;

double harmonic_mean_sine(double base, double amplitude) {
    // (int_0^1 dy / (base + amplitude (sin 2 pi y + 2)))^-1 with a 4 x 16-point rule
    const double integral = integrate_1d(
        [&](double y) { return 1.0 / (base + amplitude * (std::sin(2.0 * kPi * y) + 2.0)); }, 0.0, 1.0, 4, 16);
    return 1.0 / integral;
}

TensorField fast_cosine_tensor(double eps) {
    TensorField t;
    t.eps = eps;
    t.fn = [](const Eigen::Vector2d&, const Eigen::Vector2d& fast) -> Eigen::Matrix2d {
        return (std::cos(2.0 * kPi * fast.x()) + 2.0) * Eigen::Matrix2d::Identity();
    };
    return t;
}

Eigen::Matrix2d fast_cosine_homogenized(const Eigen::Vector2d&) { return Eigen::Vector2d(kSqrt3, 2.0).asDiagonal(); }

}  // namespace

ProblemSpec problem_square_fast(double eps) {
    ProblemSpec s;
    s.id = "square_fast";
    s.geometry = unit_square_patch();
    s.tensor = fast_cosine_tensor(eps);
    s.source = [](const Eigen::Vector2d&) { return 1.0; };
    s.on_dirichlet = [](const Eigen::Vector2d& x) {
        return std::abs(x.x()) < kBoundaryTol || std::abs(x.x() - 1.0) < kBoundaryTol;
    };
    s.edges = classify_edges(s.geometry, s.on_dirichlet);
    s.homogenized = fast_cosine_homogenized;
    s.solution = [](const Eigen::Vector2d& x) { return (x.x() - x.x() * x.x()) / (2.0 * kSqrt3); };
    s.solution_gradient = [](const Eigen::Vector2d& x) -> Eigen::Vector2d {
        return {(1.0 - 2.0 * x.x()) / (2.0 * kSqrt3), 0.0};
    };
    return s;
}

Eigen::Matrix2d slowfast_homogenized(const Eigen::Vector2d& x) {
    const double x1 = x.x(), x2 = x.y();
    Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
    a(0, 0) = harmonic_mean_sine(x1 * x1 + 0.2, x2 + 1.0);
    a(1, 1) = harmonic_mean_sine(x2 * x2 + 0.05, x1 * x2 + 1.0);
    return a;
}

ProblemSpec problem_square_slowfast(double eps) {
    ProblemSpec s;
    s.id = "square_slowfast";
    s.geometry = unit_square_patch();
    s.tensor.eps = eps;
    s.tensor.fn = [](const Eigen::Vector2d& slow, const Eigen::Vector2d& fast) -> Eigen::Matrix2d {
        const double x1 = slow.x(), x2 = slow.y();
        Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
        a(0, 0) = x1 * x1 + 0.2 + (x2 + 1.0) * (std::sin(2.0 * kPi * fast.x()) + 2.0);
        a(1, 1) = x2 * x2 + 0.05 + (x1 * x2 + 1.0) * (std::sin(2.0 * kPi * fast.y()) + 2.0);
        return a;
    };
    s.source = [](const Eigen::Vector2d&) { return 1.0; };
    s.on_dirichlet = [](const Eigen::Vector2d& x) {
        return std::abs(x.x()) < kBoundaryTol || std::abs(x.x() - 1.0) < kBoundaryTol;
    };
    s.edges = classify_edges(s.geometry, s.on_dirichlet);
    s.homogenized = slowfast_homogenized;
    return s;
}

NurbsPatch quarter_annulus_patch() {
    ControlNet net;
    net.count_u = 3;
    net.count_v = 3;
    net.points.resize(9, 2);
    net.points << 0, 1, 1, 1, 1, 0, 0, 1.5, 1.5, 1.5, 1.5, 0, 0, 2, 2, 2, 2, 0;
    net.weights.resize(9);
    const double w = 1.0 / std::numbers::sqrt2;
    net.weights << 1, w, 1, 1, w, 1, 1, w, 1;
    const std::vector<double> k{0, 0, 0, 1, 1, 1};
    return NurbsPatch(KnotVector(k, 2), KnotVector(k, 2), net);
}

ProblemSpec problem_quarter_annulus(double eps) {
    ProblemSpec s;
    s.id = "quarter_annulus";
    s.geometry = quarter_annulus_patch();
    s.tensor = fast_cosine_tensor(eps);
    s.source = [](const Eigen::Vector2d& x) {
        const double x1 = x.x(), x2 = x.y();
        const double r2 = x1 * x1 + x2 * x2, r = std::sqrt(r2);
        const double num = 2.0 * x1 * x1 * x1 * x2 * (18.0 * r + 4.0 * kSqrt3 - 24.0) +
                           2.0 * x1 * x2 * x2 * x2 * (9.0 * kSqrt3 * r - 12.0 * kSqrt3 + 8.0);
        return -num / (r2 * r2 * r2);
    };
    s.on_dirichlet = [](const Eigen::Vector2d& x) {
        const double r = x.norm();
        return std::abs(x.x()) < kBoundaryTol || std::abs(x.y()) < kBoundaryTol || std::abs(r - 1.0) < kBoundaryTol ||
               std::abs(r - 2.0) < kBoundaryTol;
    };
    s.edges = classify_edges(s.geometry, s.on_dirichlet);
    s.homogenized = fast_cosine_homogenized;
    s.solution = [](const Eigen::Vector2d& x) {
        const double x1 = x.x(), x2 = x.y();
        const double r2 = x1 * x1 + x2 * x2;
        return 2.0 * x1 * x2 + x1 * x2 * (4.0 - 6.0 * std::sqrt(r2)) / r2;
    };
    s.solution_gradient = [](const Eigen::Vector2d& x) -> Eigen::Vector2d {
        const double x1 = x.x(), x2 = x.y();
        const double r2 = x1 * x1 + x2 * x2, r = std::sqrt(r2);
        const double g = 4.0 / r2 - 6.0 / r;              // u = x1 x2 (2 + g)
        const double dg = 6.0 / (r2 * r) - 8.0 / (r2 * r2);  // dg/dxi = xi * dg
        return {x2 * (2.0 + g) + x1 * x1 * x2 * dg, x1 * (2.0 + g) + x1 * x2 * x2 * dg};
    };
    return s;
}

std::vector<std::string> problem_names() { return {"square_fast", "square_slowfast", "quarter_annulus"}; }

ProblemSpec problem_by_name(const std::string& name, double eps) {
    if (name == "square_fast") return problem_square_fast(eps);
    if (name == "square_slowfast") return problem_square_slowfast(eps);
    if (name == "quarter_annulus") return problem_quarter_annulus(eps);
    throw ConfigError("unknown problem '" + name + "' (square_fast, square_slowfast, quarter_annulus)");
}

NurbsPatch bilinear_approximation(const NurbsPatch& patch, int elements) {
    if (elements < 1) throw ConfigError("bilinear approximation: need at least one element");
    std::vector<double> k{0.0, 0.0};
    for (int i = 1; i < elements; ++i) k.push_back(static_cast<double>(i) / elements);
    k.insert(k.end(), {1.0, 1.0});
    ControlNet net;
    net.count_u = elements + 1;
    net.count_v = elements + 1;
    net.points.resize(net.size(), 2);
    net.weights = Eigen::VectorXd::Ones(net.size());
    for (int j = 0; j <= elements; ++j) {
        for (int i = 0; i <= elements; ++i) {
            const Eigen::Vector2d x = map_point(patch, static_cast<double>(i) / elements, static_cast<double>(j) / elements);
            net.points.row(net.index(i, j)) = x.transpose();
        }
    }
    return NurbsPatch(KnotVector(k, 1), KnotVector(k, 1), net);
}

MacroMesh build_macro_mesh(const ProblemSpec& spec, int elements, int degree, Continuity continuity) {
    const int geometry_degree = std::max(spec.geometry.degree_u(), spec.geometry.degree_v());
    if (degree >= geometry_degree) return MacroMesh(make_mesh(spec.geometry, elements, degree, continuity), spec.edges);
    if (degree != 1) {
        std::ostringstream os;
        os << "macro degree " << degree << " is below the geometry degree " << geometry_degree;
        throw ConfigError(os.str());
    }
    return MacroMesh(bilinear_approximation(spec.geometry, elements), spec.edges);
}

HmmSolution solve_problem(const ProblemSpec& spec, const MacroMesh& mesh, const HmmSettings& settings) {
    return solve_hmm(mesh, spec.tensor, spec.source, settings);
}

SolutionField reference_solve(const ProblemSpec& spec, const MatrixField& tensor, int elements, int degree,
                              Continuity continuity) {
    if (!tensor) throw ConfigError("reference solve for '" + spec.id + "' needs a homogenized tensor");
    const MacroMesh mesh = build_macro_mesh(spec, elements, degree, continuity);
    const LinearSystem full = assemble_macro(mesh, sample_tensor(mesh, tensor), spec.source);
    return solve_macro(apply_boundary_conditions(full, mesh), mesh);
}

namespace {

struct Sample {
    double value;
    Eigen::Vector2d gradient;
};

Sample sample_field(const SolutionField& field, const PatchPoint& pt) {
    const Points2 g = pt.physical_gradients();
    Sample s{0.0, Eigen::Vector2d::Zero()};
    for (std::size_t k = 0; k < pt.indices.size(); ++k) {
        const double c = field.coefficients[pt.indices[k]];
        s.value += pt.values[static_cast<Eigen::Index>(k)] * c;
        s.gradient += c * g.row(static_cast<Eigen::Index>(k)).transpose();
    }
    return s;
}

ErrorNorms finish(double e0, double e1, double r0, double r1) {
    ErrorNorms n;
    n.abs_l2 = std::sqrt(e0);
    n.abs_h1 = std::sqrt(e0 + e1);
    n.ref_l2 = std::sqrt(r0);
    n.ref_h1 = std::sqrt(r0 + r1);
    return n;
}

}  // namespace

ErrorNorms error_norms(const SolutionField& field, const ScalarField& u, const VectorField& grad, int points) {
    const NurbsPatch& patch = field.patch;
    const int n = points > 0 ? points : std::max(patch.degree_u(), patch.degree_v()) + 3;
    double e0 = 0, e1 = 0, r0 = 0, r1 = 0;
    for (const Element& e : patch_elements(patch)) {
        for (const QuadraturePoint& q : element_rule(patch, e, n)) {
            const Sample s = sample_field(field, eval_patch(patch, q.param.x(), q.param.y()));
            const double uv = u(q.x);
            const Eigen::Vector2d gv = grad(q.x);
            e0 += q.weight * (s.value - uv) * (s.value - uv);
            e1 += q.weight * (s.gradient - gv).squaredNorm();
            r0 += q.weight * uv * uv;
            r1 += q.weight * gv.squaredNorm();
        }
    }
    return finish(e0, e1, r0, r1);
}

ErrorNorms error_norms(const SolutionField& field, const SolutionField& reference, int points) {
    const NurbsPatch& a = field.patch;
    const NurbsPatch& b = reference.patch;
    const double scale = std::max(1.0, (map_point(b, 1, 1) - map_point(b, 0, 0)).norm());
    for (double xi : {0.0, 0.37, 1.0}) {
        for (double eta : {0.0, 0.61, 1.0}) {
            if ((map_point(a, xi, eta) - map_point(b, xi, eta)).norm() > 1e-10 * scale)
                throw ConfigError("error norms: field and reference live on different domains");
        }
    }
    const std::vector<Element> ea = patch_elements(a), eb = patch_elements(b);
    const NurbsPatch& fine = eb.size() >= ea.size() ? b : a;
    const std::vector<Element>& elements = eb.size() >= ea.size() ? eb : ea;
    const int degree = std::max({a.degree_u(), a.degree_v(), b.degree_u(), b.degree_v()});
    const int n = points > 0 ? points : degree + 3;
    if (n > 16) throw ConfigError("error norms: quadrature order above 16 points per direction");

    double e0 = 0, e1 = 0, r0 = 0, r1 = 0;
    for (const Element& e : elements) {
        for (const QuadraturePoint& q : element_rule(fine, e, n)) {
            const Sample s = sample_field(field, eval_patch(a, q.param.x(), q.param.y()));
            const Sample r = sample_field(reference, eval_patch(b, q.param.x(), q.param.y()));
            e0 += q.weight * (s.value - r.value) * (s.value - r.value);
            e1 += q.weight * (s.gradient - r.gradient).squaredNorm();
            r0 += q.weight * r.value * r.value;
            r1 += q.weight * r.gradient.squaredNorm();
        }
    }
    return finish(e0, e1, r0, r1);
}

}  // namespace igahmm
