#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "igahmm/benchmarks.hpp"
#include "igahmm/errors.hpp"
#include "igahmm/macro_solver.hpp"
#include "igahmm/refinement.hpp"
#include "test_support.hpp"

using namespace igahmm;

namespace {

constexpr double kPi = std::numbers::pi;

const EdgeConditions kAllDirichlet{EdgeCondition::Dirichlet, EdgeCondition::Dirichlet, EdgeCondition::Dirichlet,
                                   EdgeCondition::Dirichlet};
const EdgeConditions kAllNeumann{EdgeCondition::Neumann, EdgeCondition::Neumann, EdgeCondition::Neumann,
                                 EdgeCondition::Neumann};

SolutionField solve_with(const MacroMesh& mesh, const MatrixField& a, const ScalarField& f) {
    return solve_macro(apply_boundary_conditions(assemble_macro(mesh, sample_tensor(mesh, a), f), mesh), mesh);
}

Eigen::Matrix2d identity(const Eigen::Vector2d&) { return Eigen::Matrix2d::Identity(); }
double one(const Eigen::Vector2d&) { return 1.0; }

/// Series solution of -lap u = 1 on the unit square with u = 0 on the boundary.
double poisson_series(double x, double y) {
    double u = 0.0;
    for (int m = 1; m < 400; m += 2) {
        for (int n = 1; n < 400; n += 2) {
            u += 16.0 / (std::pow(kPi, 4) * m * n * (m * m + n * n)) * std::sin(m * kPi * x) * std::sin(n * kPi * y);
        }
    }
    return u;
}

}  // namespace

TEST_CASE("bilinear element stiffness and load") {
    const MacroMesh mesh(unit_square_patch(), kAllNeumann);
    CHECK(mesh.num_dofs() == 4);
    CHECK(mesh.num_gauss_points() == 4);
    CHECK(mesh.mesh_size() == doctest::Approx(std::sqrt(2.0)));
    const LinearSystem sys = assemble_macro(mesh, sample_tensor(mesh, identity), one);
    const Eigen::MatrixXd k(sys.matrix);
    // control order (0,0), (1,0), (0,1), (1,1)
    CHECK(k(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(k(0, 1) == doctest::Approx(-1.0 / 6.0));
    CHECK(k(0, 2) == doctest::Approx(-1.0 / 6.0));
    CHECK(k(0, 3) == doctest::Approx(-1.0 / 3.0));
    for (int i = 0; i < 4; ++i) CHECK(sys.load[i] == doctest::Approx(0.25));
}

TEST_CASE("assembly matches an independent point-by-point oracle") {
    for (int trial = 0; trial < 5; ++trial) {
        const int p = testing::uniform_int(1, 3);
        const NurbsPatch patch = testing::random_patch(p, p, 0.1);
        const MacroMesh mesh(patch, kAllNeumann, p + 2);
        Eigen::Matrix2d a;
        a << 2.0, 0.3, 0.3, 1.5;
        const auto tensor = [a](const Eigen::Vector2d& x) { return Eigen::Matrix2d(a * (1.0 + x.x() * x.y())); };
        const auto f = [](const Eigen::Vector2d& x) { return std::cos(x.x()) + x.y(); };
        const LinearSystem sys = assemble_macro(mesh, sample_tensor(mesh, tensor), f);

        Eigen::MatrixXd k = Eigen::MatrixXd::Zero(patch.size(), patch.size());
        Eigen::VectorXd load = Eigen::VectorXd::Zero(patch.size());
        const GaussRule g = gauss_legendre(p + 2);
        for (const Element& e : patch_elements(patch)) {
            for (int i = 0; i < g.points.size(); ++i) {
                for (int j = 0; j < g.points.size(); ++j) {
                    const double xi = e.u0 + 0.5 * (g.points[i] + 1) * (e.u1 - e.u0);
                    const double eta = e.v0 + 0.5 * (g.points[j] + 1) * (e.v1 - e.v0);
                    const PatchPoint pt = eval_patch(patch, xi, eta);
                    const double w = g.weights[i] * g.weights[j] * 0.25 * (e.u1 - e.u0) * (e.v1 - e.v0) * pt.det();
                    const Points2 grad = pt.physical_gradients();
                    for (std::size_t A = 0; A < pt.indices.size(); ++A) {
                        const auto a_ = static_cast<Eigen::Index>(A);
                        load[pt.indices[A]] += w * f(pt.x) * pt.values[a_];
                        for (std::size_t B = 0; B < pt.indices.size(); ++B) {
                            const auto b_ = static_cast<Eigen::Index>(B);
                            k(pt.indices[A], pt.indices[B]) +=
                                w * grad.row(a_).dot(tensor(pt.x) * grad.row(b_).transpose());
                        }
                    }
                }
            }
        }
        const Eigen::MatrixXd dense(sys.matrix);
        CHECK((dense - k).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + k.cwiseAbs().maxCoeff()));
        CHECK((sys.load - load).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("edge classification") {
    const ProblemSpec fast = problem_square_fast();
    const EdgeConditions e = classify_edges(fast.geometry, fast.on_dirichlet);
    CHECK(e[0] == EdgeCondition::Dirichlet);
    CHECK(e[1] == EdgeCondition::Dirichlet);
    CHECK(e[2] == EdgeCondition::Neumann);
    CHECK(e[3] == EdgeCondition::Neumann);

    const ProblemSpec annulus = problem_quarter_annulus();
    CHECK(classify_edges(annulus.geometry, annulus.on_dirichlet) == kAllDirichlet);

    CHECK_THROWS_AS(classify_edges(unit_square_patch(), [](const Eigen::Vector2d& x) { return x.x() < 0.5; }),
                    ConfigError);
}

TEST_CASE("Dirichlet control points are eliminated") {
    const NurbsPatch patch = make_mesh(unit_square_patch(), 4, 2, Continuity::Cmax);
    const MacroMesh mesh(patch, kAllDirichlet);
    CHECK(patch.size() == 36);
    CHECK(mesh.num_dofs() == 16);
    CHECK(mesh.is_dirichlet(0));
    CHECK_FALSE(mesh.is_dirichlet(patch.index(1, 1)));
    CHECK(mesh.num_gauss_points() == 16 * 9);
    CHECK(mesh.mesh_size() == doctest::Approx(std::sqrt(2.0) / 4.0));
    CHECK_THROWS_AS(MacroMesh(elevate_degree(unit_square_patch(), Direction::U, 1), kAllDirichlet), ConfigError);
}

TEST_CASE("zero source gives the zero field") {
    const MacroMesh mesh(make_mesh(quarter_annulus_patch(), 3, 2, Continuity::Cmax), kAllDirichlet);
    const SolutionField u = solve_with(mesh, identity, [](const Eigen::Vector2d&) { return 0.0; });
    CHECK(u.coefficients.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Poisson problem converges to the series solution") {
    const double exact = poisson_series(0.5, 0.5);
    CHECK(exact == doctest::Approx(0.0736713532814).epsilon(1e-6));
    double previous = 1.0;
    for (int n : {4, 8, 16}) {
        const MacroMesh mesh(make_mesh(unit_square_patch(), n, 3, Continuity::Cmax), kAllDirichlet);
        const SolutionField u = solve_with(mesh, identity, one);
        CHECK(u.residual <= 1e-12);
        const double err = std::abs(evaluate(u, 0.5, 0.5).value - exact);
        CHECK(err < previous);
        previous = err;
    }
    CHECK(previous < 1e-6);
}

TEST_CASE("quadratic homogenized solution is reproduced exactly") {
    const ProblemSpec spec = problem_square_fast();
    const MacroMesh mesh = build_macro_mesh(spec, 2, 2);
    const SolutionField u = solve_with(mesh, spec.homogenized, spec.source);
    for (int k = 0; k < 50; ++k) {
        const FieldSample s = evaluate(u, testing::uniform(), testing::uniform());
        CHECK(s.value == doctest::Approx(spec.solution(s.x)).epsilon(1e-12).scale(1.0));
        CHECK((s.gradient - spec.solution_gradient(s.x)).norm() < 1e-11);
    }
}

TEST_CASE("field evaluation reproduces linear functions") {
    const NurbsPatch patch = make_mesh(quarter_annulus_patch(), 3, 3, Continuity::Cmax);
    SolutionField u;
    u.patch = patch;
    u.coefficients = 2.0 * patch.net().points.col(0) - patch.net().points.col(1);
    for (int k = 0; k < 50; ++k) {
        const FieldSample s = evaluate(u, testing::uniform(), testing::uniform());
        CHECK(s.value == doctest::Approx(2.0 * s.x.x() - s.x.y()).epsilon(1e-13).scale(1.0));
        CHECK(s.gradient.x() == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(s.gradient.y() == doctest::Approx(-1.0).epsilon(1e-12));
    }
}

TEST_CASE("solution gradient agrees with finite differences") {
    const ProblemSpec spec = problem_quarter_annulus();
    const MacroMesh mesh = build_macro_mesh(spec, 4, 3);
    const SolutionField u = solve_with(mesh, spec.homogenized, spec.source);
    const FieldSample s = evaluate(u, 0.37, 0.61);
    const double h = 1e-6;
    const FieldSample a = evaluate(u, 0.37 + h, 0.61), b = evaluate(u, 0.37 - h, 0.61);
    const double dvalue = a.value - b.value;
    const Eigen::Vector2d dx = a.x - b.x;
    CHECK(dvalue == doctest::Approx(s.gradient.dot(dx)).epsilon(1e-6));
}

TEST_CASE("reduced system residual and energy identity") {
    const ProblemSpec spec = problem_quarter_annulus();
    const MacroMesh mesh = build_macro_mesh(spec, 4, 2);
    const ReducedSystem red =
        apply_boundary_conditions(assemble_macro(mesh, sample_tensor(mesh, spec.homogenized), spec.source), mesh);
    const SolutionField u = solve_macro(red, mesh);
    Eigen::VectorXd free(mesh.num_dofs());
    for (int k = 0; k < mesh.patch().size(); ++k) {
        if (mesh.dof(k) >= 0) free[mesh.dof(k)] = u.coefficients[k];
    }
    CHECK((red.matrix * free - red.load).norm() <= 1e-12 * red.load.norm());
    // Galerkin: B(u, u) = <f, u>
    CHECK(free.dot(red.matrix * free) == doctest::Approx(red.load.dot(free)).epsilon(1e-12));
}

TEST_CASE("solver failures") {
    const MacroMesh mesh(make_mesh(unit_square_patch(), 2, 1, 0), kAllDirichlet);
    const auto negative = [](const Eigen::Vector2d&) { return Eigen::Matrix2d(-Eigen::Matrix2d::Identity()); };
    CHECK_THROWS_AS(solve_with(mesh, negative, one), SolverError);

    std::vector<Eigen::Matrix2d> short_table(static_cast<std::size_t>(mesh.num_gauss_points() - 1),
                                             Eigen::Matrix2d::Identity());
    CHECK_THROWS_AS(assemble_macro(mesh, short_table, one), SolverError);

    const MacroMesh no_free(unit_square_patch(), kAllDirichlet);
    CHECK_THROWS_AS(apply_boundary_conditions(assemble_macro(no_free, sample_tensor(no_free, identity), one), no_free),
                    ConfigError);
}

TEST_CASE("solution CSV layout") {
    const ProblemSpec spec = problem_square_fast();
    const MacroMesh mesh = build_macro_mesh(spec, 2, 2);
    const SolutionField u = solve_with(mesh, spec.homogenized, spec.source);
    std::ostringstream out;
    write_solution_csv(out, u, 4);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "xi,eta,x,y,u");
    int rows = 0;
    std::string second;
    while (std::getline(in, line)) {
        if (rows == 1) second = line;
        ++rows;
    }
    CHECK(rows == 25);
    CHECK(second.rfind("0.250000,0.000000,", 0) == 0);
    CHECK(evaluate_grid(u, 4).size() == 25);
    CHECK_THROWS_AS(evaluate_grid(u, 0), ConfigError);
}
