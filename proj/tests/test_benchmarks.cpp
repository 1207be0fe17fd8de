#include <doctest.h>

#include <cmath>
#include <numbers>

#include "igahmm/benchmarks.hpp"
#include "igahmm/convergence.hpp"
#include "igahmm/errors.hpp"
#include "test_support.hpp"

using namespace igahmm;

namespace {

const double kSqrt3 = std::sqrt(3.0);

SolutionField zero_field(const NurbsPatch& patch) {
    return {patch, Eigen::VectorXd::Zero(patch.size()), 0.0};
}

}  // namespace

TEST_CASE("square_fast data") {
    const ProblemSpec spec = problem_square_fast();
    CHECK(spec.id == "square_fast");
    CHECK(spec.has_solution());
    const Eigen::Matrix2d a0 = spec.homogenized({0.3, 0.4});
    CHECK(a0(0, 0) == doctest::Approx(kSqrt3));
    CHECK(a0(1, 1) == doctest::Approx(2.0));
    CHECK(a0(0, 1) == 0.0);
    CHECK(spec.solution({0.5, 0.1}) == doctest::Approx(0.25 / (2.0 * kSqrt3)));
    CHECK(spec.solution({0.0, 0.7}) == 0.0);
    CHECK(spec.solution({1.0, 0.7}) == 0.0);
    // a^eps at x = 0 is 3 I
    CHECK(spec.tensor.at({0.0, 0.5})(0, 0) == doctest::Approx(3.0));
    CHECK(spec.source({0.2, 0.2}) == 1.0);
}

TEST_CASE("square_slowfast homogenized tensor matches the frozen quadrature oracle") {
    const ProblemSpec spec = problem_square_slowfast();
    CHECK_FALSE(spec.has_solution());
    struct Case {
        Eigen::Vector2d x;
        double a11, a22;
    };
    const Case cases[] = {{{0.0, 0.0}, 1.959591794226542, 1.789553016817328},
                          {{0.5, 0.5}, 3.106847276581196, 2.505493963273510},
                          {{0.25, 0.75}, 3.330751604367999, 2.741350032374560}};
    for (const Case& c : cases) {
        const Eigen::Matrix2d a0 = slowfast_homogenized(c.x);
        CHECK(a0(0, 0) == doctest::Approx(c.a11).epsilon(1e-13));
        CHECK(a0(1, 1) == doctest::Approx(c.a22).epsilon(1e-13));
        CHECK(a0(0, 1) == 0.0);
        CHECK(a0(1, 0) == 0.0);
    }
}

TEST_CASE("square_slowfast homogenized entries lie between harmonic and arithmetic means") {
    const ProblemSpec spec = problem_square_slowfast();
    for (int k = 0; k < 20; ++k) {
        const Eigen::Vector2d x(testing::uniform(), testing::uniform());
        const Eigen::Matrix2d a0 = spec.homogenized(x);
        // arithmetic mean over one period of each diagonal entry
        double mean11 = 0, mean22 = 0;
        const int n = 4096;
        for (int i = 0; i < n; ++i) {
            const Eigen::Vector2d y((i + 0.5) / n, (i + 0.5) / n);
            const Eigen::Matrix2d a = spec.tensor.fn(x, y);
            mean11 += a(0, 0) / n;
            mean22 += a(1, 1) / n;
        }
        CHECK(a0(0, 0) <= mean11 + 1e-12);
        CHECK(a0(1, 1) <= mean22 + 1e-12);
        CHECK(a0(0, 0) > 0.0);
    }
}

TEST_CASE("quarter annulus data") {
    const ProblemSpec spec = problem_quarter_annulus();
    const ControlNet& net = spec.geometry.net();
    CHECK(net.points(4, 0) == 1.5);
    CHECK(net.points(4, 1) == 1.5);
    CHECK(net.weights[4] == doctest::Approx(1.0 / std::sqrt(2.0)));
    for (int k = 0; k < 50; ++k) {
        const double t = testing::uniform(0.0, std::numbers::pi / 2);
        const Eigen::Vector2d dir(std::cos(t), std::sin(t));
        CHECK(spec.solution(dir) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
        CHECK(spec.solution(2.0 * dir) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
        CHECK(spec.on_dirichlet(dir));
        CHECK(spec.on_dirichlet(2.0 * dir));
        CHECK_FALSE(spec.on_dirichlet(1.5 * dir));
    }
}

TEST_CASE("quarter annulus source is consistent with the solution") {
    const ProblemSpec spec = problem_quarter_annulus();
    const double h = 1e-4;
    for (int k = 0; k < 50; ++k) {
        const double r = testing::uniform(1.05, 1.95), t = testing::uniform(0.05, 1.5);
        const Eigen::Vector2d x(r * std::cos(t), r * std::sin(t));
        const Eigen::Vector2d ex(h, 0), ey(0, h);
        const auto& u = spec.solution;
        const double uxx = (u(x + ex) - 2 * u(x) + u(x - ex)) / (h * h);
        const double uyy = (u(x + ey) - 2 * u(x) + u(x - ey)) / (h * h);
        const Eigen::Matrix2d a0 = spec.homogenized(x);
        CHECK(spec.source(x) == doctest::Approx(-(a0(0, 0) * uxx + a0(1, 1) * uyy)).epsilon(1e-5));

        const Eigen::Vector2d g((u(x + ex) - u(x - ex)) / (2 * h), (u(x + ey) - u(x - ey)) / (2 * h));
        CHECK((spec.solution_gradient(x) - g).norm() < 1e-6);
    }
}

TEST_CASE("problem lookup") {
    CHECK(problem_names().size() == 3);
    for (const std::string& name : problem_names()) CHECK(problem_by_name(name).id == name);
    CHECK_THROWS_AS(problem_by_name("disc"), ConfigError);
    CHECK(problem_by_name("square_fast", 1e-3).tensor.eps == 1e-3);
}

TEST_CASE("error norms of the zero field equal the solution norms") {
    const ProblemSpec spec = problem_square_fast();
    const MacroMesh mesh = build_macro_mesh(spec, 4, 2);
    const ErrorNorms e = error_norms(zero_field(mesh.patch()), spec.solution, spec.solution_gradient);
    CHECK(e.abs_l2 == doctest::Approx(std::sqrt(10.0) / 60.0).epsilon(1e-13));
    CHECK(e.abs_h1 == doctest::Approx(std::sqrt(11.0 / 360.0)).epsilon(1e-13));
    CHECK(e.ref_l2 == doctest::Approx(e.abs_l2));
    CHECK(e.ref_h1 == doctest::Approx(e.abs_h1));
    CHECK(e.rel_h1() == doctest::Approx(1.0));
    CHECK(e.abs_l2 <= e.abs_h1);
}

TEST_CASE("error norms of identical fields vanish") {
    const ProblemSpec spec = problem_quarter_annulus();
    const SolutionField ref = reference_solve(spec, spec.homogenized, 4, 3);
    const ErrorNorms e = error_norms(ref, ref);
    CHECK(e.abs_h1 < 1e-14);
    CHECK(e.abs_l2 < 1e-14);
    CHECK(e.ref_h1 > 0.0);

    // a coarser field against a finer one integrates on the finer elements
    const SolutionField coarse = reference_solve(spec, spec.homogenized, 2, 3);
    const ErrorNorms ce = error_norms(coarse, ref);
    const ErrorNorms ec = error_norms(ref, coarse);
    CHECK(ce.abs_h1 == doctest::Approx(ec.abs_h1).epsilon(1e-10));
    CHECK(ce.abs_l2 <= ce.abs_h1);
}

TEST_CASE("mismatched domains are rejected") {
    const SolutionField square = zero_field(unit_square_patch());
    const SolutionField annulus = zero_field(quarter_annulus_patch());
    CHECK_THROWS_AS(error_norms(square, annulus), ConfigError);
}

TEST_CASE("single-scale reference solve converges at rate p+1 in L2") {
    const ProblemSpec spec = problem_quarter_annulus();
    for (int p : {2, 3}) {
        std::vector<double> h, err;
        for (int n : {8, 16, 32}) {
            const SolutionField u = reference_solve(spec, spec.homogenized, n, p);
            h.push_back(1.0 / n);
            err.push_back(error_norms(u, spec.solution, spec.solution_gradient).abs_l2);
        }
        const double slope = *fit_slope(h, err);
        CAPTURE(p);
        CHECK(std::abs(slope - (p + 1)) < 0.25);
    }
}

TEST_CASE("p = 1 on the annulus uses a bilinear approximation") {
    const ProblemSpec spec = problem_quarter_annulus();
    const MacroMesh mesh = build_macro_mesh(spec, 4, 1);
    CHECK(mesh.degree() == 1);
    CHECK(mesh.patch().size() == 25);
    CHECK(mesh.patch().is_polynomial());
    // control points interpolate the exact geometry at the parameter vertices
    for (int j = 0; j <= 4; ++j) {
        for (int i = 0; i <= 4; ++i) {
            const Eigen::Vector2d exact = map_point(spec.geometry, i / 4.0, j / 4.0);
            CHECK((mesh.patch().net().points.row(mesh.patch().index(i, j)).transpose() - exact).norm() < 1e-14);
        }
    }
    CHECK_THROWS_AS(build_macro_mesh(spec, 0, 2), ConfigError);
}

TEST_CASE("HMM solution satisfies the boundary condition on the annulus") {
    const ProblemSpec spec = problem_quarter_annulus();
    const MacroMesh mesh = build_macro_mesh(spec, 2, 2);
    HmmSettings s;
    s.micro = {1, 4, Coupling::Periodic};
    const HmmSolution sol = solve_problem(spec, mesh, s);
    for (int k = 0; k < 100; ++k) {
        const double t = testing::uniform();
        const double xi = k % 4 == 0 ? 0.0 : k % 4 == 1 ? 1.0 : t;
        const double eta = k % 4 == 2 ? 0.0 : k % 4 == 3 ? 1.0 : t;
        const FieldSample f = evaluate(sol.field, xi, eta);
        CHECK(std::abs(f.value) < 1e-14);
    }
    CHECK(sol.effective.stats.micro_problems == mesh.num_gauss_points());
    CHECK(sol.macro_dofs == mesh.num_dofs());
}

TEST_CASE("square_fast L2 strategy on an 8x8 mesh") {
    const ProblemSpec spec = problem_square_fast();
    StudyOptions opts;
    opts.timing = false;
    const ConvergenceRecord r = run_single(spec, opts, 2, 8, nullptr);
    CHECK(r.n_mic == 23);
    CHECK(r.err_l2_alt == doctest::Approx(1.03e-3).epsilon(0.05));
    CHECK(r.err_l2 <= r.err_l2_alt);
    CHECK(r.seconds == 0.0);
}
