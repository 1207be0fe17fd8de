#include "igahmm/convergence.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "igahmm/errors.hpp"

namespace igahmm {

const char* to_string(Continuity c) { return c == Continuity::C0 ? "c0" : "cmax"; }

std::optional<double> fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) return std::nullopt;
    return (n * sxy - sx * sy) / den;
}

ConvergenceRecord run_single(const ProblemSpec& spec, const StudyOptions& options, int p, int n_mac,
                             const SolutionField* reference, SolutionField* field_out) {
    const auto start = std::chrono::steady_clock::now();
    ConvergenceRecord rec;
    rec.problem = spec.id;
    rec.p = p;
    rec.q = options.q;
    rec.continuity = options.micro_continuity;
    rec.strategy = options.strategy;
    rec.n_mac = n_mac;
    rec.n_mic = micro_elements(n_mac, p, options.q, options.strategy);

    HmmSettings settings;
    settings.micro = {options.q, rec.n_mic, options.coupling, options.micro_continuity};
    settings.delta_multiple = options.delta_multiple;
    settings.threads = options.threads;

    const MacroMesh mesh = build_macro_mesh(spec, n_mac, p, options.macro_continuity);
    HmmSolution sol = solve_problem(spec, mesh, settings);

    ErrorNorms norms;
    if (spec.has_solution()) {
        norms = error_norms(sol.field, spec.solution, spec.solution_gradient);
    } else if (reference != nullptr) {
        norms = error_norms(sol.field, *reference);
    } else {
        throw ConfigError("problem '" + spec.id + "' has no analytic solution and no reference field");
    }
    rec.err_h1 = norms.rel_h1();
    rec.err_l2 = norms.rel_l2();
    rec.err_l2_alt = norms.rel_l2_alt();
    rec.micro_control_points = sol.effective.stats.micro_control_points;
    rec.micro_dofs = sol.effective.stats.micro_dofs;
    rec.macro_dofs = sol.macro_dofs;
    if (field_out != nullptr) *field_out = std::move(sol.field);
    if (options.timing) rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

StudyResult run_convergence_study(const ProblemSpec& spec, const StudyOptions& options) {
    StudyResult result;
    std::optional<SolutionField> reference;
    try {
        if (!spec.has_solution() && !options.meshes.empty()) {
            reference = reference_solve(spec, spec.homogenized, options.reference_elements, options.reference_degree);
        }
        for (int p : options.degrees) {
            for (int n : options.meshes) {
                result.records.push_back(run_single(spec, options, p, n, reference ? &*reference : nullptr));
            }
        }
    } catch (const Error& e) {
        result.error = e.what();
    }

    for (int p : options.degrees) {
        std::vector<double> h, e1, e0, ea;
        for (const auto& r : result.records) {
            if (r.p != p) continue;
            h.push_back(1.0 / r.n_mac);
            e1.push_back(r.err_h1);
            e0.push_back(r.err_l2);
            ea.push_back(r.err_l2_alt);
        }
        if (h.size() < 2) continue;
        result.slopes.push_back({p, *fit_slope(h, e1), *fit_slope(h, e0), *fit_slope(h, ea)});
    }
    return result;
}

void write_records_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records) {
    out << "problem,p,q,continuity,strategy,Nmac,Nmic,errH1,errL2,errL2_alt,seconds\n";
    char buf[256];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%s,%d,%d,%s,%s,%d,%d,%.6e,%.6e,%.6e,%.3f\n", r.problem.c_str(), r.p, r.q,
                      to_string(r.continuity), to_string(r.strategy), r.n_mac, r.n_mic, r.err_h1, r.err_l2,
                      r.err_l2_alt, r.seconds);
        out << buf;
    }
}

}  // namespace igahmm
