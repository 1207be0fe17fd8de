#include "igahmm/hmm.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <memory>
#include <thread>

#include "igahmm/errors.hpp"

namespace igahmm {

EffectiveTensors compute_effective_tensors(const MacroMesh& mesh, const TensorField& tensor, const HmmSettings& settings) {
    if (settings.delta_multiple < 1) throw ConfigError("delta multiple must be a positive integer");
    if (settings.threads < 1) throw ConfigError("thread count must be >= 1");
    const double delta = settings.delta_multiple * tensor.eps;
    const std::vector<QuadraturePoint> points = mesh.gauss_points();
    const auto count = points.size();

    std::vector<SamplingDomain> domains;
    domains.reserve(count);
    for (const QuadraturePoint& q : points) domains.push_back(build_sampling_domain(q.x, delta, tensor.eps));

    const auto space = std::make_shared<const MicroSpace>(settings.micro);
    std::vector<MicroResult> results(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        MicroSolver solver(space);
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                results[i] = solver.solve(domains[i], tensor);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nthreads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(settings.threads), std::max<std::size_t>(count, 1)));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    // lowest failing Gauss point wins, independent of scheduling
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    EffectiveTensors out;
    out.tensors.reserve(count);
    for (const MicroResult& r : results) {
        out.tensors.push_back(r.effective);
        out.stats.max_mean_residual = std::max(out.stats.max_mean_residual, r.mean_residual);
        out.stats.max_linear_residual = std::max(out.stats.max_linear_residual, r.linear_residual);
    }
    out.stats.micro_problems = static_cast<int>(count);
    out.stats.micro_control_points = static_cast<long long>(count) * space->num_control_points();
    out.stats.micro_dofs = static_cast<long long>(count) * space->num_dofs();
    return out;
}

HmmSolution solve_hmm(const MacroMesh& mesh, const TensorField& tensor, const ScalarField& source,
                      const HmmSettings& settings) {
    HmmSolution sol;
    sol.effective = compute_effective_tensors(mesh, tensor, settings);
    const LinearSystem full = assemble_macro(mesh, sol.effective.tensors, source);
    sol.field = solve_macro(apply_boundary_conditions(full, mesh), mesh);
    sol.macro_dofs = mesh.num_dofs();
    return sol;
}

}  // namespace igahmm
