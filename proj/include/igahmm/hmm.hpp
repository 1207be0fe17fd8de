#pragma once

#include <vector>

#include <Eigen/Core>

#include "igahmm/macro_solver.hpp"
#include "igahmm/micro_solver.hpp"
#include "igahmm/tensor_field.hpp"

namespace igahmm {

struct HmmSettings {
    MicroSettings micro;
    int delta_multiple = 1;  ///< delta = delta_multiple * eps
    int threads = 1;
};

struct HmmStats {
    int micro_problems = 0;
    long long micro_control_points = 0;  ///< summed over all micro problems
    long long micro_dofs = 0;            ///< solved unknowns summed over all micro problems
    double max_mean_residual = 0;
    double max_linear_residual = 0;
};

struct EffectiveTensors {
    std::vector<Eigen::Matrix2d> tensors;  ///< one per macro Gauss point, mesh order
    HmmStats stats;
};

/// Solves one micro problem per macro Gauss point. Work is spread over
/// `threads` workers but every result lands in its Gauss-point slot, so the
/// output does not depend on the thread count.
EffectiveTensors compute_effective_tensors(const MacroMesh& mesh, const TensorField& tensor, const HmmSettings& settings);

struct HmmSolution {
    SolutionField field;
    EffectiveTensors effective;
    int macro_dofs = 0;
};

HmmSolution solve_hmm(const MacroMesh& mesh, const TensorField& tensor, const ScalarField& source,
                      const HmmSettings& settings);

}  // namespace igahmm
