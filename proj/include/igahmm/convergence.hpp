#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "igahmm/benchmarks.hpp"
#include "igahmm/strategy.hpp"

namespace igahmm {

struct ConvergenceRecord {
    std::string problem;
    int p = 0;
    int q = 0;
    Continuity continuity = Continuity::C0;  ///< micro continuity
    Strategy strategy = Strategy::L2;
    int n_mac = 0;
    int n_mic = 0;
    double err_h1 = 0;
    double err_l2 = 0;      ///< L2 error over reference H1 norm
    double err_l2_alt = 0;  ///< L2 error over reference L2 norm
    double seconds = 0;
    long long micro_control_points = 0;  ///< summed over the run's micro problems
    long long micro_dofs = 0;
    int macro_dofs = 0;
};

struct StudyOptions {
    std::vector<int> degrees{2};
    int q = 1;
    Continuity micro_continuity = Continuity::C0;
    Continuity macro_continuity = Continuity::Cmax;
    Coupling coupling = Coupling::Periodic;
    Strategy strategy = Strategy::L2;
    std::vector<int> meshes{2, 4, 8};
    int delta_multiple = 1;
    int threads = 1;
    bool timing = true;  ///< false writes 0 seconds for reproducible CSV
    int reference_elements = 128;
    int reference_degree = 5;
};

/// Least-squares slope of log(error) against log(H), H = 1 / N_mac.
struct SlopeFit {
    int p = 0;
    double h1 = 0;
    double l2 = 0;
    double l2_alt = 0;
};

struct StudyResult {
    std::vector<ConvergenceRecord> records;  ///< ordered by degree, then mesh
    std::vector<SlopeFit> slopes;            ///< degrees with at least two meshes
    std::string error;                       ///< first failure; earlier records are kept
};

/// Least-squares slope of log(y) against log(x); nullopt for fewer than two points.
std::optional<double> fit_slope(const std::vector<double>& x, const std::vector<double>& y);

/// One record per (p, N_mac). Problems without a closed-form solution are
/// measured against a single-scale reference solve with the homogenized tensor.
StudyResult run_convergence_study(const ProblemSpec& spec, const StudyOptions& options);

/// Single run, shared by the study and the solve command.
ConvergenceRecord run_single(const ProblemSpec& spec, const StudyOptions& options, int p, int n_mac,
                             const SolutionField* reference, SolutionField* field_out = nullptr);

const char* to_string(Continuity c);

void write_records_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records);

}  // namespace igahmm
