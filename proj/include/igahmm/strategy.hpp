#pragma once

namespace igahmm {

enum class Strategy { L2, H1 };

/// Micro elements per direction balancing micro and macro error terms:
/// ceil(N_mac^((p+1)/(2q))) for L2, ceil(N_mac^(p/(2q))) for H1, at least 1,
/// and at least 2 when q >= 2.
int micro_elements(int n_mac, int p, int q, Strategy strategy);

/// Predicted work units N_mac^2 (p+1)^2 (q N_mac^((p+1)/(2q)) + 1)^2 of the
/// L2 strategy: macro Gauss points times micro control points.
double cost_estimate(int n_mac, int p, int q);

/// True in the q >= p+1 regime where total cost grows like N_mac^3.
bool cubic_cost_regime(int p, int q);

struct RefinementPlan {
    Strategy strategy = Strategy::L2;
    int p = 1;
    int q = 1;
    int n_mac = 1;
    int n_mic = 1;
    double predicted_cost = 0;
};

RefinementPlan plan_refinement(int n_mac, int p, int q, Strategy strategy);

const char* to_string(Strategy s);

}  // namespace igahmm
