#include "igahmm/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "igahmm/errors.hpp"

namespace igahmm {

namespace {

void check(int n_mac, int p, int q) {
    if (n_mac < 1 || p < 1 || q < 1) {
        std::ostringstream os;
        os << "strategy: need N_mac, p, q >= 1 (got " << n_mac << ", " << p << ", " << q << ")";
        throw ConfigError(os.str());
    }
}

}  // namespace

int micro_elements(int n_mac, int p, int q, Strategy strategy) {
    check(n_mac, p, q);
    const double exponent = (strategy == Strategy::L2 ? p + 1.0 : static_cast<double>(p)) / (2.0 * q);
    // shave rounding noise so exact powers (16^1) do not round up
    const double raw = std::pow(static_cast<double>(n_mac), exponent);
    int n = static_cast<int>(std::ceil(raw * (1.0 - 1e-12)));
    n = std::max(n, 1);
    if (q >= 2) n = std::max(n, 2);
    return n;
}

double cost_estimate(int n_mac, int p, int q) {
    check(n_mac, p, q);
    const double nm = n_mac;
    const double micro = q * std::pow(nm, (p + 1.0) / (2.0 * q)) + 1.0;
    return nm * nm * (p + 1.0) * (p + 1.0) * micro * micro;
}

bool cubic_cost_regime(int p, int q) { return q >= p + 1; }

RefinementPlan plan_refinement(int n_mac, int p, int q, Strategy strategy) {
    RefinementPlan plan;
    plan.strategy = strategy;
    plan.p = p;
    plan.q = q;
    plan.n_mac = n_mac;
    plan.n_mic = micro_elements(n_mac, p, q, strategy);
    plan.predicted_cost = cost_estimate(n_mac, p, q);
    return plan;
}

const char* to_string(Strategy s) { return s == Strategy::L2 ? "l2" : "h1"; }

}  // namespace igahmm
