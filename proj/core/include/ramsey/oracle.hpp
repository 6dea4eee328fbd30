#pragma once

#include <string>
#include <vector>

#include "ramsey/kkt.hpp"

namespace ramsey {

/// Closed-form capital in terms of consumption:
///   a_t^h = base(h, t) + sum_s weight(t, s) c_s^h,
/// with base the pure-accumulation path and weight(t, s) = -tau prod_{v=s+1..t-1} gamma_v
/// for s < t (zero otherwise). The weights are household-independent.
struct AffineCapitalMap {
    Matrix base;    // H x (T+2)
    Matrix weight;  // (T+2) x (T+1)

    Matrix apply(const Matrix& consumption) const {
        return base + consumption * weight.transpose();
    }
};

AffineCapitalMap eliminate_capital(const EconomyParams& params);

/// Weighted-sum welfare maximization over consumption with capital eliminated.
struct ScalarizedProblem {
    EconomyParams params;
    std::vector<Utility> utilities;
    Vector theta;
    Variant variant = Variant::Default;

    static ScalarizedProblem from(const KKTProblem& problem) {
        return {problem.params(), problem.utilities(), problem.theta(), problem.variant()};
    }
};

struct OracleOptions {
    double tol = 1e-8;               // gradient norm and duality-gap bound
    double barrier_decrease = 0.2;
    double initial_barrier = 1e-1;
    int max_newton_per_stage = 200;
    int max_stages = 100;
};

struct OracleResult {
    bool converged = false;
    std::string message;
    Allocation allocation;
    Vector welfare;
    double objective = 0.0;     // theta . welfare
    double upper_bound = 0.0;   // objective + (constraint count) * final barrier weight
    double barrier_weight = 0.0;
    int stages = 0;
    int newton_steps = 0;
    MultiplierSet multipliers;  // lambda from stationarity, nu from the adjoint recursion
};

/// Log-barrier interior-point method: damped Newton on the barrier subproblem for a
/// decreasing sequence of barrier weights, all iterates strictly feasible. Without default,
/// c_T^h is eliminated through the terminal budget so only inequality constraints remain.
OracleResult solve_scalarized(const ScalarizedProblem& problem, const OracleOptions& options = {});

}  // namespace ramsey
