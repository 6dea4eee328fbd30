#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "ramsey/utility.hpp"

namespace ramsey {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Exogenous data of a finite-horizon economy with H households and decision periods
/// t = 0..T. Factor prices are perfectly foreseen sequences.
struct EconomyParams {
    int households = 1;           // H
    int horizon = 0;              // T, the last decision period
    std::vector<double> r;        // interest rate r_t > 0, length T+1
    std::vector<double> omega;    // wage rate omega_t >= 1, length T+1
    std::vector<double> labor;    // labor endowment l^h > 0, length H
    double tau = 1.0;             // investment factor >= 1
    double delta = 0.01;          // depreciation in (0,1)
    std::vector<double> beta;     // discount factor in (0,1), length H
    std::vector<double> a0;       // initial capital, length H, aggregate > 0

    int periods() const noexcept { return horizon + 1; }

    /// gamma_t = tau (1 + r_t) - delta, the gross return on capital held into t+1.
    double growth(int t) const { return tau * (1.0 + r[t]) - delta; }

    /// xi_t^h = tau omega_t l^h, the capitalized labor income of period t.
    double labor_income(int h, int t) const { return tau * omega[t] * labor[h]; }

    /// Throws DomainError when any range condition on the constants fails.
    void validate() const;
};

/// Builds parameters with constant rates broadcast over the horizon.
EconomyParams make_constant_economy(int horizon, double r, double omega, std::vector<double> labor,
                                    double tau, double delta, std::vector<double> beta,
                                    std::vector<double> a0);

/// Consumption c (H x (T+1)) and capital a (H x (T+2), column 0 holds a_0).
struct Allocation {
    Matrix consumption;
    Matrix capital;

    Vector aggregate_capital() const { return capital.colwise().sum().transpose(); }
    Vector aggregate_consumption() const { return consumption.colwise().sum().transpose(); }
};

/// a_{t+1}^h = tau omega_t l^h + (tau(1+r_t) - delta) a_t^h - tau c_t^h.
double capital_step(const EconomyParams& params, int h, int t, double a_t, double c_t);

/// The strictly feasible point c_t^h = omega_t l^h with capital growing by gamma_t.
Allocation feasible_seed(const EconomyParams& params);

struct Violation {
    enum class Kind { NonPositiveConsumption, Accumulation, AggregateCapital };

    Kind kind;
    int household;  // -1 for aggregate constraints
    int period;
    double magnitude;
};

std::string to_string(Violation::Kind kind);

/// Default feasibility tolerance for accumulation and aggregate-capital checks.
inline constexpr double kFeasibilityTol = 1e-9;

/// Lists every violated constraint of the feasible set. Consumption positivity is strict
/// regardless of tol. Throws DimensionError on shape mismatch.
std::vector<Violation> check_feasibility(const EconomyParams& params, const Allocation& alloc,
                                         double tol = kFeasibilityTol);

/// Bounds from the existence argument: every feasible a_{t+1}^h <= a_max and, for every t,
/// sum_h sum_{s<=t} c_s^h prod_{v=s+1..t} gamma_v <= consumption_bound = (H / tau) a_max.
struct ExistenceBounds {
    double a_max;
    double consumption_bound;
};

ExistenceBounds existence_bounds(const EconomyParams& params);

/// max over t of sum_h sum_{s<=t} c_s^h prod_{v=s+1..t} gamma_v, the quantity the
/// consumption bound controls.
double compounded_consumption_peak(const EconomyParams& params, const Matrix& consumption);

/// Component h is sum_t (beta^h)^t u^h(c_t^h). Throws DomainError on nonpositive consumption.
Vector welfare(const EconomyParams& params, std::span<const Utility> utilities,
               const Matrix& consumption);

inline Vector welfare(const EconomyParams& params, std::span<const Utility> utilities,
                      const Allocation& alloc) {
    return welfare(params, utilities, alloc.consumption);
}

}  // namespace ramsey
