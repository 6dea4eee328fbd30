#include "ramsey/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ramsey/error.hpp"

namespace ramsey {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw DomainError(message);
}

void check_index(const EconomyParams& params, int h, int t) {
    if (h < 0 || h >= params.households) {
        throw IndexError("household index " + std::to_string(h) + " outside [0, " +
                         std::to_string(params.households) + ")");
    }
    if (t < 0 || t > params.horizon) {
        throw IndexError("period " + std::to_string(t) + " outside [0, " +
                         std::to_string(params.horizon) + "]");
    }
}

void check_shape(const EconomyParams& params, const Allocation& alloc) {
    const auto H = params.households;
    const auto n = params.periods();
    if (alloc.consumption.rows() != H || alloc.consumption.cols() != n ||
        alloc.capital.rows() != H || alloc.capital.cols() != n + 1) {
        throw DimensionError("allocation shape does not match H=" + std::to_string(H) +
                             ", T=" + std::to_string(params.horizon));
    }
}

}  // namespace

void EconomyParams::validate() const {
    require(households >= 1, "need at least one household");
    require(horizon >= 0, "horizon T must be nonnegative");
    const auto n = static_cast<std::size_t>(periods());
    const auto H = static_cast<std::size_t>(households);
    require(r.size() == n, "interest rate sequence must have length T+1");
    require(omega.size() == n, "wage sequence must have length T+1");
    require(labor.size() == H, "labor endowments must have length H");
    require(beta.size() == H, "discount factors must have length H");
    require(a0.size() == H, "initial capital must have length H");
    for (std::size_t t = 0; t < n; ++t) {
        require(r[t] > 0.0 && std::isfinite(r[t]), "interest rate r_" + std::to_string(t) + " must be > 0");
        require(omega[t] >= 1.0 && std::isfinite(omega[t]),
                "wage rate omega_" + std::to_string(t) + " must be >= 1");
    }
    for (std::size_t h = 0; h < H; ++h) {
        require(labor[h] > 0.0 && std::isfinite(labor[h]), "labor l^" + std::to_string(h) + " must be > 0");
        require(beta[h] > 0.0 && beta[h] < 1.0, "discount beta^" + std::to_string(h) + " must lie in (0,1)");
        require(std::isfinite(a0[h]), "initial capital must be finite");
    }
    require(tau >= 1.0 && std::isfinite(tau), "investment factor tau must be >= 1");
    require(delta > 0.0 && delta < 1.0, "depreciation delta must lie in (0,1)");
    double total = 0.0;
    for (double a : a0) total += a;
    require(total > 0.0, "aggregate initial capital must be strictly positive");
}

EconomyParams make_constant_economy(int horizon, double r, double omega, std::vector<double> labor,
                                    double tau, double delta, std::vector<double> beta,
                                    std::vector<double> a0) {
    EconomyParams p;
    p.households = static_cast<int>(labor.size());
    p.horizon = horizon;
    p.r.assign(static_cast<std::size_t>(horizon + 1), r);
    p.omega.assign(static_cast<std::size_t>(horizon + 1), omega);
    p.labor = std::move(labor);
    p.tau = tau;
    p.delta = delta;
    p.beta = std::move(beta);
    p.a0 = std::move(a0);
    p.validate();
    return p;
}

double capital_step(const EconomyParams& params, int h, int t, double a_t, double c_t) {
    check_index(params, h, t);
    return params.labor_income(h, t) + params.growth(t) * a_t - params.tau * c_t;
}

Allocation feasible_seed(const EconomyParams& params) {
    const auto H = params.households;
    const auto n = params.periods();
    Allocation alloc{Matrix(H, n), Matrix(H, n + 1)};
    for (int h = 0; h < H; ++h) {
        alloc.capital(h, 0) = params.a0[h];
        for (int t = 0; t < n; ++t) {
            alloc.consumption(h, t) = params.omega[t] * params.labor[h];
            alloc.capital(h, t + 1) = capital_step(params, h, t, alloc.capital(h, t), alloc.consumption(h, t));
        }
    }
    return alloc;
}

std::string to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::NonPositiveConsumption: return "nonpositive-consumption";
        case Violation::Kind::Accumulation: return "accumulation";
        case Violation::Kind::AggregateCapital: return "aggregate-capital";
    }
    return "unknown";
}

std::vector<Violation> check_feasibility(const EconomyParams& params, const Allocation& alloc,
                                         double tol) {
    check_shape(params, alloc);
    std::vector<Violation> out;
    const auto H = params.households;
    const auto n = params.periods();
    for (int h = 0; h < H; ++h) {
        if (alloc.capital(h, 0) != params.a0[h]) {
            out.push_back({Violation::Kind::Accumulation, h, 0,
                           std::abs(alloc.capital(h, 0) - params.a0[h])});
        }
        for (int t = 0; t < n; ++t) {
            const double c = alloc.consumption(h, t);
            if (!(c > 0.0)) {
                out.push_back({Violation::Kind::NonPositiveConsumption, h, t, -c});
            }
            const double expected = params.labor_income(h, t) +
                                    params.growth(t) * alloc.capital(h, t) - params.tau * c;
            const double gap = std::abs(alloc.capital(h, t + 1) - expected);
            if (gap > tol) out.push_back({Violation::Kind::Accumulation, h, t, gap});
        }
    }
    const Vector aggregate = alloc.aggregate_capital();
    for (int t = 1; t <= n; ++t) {
        if (aggregate(t) < -tol) {
            out.push_back({Violation::Kind::AggregateCapital, -1, t, -aggregate(t)});
        }
    }
    return out;
}

ExistenceBounds existence_bounds(const EconomyParams& params) {
    double a_max = -std::numeric_limits<double>::infinity();
    for (int h = 0; h < params.households; ++h) {
        // a_{t+1} with zero consumption, accumulated forward.
        double pure = params.a0[h];
        for (int t = 0; t < params.periods(); ++t) {
            pure = params.labor_income(h, t) + params.growth(t) * pure;
            a_max = std::max(a_max, pure);
        }
    }
    return {a_max, params.households / params.tau * a_max};
}

double compounded_consumption_peak(const EconomyParams& params, const Matrix& consumption) {
    double peak = 0.0;
    double load = 0.0;
    for (int t = 0; t < params.periods(); ++t) {
        load = (t == 0 ? 0.0 : load * params.growth(t)) + consumption.col(t).sum();
        peak = std::max(peak, load);
    }
    return peak;
}

Vector welfare(const EconomyParams& params, std::span<const Utility> utilities,
               const Matrix& consumption) {
    if (static_cast<int>(utilities.size()) != params.households ||
        consumption.rows() != params.households || consumption.cols() != params.periods()) {
        throw DimensionError("welfare: utilities or consumption do not match the economy");
    }
    Vector w = Vector::Zero(params.households);
    for (int h = 0; h < params.households; ++h) {
        double discount = 1.0;
        for (int t = 0; t < params.periods(); ++t) {
            w(h) += discount * utilities[h].value(consumption(h, t));
            discount *= params.beta[h];
        }
    }
    return w;
}

}  // namespace ramsey
