#include "ramsey/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ramsey/error.hpp"

namespace ramsey {

KKTProblem::KKTProblem(EconomyParams params, std::vector<Utility> utilities, Vector theta,
                       Variant variant)
    : params_(std::move(params)),
      utilities_(std::move(utilities)),
      theta_(std::move(theta)),
      variant_(variant) {
    params_.validate();
    const int H = params_.households;
    if (static_cast<int>(utilities_.size()) != H) {
        throw DimensionError("need one utility per household");
    }
    if (theta_.size() != H) throw DimensionError("theta must have length H");
    for (int h = 0; h < H; ++h) {
        if (!(theta_(h) > 0.0) || !std::isfinite(theta_(h))) {
            throw UsageError("household weight theta_" + std::to_string(h) +
                             " must be strictly positive");
        }
    }
    theta_ /= theta_.sum();

    discount_.resize(H, params_.periods());
    for (int h = 0; h < H; ++h) {
        double d = 1.0;
        for (int t = 0; t < params_.periods(); ++t) {
            discount_(h, t) = d;
            d *= params_.beta[h];
        }
    }
}

int KKTProblem::multiplier_count() const noexcept {
    return variant_ == Variant::Default ? params_.horizon + 1 : params_.horizon;
}

int KKTProblem::unknowns() const noexcept {
    return variant_ == Variant::Default ? params_.horizon + 1
                                        : params_.horizon + params_.households;
}

namespace {

void require_variant(const KKTProblem& problem, Variant v, const char* op) {
    if (problem.variant() != v) {
        throw UsageError(std::string(op) + " called on the wrong model variant");
    }
}

}  // namespace

Vector lambda_backward(const KKTProblem& problem, const Vector& nu) {
    require_variant(problem, Variant::Default, "lambda_backward");
    const int T = problem.horizon();
    if (nu.size() != T + 1) throw DimensionError("lambda_backward: nu must have length T+1");
    const auto& p = problem.params();
    Vector lambda(T + 1);
    lambda(T) = nu(T);
    for (int t = T; t >= 1; --t) {
        lambda(t - 1) = lambda(t) * p.growth(t) + nu(t - 1);
    }
    return lambda;
}

Matrix consumption_from_lambda(const KKTProblem& problem, const Vector& lambda) {
    require_variant(problem, Variant::Default, "consumption_from_lambda");
    const int H = problem.households();
    const int n = problem.params().periods();
    if (lambda.size() != n) throw DimensionError("consumption_from_lambda: lambda must have length T+1");
    const double tau = problem.params().tau;
    Matrix c(H, n);
    for (int t = 0; t < n; ++t) {
        if (!(lambda(t) > 0.0)) {
            throw EvaluationFailure("adjoint lambda_" + std::to_string(t) +
                                        " is not positive; consumption is undefined",
                                    -1, t);
        }
        for (int h = 0; h < H; ++h) {
            const double x = tau * lambda(t) / (problem.discount(h, t) * problem.theta()(h));
            c(h, t) = problem.utilities()[h].inverse_marginal(x);
        }
    }
    return c;
}

Matrix capital_forward(const KKTProblem& problem, const Matrix& consumption) {
    const auto& p = problem.params();
    const int H = p.households;
    const int n = p.periods();
    if (consumption.rows() != H || consumption.cols() != n) {
        throw DimensionError("capital_forward: consumption must be H x (T+1)");
    }
    Matrix a(H, n + 1);
    for (int h = 0; h < H; ++h) {
        a(h, 0) = p.a0[h];
        for (int t = 0; t < n; ++t) {
            a(h, t + 1) = p.labor_income(h, t) + p.growth(t) * a(h, t) - p.tau * consumption(h, t);
        }
    }
    return a;
}

ResidualEvaluation residual_default(const KKTProblem& problem, const Vector& nu) {
    ResidualEvaluation eval;
    eval.lambda = lambda_backward(problem, nu);
    eval.consumption = consumption_from_lambda(problem, eval.lambda);
    eval.capital = capital_forward(problem, eval.consumption);

    const int T = problem.horizon();
    const Vector aggregate = eval.aggregate_capital();
    eval.residual.resize(T + 1);
    for (int t = 1; t <= T; ++t) eval.residual(t - 1) = nu(t - 1) * aggregate(t);
    eval.residual(T) = aggregate(T + 1);
    return eval;
}

Matrix consumption_backward_nodefault(const KKTProblem& problem, const Vector& nu,
                                      const Vector& terminal_consumption) {
    require_variant(problem, Variant::NoDefault, "consumption_backward_nodefault");
    const auto& p = problem.params();
    const int H = p.households;
    const int T = p.horizon;
    if (nu.size() != T) throw DimensionError("no-default multipliers must have length T");
    if (terminal_consumption.size() != H) throw DimensionError("terminal consumption must have length H");

    Matrix c(H, T + 1);
    for (int h = 0; h < H; ++h) {
        const Utility& u = problem.utilities()[h];
        if (!(terminal_consumption(h) > 0.0)) {
            throw EvaluationFailure("terminal consumption of household " + std::to_string(h) +
                                        " is not positive",
                                    h, T);
        }
        c(h, T) = terminal_consumption(h);
        for (int t = T; t >= 1; --t) {
            const double x = p.beta[h] * p.growth(t) * u.marginal(c(h, t)) +
                             p.tau * nu(t - 1) / (problem.discount(h, t - 1) * problem.theta()(h));
            if (!(x > 0.0)) {
                throw EvaluationFailure("backward recursion argument is not positive for household " +
                                            std::to_string(h) + " at t=" + std::to_string(t - 1),
                                        h, t - 1);
            }
            c(h, t - 1) = u.inverse_marginal(x);
        }
    }
    return c;
}

ResidualEvaluation residual_nodefault(const KKTProblem& problem, const Vector& nu,
                                      const Vector& terminal_consumption) {
    ResidualEvaluation eval;
    eval.consumption = consumption_backward_nodefault(problem, nu, terminal_consumption);
    eval.capital = capital_forward(problem, eval.consumption);

    const int H = problem.households();
    const int T = problem.horizon();
    const Vector aggregate = eval.aggregate_capital();
    eval.residual.resize(T + H);
    for (int t = 1; t <= T; ++t) eval.residual(t - 1) = nu(t - 1) * aggregate(t);
    for (int h = 0; h < H; ++h) eval.residual(T + h) = eval.capital(h, T + 1);
    return eval;
}

ResidualEvaluation evaluate_residual(const KKTProblem& problem, const Vector& unknowns) {
    if (unknowns.size() != problem.unknowns()) {
        throw DimensionError("packed unknowns have the wrong length");
    }
    if (problem.variant() == Variant::Default) return residual_default(problem, unknowns);
    const int T = problem.horizon();
    return residual_nodefault(problem, unknowns.head(T), unknowns.tail(problem.households()));
}

double KKTAudit::worst() const {
    return std::max({stationarity, adjoint, accumulation, feasibility, complementarity, sign});
}

KKTAudit audit_kkt(const KKTProblem& problem, const Allocation& alloc, const MultiplierSet& mult) {
    const auto& p = problem.params();
    const int H = p.households;
    const int T = p.horizon;
    const bool with_default = problem.variant() == Variant::Default;

    if (alloc.consumption.rows() != H || alloc.consumption.cols() != T + 1 ||
        alloc.capital.rows() != H || alloc.capital.cols() != T + 2) {
        throw DimensionError("audit_kkt: allocation shape mismatch");
    }
    if (mult.theta.size() != H || mult.nu.size() != problem.multiplier_count() ||
        mult.lambda.cols() != T + 1 || (mult.lambda.rows() != 1 && mult.lambda.rows() != H)) {
        throw DimensionError("audit_kkt: multiplier shape mismatch");
    }

    KKTAudit audit;
    auto bump = [](double& slot, double v) { slot = std::max(slot, std::isnan(v) ? HUGE_VAL : v); };
    // nu_t for t = 1..T(+1); zero beyond the stored range.
    auto nu = [&](int t) { return t - 1 < mult.nu.size() ? mult.nu(t - 1) : 0.0; };

    for (int h = 0; h < H; ++h) {
        const Utility& u = problem.utilities()[h];
        for (int t = 0; t <= T; ++t) {
            const double c = alloc.consumption(h, t);
            if (!(c > 0.0)) {
                bump(audit.feasibility, std::abs(c) + 1.0);
                bump(audit.stationarity, HUGE_VAL);
                continue;
            }
            bump(audit.stationarity, std::abs(-mult.theta(h) * problem.discount(h, t) * u.marginal(c) +
                                              p.tau * mult.lambda_at(h, t)));
        }
        for (int t = 1; t <= T; ++t) {
            bump(audit.adjoint, std::abs(-nu(t) + mult.lambda_at(h, t - 1) -
                                         mult.lambda_at(h, t) * p.growth(t)));
        }
        if (with_default) bump(audit.adjoint, std::abs(mult.lambda_at(h, T) - nu(T + 1)));

        bump(audit.accumulation, std::abs(alloc.capital(h, 0) - p.a0[h]));
        for (int t = 0; t <= T; ++t) {
            const double step = p.labor_income(h, t) + p.growth(t) * alloc.capital(h, t) -
                                p.tau * alloc.consumption(h, t);
            bump(audit.accumulation, std::abs(alloc.capital(h, t + 1) - step));
        }
        if (!with_default) bump(audit.accumulation, std::abs(alloc.capital(h, T + 1)));
    }

    const Vector aggregate = alloc.aggregate_capital();
    const int last = with_default ? T + 1 : T;
    for (int t = 1; t <= last; ++t) {
        bump(audit.feasibility, std::max(0.0, -aggregate(t)));
        bump(audit.complementarity, std::abs(nu(t) * aggregate(t)));
        bump(audit.sign, std::max(0.0, -nu(t)));
    }
    for (int h = 0; h < H; ++h) bump(audit.sign, std::max(0.0, -mult.theta(h)));
    return audit;
}

}  // namespace ramsey
