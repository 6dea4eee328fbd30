#include "ramsey/oracle.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "ramsey/error.hpp"

namespace ramsey {

AffineCapitalMap eliminate_capital(const EconomyParams& params) {
    params.validate();
    const int H = params.households;
    const int n = params.periods();
    AffineCapitalMap map{Matrix::Zero(H, n + 1), Matrix::Zero(n + 1, n)};
    for (int h = 0; h < H; ++h) {
        map.base(h, 0) = params.a0[h];
        for (int t = 0; t < n; ++t) {
            map.base(h, t + 1) = params.labor_income(h, t) + params.growth(t) * map.base(h, t);
        }
    }
    // weight(t, s) = -tau prod_{v=s+1..t-1} gamma_v for s < t.
    for (int s = 0; s < n; ++s) {
        double product = 1.0;
        for (int t = s + 1; t <= n; ++t) {
            map.weight(t, s) = -params.tau * product;
            if (t < n) product *= params.growth(t);
        }
    }
    return map;
}

namespace {

// Barrier problem over the free consumption entries y. Without default, the terminal
// consumption of each household is the affine function
//   c_T^h = terminal_offset(h) + terminal_rows.row(h) . y
// that makes a_{T+1}^h vanish.
class BarrierModel {
public:
    explicit BarrierModel(const ScalarizedProblem& sp)
        : sp_(sp),
          H_(sp.params.households),
          T_(sp.params.horizon),
          no_default_(sp.variant == Variant::NoDefault),
          map_(eliminate_capital(sp.params)) {
        free_periods_ = no_default_ ? T_ : T_ + 1;
        n_ = H_ * free_periods_;
        aggregate_last_ = no_default_ ? T_ : T_ + 1;

        discount_.resize(H_, T_ + 1);
        for (int h = 0; h < H_; ++h) {
            double d = 1.0;
            for (int t = 0; t <= T_; ++t) {
                discount_(h, t) = d;
                d *= sp.params.beta[h];
            }
        }

        // Aggregate capital alpha_t = offset + rows . y, t = 1..aggregate_last_.
        aggregate_rows_ = Matrix::Zero(aggregate_last_, n_);
        aggregate_offset_ = Vector::Zero(aggregate_last_);
        for (int t = 1; t <= aggregate_last_; ++t) {
            aggregate_offset_(t - 1) = map_.base.col(t).sum();
            for (int h = 0; h < H_; ++h) {
                for (int s = 0; s < t && s < free_periods_; ++s) {
                    aggregate_rows_(t - 1, index(h, s)) = map_.weight(t, s);
                }
            }
        }

        if (no_default_) {
            const auto& p = sp.params;
            terminal_rows_ = Matrix::Zero(H_, n_);
            terminal_offset_ = Vector::Zero(H_);
            for (int h = 0; h < H_; ++h) {
                terminal_offset_(h) = (p.labor_income(h, T_) + p.growth(T_) * map_.base(h, T_)) / p.tau;
                for (int s = 0; s < T_; ++s) {
                    terminal_rows_(h, index(h, s)) = p.growth(T_) * map_.weight(T_, s) / p.tau;
                }
            }
        }
    }

    int dimension() const { return n_; }
    int constraint_count() const { return aggregate_last_ + H_ * (T_ + 1); }
    int index(int h, int t) const { return h * free_periods_ + t; }

    Matrix consumption(const Vector& y) const {
        Matrix c(H_, T_ + 1);
        for (int h = 0; h < H_; ++h) {
            for (int t = 0; t < free_periods_; ++t) c(h, t) = y(index(h, t));
            if (no_default_) c(h, T_) = terminal_offset_(h) + terminal_rows_.row(h).dot(y);
        }
        return c;
    }

    Vector aggregate(const Vector& y) const { return aggregate_offset_ + aggregate_rows_ * y; }

    bool strictly_feasible(const Vector& y) const {
        return (consumption(y).array() > 0.0).all() && (aggregate(y).array() > 0.0).all();
    }

    double objective(const Matrix& c) const {
        double v = 0.0;
        for (int h = 0; h < H_; ++h) {
            for (int t = 0; t <= T_; ++t) {
                v += sp_.theta(h) * discount_(h, t) * sp_.utilities[h].value(c(h, t));
            }
        }
        return v;
    }

    double barrier_value(const Vector& y, double mu) const {
        const Matrix c = consumption(y);
        const Vector alpha = aggregate(y);
        if (!(c.array() > 0.0).all() || !(alpha.array() > 0.0).all()) {
            return -std::numeric_limits<double>::infinity();
        }
        return objective(c) + mu * (c.array().log().sum() + alpha.array().log().sum());
    }

    void derivatives(const Vector& y, double mu, Vector& grad, Matrix& hess) const {
        const Matrix c = consumption(y);
        const Vector alpha = aggregate(y);
        grad = Vector::Zero(n_);
        hess = Matrix::Zero(n_, n_);
        for (int h = 0; h < H_; ++h) {
            const Utility& u = sp_.utilities[h];
            for (int t = 0; t <= T_; ++t) {
                const double w = sp_.theta(h) * discount_(h, t);
                const double g = w * u.marginal(c(h, t)) + mu / c(h, t);
                const double k = w * u.curvature(c(h, t)) - mu / (c(h, t) * c(h, t));
                if (t < free_periods_) {
                    grad(index(h, t)) += g;
                    hess(index(h, t), index(h, t)) += k;
                } else {
                    grad += g * terminal_rows_.row(h).transpose();
                    hess += k * terminal_rows_.row(h).transpose() * terminal_rows_.row(h);
                }
            }
        }
        const Vector inv = alpha.cwiseInverse();
        grad += mu * aggregate_rows_.transpose() * inv;
        hess -= mu * aggregate_rows_.transpose() * inv.cwiseAbs2().asDiagonal() * aggregate_rows_;
    }

    // Largest step keeping every constraint strictly positive, scaled back by `fraction`.
    double max_step(const Vector& y, const Vector& d, double fraction) const {
        double limit = std::numeric_limits<double>::infinity();
        auto visit = [&](double value, double rate) {
            if (rate < 0.0) limit = std::min(limit, -value / rate);
        };
        const Matrix c = consumption(y);
        const Vector alpha = aggregate(y);
        const Vector dalpha = aggregate_rows_ * d;
        for (int h = 0; h < H_; ++h) {
            for (int t = 0; t < free_periods_; ++t) visit(c(h, t), d(index(h, t)));
            if (no_default_) visit(c(h, T_), terminal_rows_.row(h).dot(d));
        }
        for (int t = 0; t < aggregate_last_; ++t) visit(alpha(t), dalpha(t));
        return std::min(1.0, fraction * limit);
    }

    std::optional<Vector> strictly_feasible_start() const {
        const auto& p = sp_.params;
        for (double share : {1.0, 0.5, 0.25, 0.1, 0.01}) {
            Vector y(n_);
            for (int h = 0; h < H_; ++h) {
                for (int t = 0; t < free_periods_; ++t) y(index(h, t)) = share * p.omega[t] * p.labor[h];
            }
            if (strictly_feasible(y)) return y;
        }
        return std::nullopt;
    }

    const AffineCapitalMap& capital_map() const { return map_; }
    double discount(int h, int t) const { return discount_(h, t); }

private:
    const ScalarizedProblem& sp_;
    int H_;
    int T_;
    bool no_default_;
    AffineCapitalMap map_;
    int free_periods_ = 0;
    int n_ = 0;
    int aggregate_last_ = 0;
    Matrix discount_;
    Matrix aggregate_rows_;
    Vector aggregate_offset_;
    Matrix terminal_rows_;
    Vector terminal_offset_;
};

}  // namespace

OracleResult solve_scalarized(const ScalarizedProblem& sp, const OracleOptions& options) {
    const int H = sp.params.households;
    const int T = sp.params.horizon;
    if (static_cast<int>(sp.utilities.size()) != H || sp.theta.size() != H) {
        throw DimensionError("scalarized problem: utilities and theta must have length H");
    }
    if (!(options.barrier_decrease > 0.0 && options.barrier_decrease < 1.0) || !(options.tol > 0.0)) {
        throw DomainError("oracle options out of range");
    }

    const BarrierModel model(sp);
    OracleResult result;
    auto start = model.strictly_feasible_start();
    if (!start) {
        result.message = "no strictly feasible starting point found";
        return result;
    }
    Vector y = *start;
    double mu = options.initial_barrier;
    const int m = model.constraint_count();

    Vector grad;
    Matrix hess;
    bool done = false;
    for (int stage = 0; stage < options.max_stages && !done; ++stage) {
        result.stages = stage + 1;
        bool stage_converged = false;
        for (int it = 0; it < options.max_newton_per_stage; ++it) {
            model.derivatives(y, mu, grad, hess);
            const Eigen::LDLT<Matrix> ldlt((-hess).eval());
            const Vector d = ldlt.solve(grad);
            ++result.newton_steps;
            // Squared Newton decrement: the gradient norm in the inverse-Hessian metric and
            // a bound on the subproblem's suboptimality.
            const double decrement = grad.dot(d);
            const double f0 = model.barrier_value(y, mu);
            const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f0));
            if (decrement <= options.tol * options.tol || decrement <= rounding) {
                stage_converged = true;
                break;
            }
            double step = model.max_step(y, d, 0.99);
            bool accepted = false;
            while (step > 1e-16) {
                const Vector trial = y + step * d;
                const double f = model.barrier_value(trial, mu);
                if (f >= f0 + 1e-4 * step * decrement) {
                    y = trial;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                stage_converged = decrement <= 1e3 * rounding;
                break;
            }
        }
        if (!stage_converged) {
            result.message = "barrier subproblem did not converge at weight " + std::to_string(mu);
            break;
        }
        if (m * mu <= options.tol && mu <= options.tol) {
            done = true;
        } else {
            mu *= options.barrier_decrease;
        }
    }

    const Matrix c = model.consumption(y);
    result.barrier_weight = mu;
    result.converged = done;
    if (done) result.message = "converged";
    result.allocation.consumption = c;
    result.allocation.capital = model.capital_map().apply(c);
    result.welfare = welfare(sp.params, sp.utilities, c);
    result.objective = sp.theta.dot(result.welfare);
    result.upper_bound = result.objective + m * mu;

    // lambda from stationarity, nu from the adjoint recursion. Reading nu off mu / alpha
    // loses all accuracy where a constraint binds.
    MultiplierSet& mult = result.multipliers;
    mult.theta = sp.theta;
    const double tau = sp.params.tau;
    Matrix marginal(H, T + 1);
    for (int h = 0; h < H; ++h) {
        for (int t = 0; t <= T; ++t) {
            marginal(h, t) = sp.theta(h) * model.discount(h, t) * sp.utilities[h].marginal(c(h, t)) / tau;
        }
    }
    if (sp.variant == Variant::Default) {
        mult.lambda = marginal.colwise().mean();
        mult.nu.resize(T + 1);
        mult.nu(T) = mult.lambda(0, T);
        for (int t = 1; t <= T; ++t) {
            mult.nu(t - 1) = mult.lambda(0, t - 1) - sp.params.growth(t) * mult.lambda(0, t);
        }
    } else {
        mult.lambda = marginal;
        mult.nu.resize(T);
        for (int t = 1; t <= T; ++t) {
            mult.nu(t - 1) = (marginal.col(t - 1) - sp.params.growth(t) * marginal.col(t)).mean();
        }
    }
    return result;
}

}  // namespace ramsey
