#include "ramsey/ncp.hpp"

#include <cmath>

#include "ramsey/error.hpp"

namespace ramsey {

double fischer_burmeister(double p, double q) {
    return std::hypot(p, q) - p - q;
}

std::pair<double, double> fischer_burmeister_gradient(double p, double q) {
    const double r = std::hypot(p, q);
    if (r == 0.0) {
        const double g = -1.0 + 1.0 / std::sqrt(2.0);
        return {g, g};
    }
    return {p / r - 1.0, q / r - 1.0};
}

std::pair<double, double> min_function_gradient(double p, double q) {
    return p <= q ? std::pair{1.0, 0.0} : std::pair{0.0, 1.0};
}

NCPSystem::NCPSystem(const KKTProblem& problem, NcpFunction function)
    : problem_(&problem), function_(function) {}

void NCPSystem::set_multiplier_scale(double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("multiplier scale must be positive");
    kappa_ = kappa;
}

double NCPSystem::phi(double p, double q) const {
    return function_ == NcpFunction::FischerBurmeister ? fischer_burmeister(p, q) : std::min(p, q);
}

std::pair<double, double> NCPSystem::phi_gradient(double p, double q) const {
    return function_ == NcpFunction::FischerBurmeister ? fischer_burmeister_gradient(p, q)
                                                       : min_function_gradient(p, q);
}

NCPSystem::Evaluation NCPSystem::evaluate(const Vector& x) const {
    Evaluation out;
    out.inner = evaluate_residual(*problem_, x);
    const int T = problem_->horizon();
    const Vector aggregate = out.inner.aggregate_capital();
    out.phi = out.inner.residual;
    for (int t = 1; t <= T; ++t) out.phi(t - 1) = phi(kappa_ * x(t - 1), aggregate(t));
    return out;
}

NCPSystem::Sensitivities NCPSystem::sensitivities(const Vector& x,
                                                  const ResidualEvaluation& eval) const {
    const auto& prob = *problem_;
    const auto& p = prob.params();
    const int H = p.households;
    const int T = p.horizon;
    const int n = static_cast<int>(x.size());

    // dc[j] holds d c / d x_j as an H x (T+1) matrix.
    std::vector<Matrix> dc(static_cast<std::size_t>(n), Matrix::Zero(H, T + 1));

    if (prob.variant() == Variant::Default) {
        // lambda is linear in nu: d lambda_s / d nu_{j+1} = prod_{v=s+1..j} gamma_v for s <= j.
        // dc/dlambda = tau / (beta^t theta u''(c)).
        Matrix dc_dlambda(H, T + 1);
        for (int h = 0; h < H; ++h) {
            for (int t = 0; t <= T; ++t) {
                const double scale = p.tau / (prob.discount(h, t) * prob.theta()(h));
                dc_dlambda(h, t) = scale / prob.utilities()[h].curvature(eval.consumption(h, t));
            }
        }
        for (int j = 0; j < n; ++j) {
            double dlambda = 1.0;
            for (int s = j; s >= 0; --s) {
                dc[j].col(s) = dc_dlambda.col(s) * dlambda;
                if (s > 0) dlambda *= p.growth(s);
            }
        }
    } else {
        // c_{t-1} = inv(beta gamma_t u'(c_t) + tau nu_t / (beta^{t-1} theta)).
        Matrix chain(H, T + 1);  // d c_{t-1} / d c_t, stored at column t
        Matrix push(H, T + 1);   // d c_{t-1} / d nu_t, stored at column t
        for (int h = 0; h < H; ++h) {
            const Utility& u = prob.utilities()[h];
            for (int t = 1; t <= T; ++t) {
                const double inv_curv = 1.0 / u.curvature(eval.consumption(h, t - 1));
                chain(h, t) = p.beta[h] * p.growth(t) * u.curvature(eval.consumption(h, t)) * inv_curv;
                push(h, t) = p.tau / (prob.discount(h, t - 1) * prob.theta()(h)) * inv_curv;
            }
        }
        for (int j = 0; j < T; ++j) {
            // nu_{j+1} enters c_j first.
            dc[j].col(j) = push.col(j + 1);
            for (int t = j; t >= 1; --t) dc[j].col(t - 1) = chain.col(t).cwiseProduct(dc[j].col(t));
        }
        for (int g = 0; g < H; ++g) {
            auto& d = dc[T + g];
            d(g, T) = 1.0;
            for (int t = T; t >= 1; --t) d(g, t - 1) = chain(g, t) * d(g, t);
        }
    }

    Sensitivities out{Matrix::Zero(T + 2, n), Matrix::Zero(H, n)};
    for (int j = 0; j < n; ++j) {
        Vector da = Vector::Zero(H);
        for (int t = 0; t <= T; ++t) {
            for (int h = 0; h < H; ++h) da(h) = p.growth(t) * da(h) - p.tau * dc[j](h, t);
            out.aggregate(t + 1, j) = da.sum();
        }
        out.terminal.col(j) = da;
    }
    return out;
}

Vector NCPSystem::pairing_slopes(const Vector& x) const {
    const ResidualEvaluation eval = evaluate_residual(*problem_, x);
    const Sensitivities s = sensitivities(x, eval);
    const int T = problem_->horizon();
    Vector slopes(T);
    for (int t = 1; t <= T; ++t) slopes(t - 1) = s.aggregate(t, t - 1);
    return slopes;
}

Matrix NCPSystem::residual_jacobian(const Vector& x) const {
    const ResidualEvaluation eval = evaluate_residual(*problem_, x);
    const Sensitivities s = sensitivities(x, eval);
    const int T = problem_->horizon();
    const int n = static_cast<int>(x.size());
    const Vector aggregate = eval.aggregate_capital();

    Matrix J(n, n);
    for (int t = 1; t <= T; ++t) {
        J.row(t - 1) = x(t - 1) * s.aggregate.row(t);
        J(t - 1, t - 1) += aggregate(t);
    }
    if (problem_->variant() == Variant::Default) {
        J.row(T) = s.aggregate.row(T + 1);
    } else {
        J.bottomRows(problem_->households()) = s.terminal;
    }
    return J;
}

Matrix NCPSystem::analytic_jacobian(const Vector& x) const {
    const ResidualEvaluation eval = evaluate_residual(*problem_, x);
    const Sensitivities s = sensitivities(x, eval);
    const int T = problem_->horizon();
    const int n = static_cast<int>(x.size());
    const Vector aggregate = eval.aggregate_capital();

    Matrix J(n, n);
    for (int t = 1; t <= T; ++t) {
        const auto [dp, dq] = phi_gradient(kappa_ * x(t - 1), aggregate(t));
        J.row(t - 1) = dq * s.aggregate.row(t);
        J(t - 1, t - 1) += dp * kappa_;
    }
    if (problem_->variant() == Variant::Default) {
        J.row(T) = s.aggregate.row(T + 1);
    } else {
        J.bottomRows(problem_->households()) = s.terminal;
    }
    return J;
}

Matrix NCPSystem::finite_difference_jacobian(const Vector& x, double fd_step) const {
    const Vector base = evaluate(x).phi;
    const int n = static_cast<int>(x.size());
    Matrix J(n, n);
    for (int j = 0; j < n; ++j) {
        const double h = fd_step * std::max(std::abs(x(j)), 1.0);
        Vector probe = x;
        probe(j) += h;
        try {
            J.col(j) = (evaluate(probe).phi - base) / h;
        } catch (const EvaluationFailure&) {
            probe(j) = x(j) - h;
            J.col(j) = (base - evaluate(probe).phi) / h;
        }
    }
    return J;
}

Matrix NCPSystem::jacobian(const Vector& x, JacobianMode mode, double fd_step) const {
    if (x.size() != dimension()) throw DimensionError("jacobian: point has the wrong dimension");
    return mode == JacobianMode::Analytic ? analytic_jacobian(x) : finite_difference_jacobian(x, fd_step);
}

}  // namespace ramsey
