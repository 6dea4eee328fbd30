#pragma once

#include <vector>

#include "ramsey/model.hpp"

namespace ramsey {

/// Default: only aggregate capital must stay nonnegative, through t = T+1.
/// NoDefault: additionally every household ends with a_{T+1}^h = 0.
enum class Variant { Default, NoDefault };

/// A scalarized Pareto problem: economy, preferences, and household weights theta.
/// Weights are normalized to sum to one on construction. Every weight must be strictly
/// positive: the default model admits no other Pareto points, and the no-default
/// recursion divides by theta_h.
class KKTProblem {
public:
    KKTProblem(EconomyParams params, std::vector<Utility> utilities, Vector theta, Variant variant);

    const EconomyParams& params() const noexcept { return params_; }
    const std::vector<Utility>& utilities() const noexcept { return utilities_; }
    const Vector& theta() const noexcept { return theta_; }
    Variant variant() const noexcept { return variant_; }

    int households() const noexcept { return params_.households; }
    int horizon() const noexcept { return params_.horizon; }

    /// Number of aggregate-constraint multipliers: T+1 (Default) or T (NoDefault).
    int multiplier_count() const noexcept;

    /// Dimension of the residual map: T+1 (Default) or T+H (NoDefault).
    int unknowns() const noexcept;

    /// (beta^h)^t, cached.
    double discount(int h, int t) const { return discount_(h, t); }

private:
    EconomyParams params_;
    std::vector<Utility> utilities_;
    Vector theta_;
    Variant variant_;
    Matrix discount_;
};

/// Residual F together with the trajectories produced on the way.
/// `lambda` is the shared adjoint sequence (Default only; empty for NoDefault).
/// `capital` always spans t = 0..T+1. In the no-default model column T+1 holds the
/// terminal-budget residual, which is zero exactly when a_{T+1}^h = 0.
struct ResidualEvaluation {
    Vector residual;
    Vector lambda;
    Matrix consumption;
    Matrix capital;

    Vector aggregate_capital() const { return capital.colwise().sum().transpose(); }
};

/// lambda_T = nu_{T+1}; lambda_{t-1} = gamma_t lambda_t + nu_t. nu[k] holds nu_{k+1}.
Vector lambda_backward(const KKTProblem& problem, const Vector& nu);

/// c_t^h = (u^h')^{-1}(tau lambda_t / ((beta^h)^t theta_h)). Throws EvaluationFailure
/// (household -1) at the first t with lambda_t <= 0.
Matrix consumption_from_lambda(const KKTProblem& problem, const Vector& lambda);

/// Applies the accumulation law for t = 0..T starting from params.a0.
Matrix capital_forward(const KKTProblem& problem, const Matrix& consumption);

/// F_t = nu_t sum_h a_t^h for t = 1..T, F_{T+1} = sum_h a_{T+1}^h.
ResidualEvaluation residual_default(const KKTProblem& problem, const Vector& nu);

/// c_{t-1}^h = (u^h')^{-1}(beta^h gamma_t u^h'(c_t^h) + tau nu_t / ((beta^h)^{t-1} theta_h)),
/// starting from the terminal column cT. nu[k] holds nu_{k+1}, length T.
Matrix consumption_backward_nodefault(const KKTProblem& problem, const Vector& nu,
                                      const Vector& terminal_consumption);

/// F_t = nu_t sum_h a_t^h for t = 1..T, F_{T+h} = xi_T^h + gamma_T a_T^h - tau c_T^h.
ResidualEvaluation residual_nodefault(const KKTProblem& problem, const Vector& nu,
                                      const Vector& terminal_consumption);

/// Evaluates the variant's residual on the packed unknown vector
/// (nu for Default; [nu, c_T] for NoDefault).
ResidualEvaluation evaluate_residual(const KKTProblem& problem, const Vector& unknowns);

/// theta (normalized), nu (length T+1 or T; nu[k] is nu_{k+1}) and lambda.
/// lambda has one row in the default model, where the adjoint is shared by all
/// households, and H rows in the no-default model.
struct MultiplierSet {
    Vector theta;
    Vector nu;
    Matrix lambda;

    double lambda_at(int h, int t) const { return lambda.rows() == 1 ? lambda(0, t) : lambda(h, t); }
};

/// Largest violation per group of first-order conditions.
struct KKTAudit {
    double stationarity = 0.0;     // (I):  theta_h (beta^h)^t u'(c) = tau lambda_t^h
    double adjoint = 0.0;          // (II), (III)
    double accumulation = 0.0;     // capital law and, without default, a_{T+1}^h = 0
    double feasibility = 0.0;      // aggregate capital >= 0, c > 0
    double complementarity = 0.0;  // (IV) |nu_t sum_h a_t^h|
    double sign = 0.0;             // (V) theta, nu >= 0

    double worst() const;
};

/// Checks the first-order conditions directly on an allocation and multipliers, without
/// going through the recursions. Used to audit solver and oracle output.
KKTAudit audit_kkt(const KKTProblem& problem, const Allocation& alloc, const MultiplierSet& mult);

inline double kkt_residual_full(const KKTProblem& problem, const Allocation& alloc,
                                const MultiplierSet& mult) {
    return audit_kkt(problem, alloc, mult).worst();
}

}  // namespace ramsey
