#pragma once

#include <utility>

#include "ramsey/kkt.hpp"

namespace ramsey {

enum class NcpFunction { FischerBurmeister, Min };
enum class JacobianMode { FiniteDifference, Analytic };

/// phi(p, q) = sqrt(p^2 + q^2) - p - q. Zero iff p >= 0, q >= 0, pq = 0.
double fischer_burmeister(double p, double q);

/// Element of the generalized gradient of the FB function. At the kink p = q = 0 the
/// selection is (-1 + 1/sqrt 2) in both components.
std::pair<double, double> fischer_burmeister_gradient(double p, double q);

/// Gradient selection of min(p, q); ties pick p.
std::pair<double, double> min_function_gradient(double p, double q);

/// The KKT residual map with each complementarity pair (nu_t, aggregate capital at t),
/// t = 1..T, replaced by an NCP function. The terminal equations are kept verbatim:
/// sum_h a_{T+1}^h (Default) and the H terminal budgets (NoDefault).
/// Holds a reference to the problem, which must outlive it.
class NCPSystem {
public:
    struct Evaluation {
        Vector phi;
        ResidualEvaluation inner;
    };

    NCPSystem(const KKTProblem& problem, NcpFunction function);

    /// Pairs kappa * nu_t with aggregate capital instead of nu_t. Any kappa > 0 leaves the
    /// root set unchanged; a kappa that puts both arguments on the same scale keeps the
    /// Newton iteration well conditioned.
    void set_multiplier_scale(double kappa);
    double multiplier_scale() const noexcept { return kappa_; }

    const KKTProblem& problem() const noexcept { return *problem_; }
    NcpFunction function() const noexcept { return function_; }
    int dimension() const noexcept { return problem_->unknowns(); }

    /// Throws EvaluationFailure when the recursions are not solvable at x.
    Evaluation evaluate(const Vector& x) const;

    /// Square Jacobian of phi at x. Finite-difference mode uses forward differences with
    /// step fd_step * max(|x_j|, 1), falling back to a backward difference when the forward
    /// point cannot be evaluated.
    Matrix jacobian(const Vector& x, JacobianMode mode, double fd_step = 1e-7) const;

    /// d(sum_h a_t^h)/d nu_t for t = 1..T: how fast each multiplier moves its own slack.
    Vector pairing_slopes(const Vector& x) const;

    /// Jacobian of the unreformulated residual F (analytic), used by jacobian() and tests.
    Matrix residual_jacobian(const Vector& x) const;

private:
    double phi(double p, double q) const;
    std::pair<double, double> phi_gradient(double p, double q) const;

    Matrix analytic_jacobian(const Vector& x) const;
    Matrix finite_difference_jacobian(const Vector& x, double fd_step) const;

    struct Sensitivities {
        Matrix aggregate;  // d(sum_h a_t^h)/dx, rows t = 0..T+1
        Matrix terminal;   // d(a_{T+1}^h)/dx, rows h
    };
    Sensitivities sensitivities(const Vector& x, const ResidualEvaluation& eval) const;

    const KKTProblem* problem_;
    NcpFunction function_;
    double kappa_ = 1.0;
};

inline NCPSystem reformulate(const KKTProblem& problem,
                             NcpFunction function = NcpFunction::FischerBurmeister) {
    return NCPSystem(problem, function);
}

}  // namespace ramsey
