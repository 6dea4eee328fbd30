#include "ramsey/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ramsey/error.hpp"

namespace ramsey {

void SolverConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive");
    };
    positive(residual_tol, "residual_tol");
    positive(fd_step, "fd_step");
    positive(min_step, "min_step");
    positive(complementarity_tol, "complementarity_tol");
    positive(feasibility_tol, "feasibility_tol");
    if (!(backtrack > 0.0 && backtrack < 1.0)) throw DomainError("backtrack must lie in (0,1)");
    if (max_iterations < 0) throw DomainError("max_iterations must be nonnegative");
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIterations: return "max-iterations";
        case SolveStatus::LineSearchStalled: return "line-search-stalled";
        case SolveStatus::EvaluationFailure: return "evaluation-failure";
    }
    return "unknown";
}

namespace {

// Bisection in log space for an increasing function g on (0, inf) with g(0+) < 0 < g(inf).
// g may throw EvaluationFailure near the ends; such points count as the failing side.
template <class F>
double log_bisect(F&& g, bool increasing) {
    auto sign_at = [&](double v) {
        const double value = g(v);
        return increasing ? value : -value;
    };
    double lo = 1.0, hi = 1.0;
    while (sign_at(lo) >= 0.0) {
        lo *= 0.5;
        if (lo < 1e-300) throw EvaluationFailure("initial point bracket not found", -1, -1);
    }
    while (sign_at(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e300) throw EvaluationFailure("initial point bracket not found", -1, -1);
    }
    for (int i = 0; i < 400 && hi > lo * (1.0 + 1e-16); ++i) {
        const double mid = std::sqrt(lo) * std::sqrt(hi);
        if (mid <= lo || mid >= hi) break;
        (sign_at(mid) < 0.0 ? lo : hi) = mid;
    }
    const double glo = std::abs(g(lo));
    const double ghi = std::abs(g(hi));
    return glo <= ghi ? lo : hi;
}

Vector initial_default(const KKTProblem& problem) {
    const int T = problem.horizon();
    Vector nu = Vector::Zero(T + 1);
    auto terminal = [&](double v) {
        nu(T) = v;
        return residual_default(problem, nu).residual(T);
    };
    nu(T) = log_bisect(terminal, true);
    return nu;
}

Vector initial_nodefault(const KKTProblem& problem) {
    const int T = problem.horizon();
    const int H = problem.households();
    const Vector nu = Vector::Zero(T);
    // With nu = 0 households decouple, so each terminal budget depends on its own c_T only.
    Vector cT = Vector::Ones(H);
    for (int h = 0; h < H; ++h) {
        auto budget = [&](double v) {
            Vector probe = cT;
            probe(h) = v;
            return residual_nodefault(problem, nu, probe).residual(T + h);
        };
        cT(h) = log_bisect(budget, false);
    }
    Vector x(T + H);
    x << nu, cT;
    return x;
}

struct Attempt {
    Vector x;
    NCPSystem::Evaluation eval;
    double norm = HUGE_VAL;
    int iterations = 0;
    SolveStatus status = SolveStatus::MaxIterations;
    std::vector<IterationRecord> trace;
};

Vector newton_direction(const Matrix& J, const Vector& phi) {
    Vector d = J.partialPivLu().solve(-phi);
    if (!d.allFinite()) d = J.colPivHouseholderQr().solve(-phi);
    return d;
}

Attempt newton(const NCPSystem& system, const SolverConfig& config, Vector x) {
    Attempt a;
    try {
        a.eval = system.evaluate(x);
    } catch (const EvaluationFailure&) {
        a.x = std::move(x);
        a.status = SolveStatus::EvaluationFailure;
        return a;
    }
    a.x = std::move(x);
    a.norm = a.eval.phi.lpNorm<Eigen::Infinity>();
    double merit = a.eval.phi.norm();
    a.trace.push_back({0, a.norm, merit, 0.0});

    constexpr double sufficient_decrease = 1e-4;
    for (int it = 1; it <= config.max_iterations; ++it) {
        if (a.norm <= config.residual_tol) {
            a.status = SolveStatus::Converged;
            return a;
        }
        const Matrix J = system.jacobian(a.x, config.jacobian, config.fd_step);
        const Vector d = newton_direction(J, a.eval.phi);

        double step = 1.0;
        bool any_evaluated = false;
        bool accepted = false;
        while (step >= config.min_step) {
            const Vector trial = a.x + step * d;
            try {
                auto eval = system.evaluate(trial);
                any_evaluated = true;
                const double trial_merit = eval.phi.norm();
                if (trial_merit <= (1.0 - sufficient_decrease * step) * merit) {
                    a.x = trial;
                    a.eval = std::move(eval);
                    merit = trial_merit;
                    accepted = true;
                    break;
                }
            } catch (const EvaluationFailure&) {
            }
            step *= config.backtrack;
        }
        a.iterations = it;
        if (!accepted) {
            a.status = any_evaluated ? SolveStatus::LineSearchStalled : SolveStatus::EvaluationFailure;
            return a;
        }
        a.norm = a.eval.phi.lpNorm<Eigen::Infinity>();
        a.trace.push_back({it, a.norm, merit, step});
    }
    a.status = a.norm <= config.residual_tol ? SolveStatus::Converged : SolveStatus::MaxIterations;
    return a;
}

Vector perturb(const Vector& x, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double scale = x.lpNorm<Eigen::Infinity>();
    Vector out = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        out(j) += 1e-2 * unit(rng) * std::max(std::abs(x(j)), scale);
    }
    return out;
}

MultiplierSet recover_multipliers(const KKTProblem& problem, const Vector& x,
                                  const ResidualEvaluation& eval) {
    MultiplierSet m;
    m.theta = problem.theta();
    m.nu = x.head(problem.multiplier_count());
    if (problem.variant() == Variant::Default) {
        m.lambda = eval.lambda.transpose();
        return m;
    }
    const int H = problem.households();
    const int n = problem.params().periods();
    m.lambda.resize(H, n);
    for (int h = 0; h < H; ++h) {
        for (int t = 0; t < n; ++t) {
            m.lambda(h, t) = problem.theta()(h) * problem.discount(h, t) *
                             problem.utilities()[h].marginal(eval.consumption(h, t)) /
                             problem.params().tau;
        }
    }
    return m;
}

// Median of |d slack_t / d nu_t| at the starting point; 1 when there is nothing to pair or
// the slopes cannot be evaluated.
double multiplier_scale(const NCPSystem& system, const Vector& x0) {
    Vector slopes;
    try {
        slopes = system.pairing_slopes(x0).cwiseAbs();
    } catch (const EvaluationFailure&) {
        return 1.0;
    }
    std::vector<double> v(slopes.begin(), slopes.end());
    std::erase_if(v, [](double s) { return !(s > 0.0) || !std::isfinite(s); });
    if (v.empty()) return 1.0;
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

}  // namespace

Vector default_initial_point(const KKTProblem& problem) {
    return problem.variant() == Variant::Default ? initial_default(problem) : initial_nodefault(problem);
}

SolveReport solve(const KKTProblem& problem, const SolverConfig& config,
                  const std::optional<Vector>& initial) {
    config.validate();
    NCPSystem system(problem, config.ncp);

    Vector x0;
    if (initial) {
        if (initial->size() != problem.unknowns()) throw DimensionError("initial point has the wrong length");
        x0 = *initial;
    } else {
        x0 = default_initial_point(problem);
    }
    system.set_multiplier_scale(multiplier_scale(system, x0));

    Attempt best = newton(system, config, x0);
    bool restarted = false;
    if (best.status != SolveStatus::Converged && config.restart) {
        restarted = true;
        Attempt second = newton(system, config, perturb(x0, config.seed));
        second.iterations += best.iterations;
        if (second.status == SolveStatus::Converged || second.norm < best.norm) {
            best = std::move(second);
        } else {
            best.iterations = second.iterations;
        }
    }

    SolveReport report;
    report.unknowns = best.x;
    report.iterations = best.iterations;
    report.status = best.status;
    report.converged = best.status == SolveStatus::Converged;
    report.restarted = restarted;
    report.residual_norm = best.norm;
    report.trace = std::move(best.trace);

    if (best.eval.phi.size() == 0) {
        report.message = "residual could not be evaluated at the initial point; try a different initial point";
        return report;
    }

    report.allocation = {best.eval.inner.consumption, best.eval.inner.capital};
    report.multipliers = recover_multipliers(problem, best.x, best.eval.inner);
    report.audit = audit_kkt(problem, report.allocation, report.multipliers);
    report.welfare = welfare(problem.params(), problem.utilities(), report.allocation.consumption);

    const Vector aggregate = report.allocation.aggregate_capital();
    for (int t = 1; t <= problem.horizon(); ++t) {
        if (std::abs(report.multipliers.nu(t - 1)) <= config.complementarity_tol &&
            std::abs(aggregate(t)) <= config.feasibility_tol) {
            report.degenerate = true;
        }
    }

    switch (report.status) {
        case SolveStatus::Converged:
            report.message = "converged";
            break;
        case SolveStatus::MaxIterations:
            report.message = "iteration limit reached";
            break;
        case SolveStatus::LineSearchStalled:
            report.message = "line search could not reduce the residual";
            break;
        case SolveStatus::EvaluationFailure:
            report.message = "no trial step could be evaluated; try a different initial point";
            break;
    }
    return report;
}

}  // namespace ramsey
