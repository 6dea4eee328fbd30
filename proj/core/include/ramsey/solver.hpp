#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ramsey/kkt.hpp"
#include "ramsey/ncp.hpp"

namespace ramsey {

struct SolverConfig {
    double residual_tol = 1e-10;          // max-norm of the reformulated residual
    int max_iterations = 200;
    double fd_step = 1e-7;                // relative
    double backtrack = 0.5;
    double min_step = 1e-12;
    JacobianMode jacobian = JacobianMode::Analytic;
    NcpFunction ncp = NcpFunction::FischerBurmeister;
    double complementarity_tol = 1e-8;
    double feasibility_tol = kFeasibilityTol;
    std::uint64_t seed = 0;               // restart perturbation
    bool restart = true;

    /// Throws DomainError on nonpositive tolerances or a backtracking factor outside (0,1).
    void validate() const;
};

enum class SolveStatus {
    Converged,
    MaxIterations,
    LineSearchStalled,
    EvaluationFailure,  // no trial point along the Newton direction could be evaluated
};

std::string to_string(SolveStatus status);

struct IterationRecord {
    int iteration;
    double residual_norm;  // max-norm of phi
    double merit;          // Euclidean norm of phi, strictly decreasing along accepted steps
    double step;
};

struct SolveReport {
    Allocation allocation;
    MultiplierSet multipliers;
    Vector unknowns;  // packed root: nu, or [nu, c_T]
    double residual_norm = 0.0;
    KKTAudit audit;
    int iterations = 0;
    bool converged = false;
    bool degenerate = false;  // some nu_t and aggregate a_t both vanish
    bool restarted = false;
    SolveStatus status = SolveStatus::MaxIterations;
    std::string message;
    Vector welfare;
    std::vector<IterationRecord> trace;
};

/// Default model: nu_t = 0 for t <= T and nu_{T+1} chosen by bisection so that aggregate
/// terminal capital vanishes. No-default model: nu = 0 and each c_T^h chosen by bisection
/// so that household h alone exhausts its wealth.
Vector default_initial_point(const KKTProblem& problem);

/// Damped semismooth Newton on the reformulated system, with one perturbed restart on
/// failure. Deterministic given (problem, config, initial).
SolveReport solve(const KKTProblem& problem, const SolverConfig& config = {},
                  const std::optional<Vector>& initial = std::nullopt);

}  // namespace ramsey
