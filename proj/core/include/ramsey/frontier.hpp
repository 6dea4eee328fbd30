#pragma once

#include <cstddef>
#include <vector>

#include "ramsey/kkt.hpp"
#include "ramsey/solver.hpp"

namespace ramsey {

struct FrontierPoint {
    Vector theta;
    Vector welfare;
    bool converged = false;
    bool dominated = false;  // set before filtering
    double residual_norm = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::MaxIterations;
};

/// All theta = k / resolution with integer k_h >= 1 and sum k_h = resolution, in
/// lexicographic order of k. Throws DomainError when resolution < H.
std::vector<Vector> simplex_grid(int households, int resolution);

/// w1 >= w2 componentwise with at least one strict inequality (welfare is maximized).
/// Throws DimensionError on length mismatch.
bool dominates(const Vector& w1, const Vector& w2);

/// Dominance up to tol: w1 >= w2 - tol everywhere and w1 > w2 + tol somewhere.
bool dominates(const Vector& w1, const Vector& w2, double tol);

inline constexpr double kWelfareTol = 1e-9;

/// Marks each point dominated by another point in the list and returns the undominated
/// ones in input order.
std::vector<FrontierPoint> pareto_filter(std::vector<FrontierPoint>& points,
                                         double tol = kWelfareTol);

struct FrontierSweep {
    std::vector<FrontierPoint> all;       // every grid point, sorted by theta
    std::vector<FrontierPoint> frontier;  // converged and undominated
    std::vector<Vector> failed;           // theta values that did not converge
};

/// Solves the scalarized problem at every grid point and filters by dominance.
/// Results do not depend on `workers`.
FrontierSweep sweep(const EconomyParams& params, const std::vector<Utility>& utilities,
                    Variant variant, int resolution, const SolverConfig& config,
                    std::size_t workers = 1);

}  // namespace ramsey
