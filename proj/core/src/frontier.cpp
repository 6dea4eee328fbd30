#include "ramsey/frontier.hpp"

#include <algorithm>
#include <future>
#include <string>

#include "ramsey/error.hpp"

namespace ramsey {

std::vector<Vector> simplex_grid(int households, int resolution) {
    if (households < 1) throw DomainError("simplex grid needs at least one household");
    if (resolution < households) {
        throw DomainError("resolution " + std::to_string(resolution) +
                          " admits no strictly positive weights for " + std::to_string(households) +
                          " households");
    }
    std::vector<Vector> grid;
    std::vector<int> k(static_cast<std::size_t>(households), 1);
    // Enumerate compositions of `resolution` into positive parts in lexicographic order.
    auto recurse = [&](auto&& self, int h, int remaining) -> void {
        if (h == households - 1) {
            k[h] = remaining;
            Vector theta(households);
            for (int i = 0; i < households; ++i) theta(i) = static_cast<double>(k[i]) / resolution;
            grid.push_back(std::move(theta));
            return;
        }
        for (int v = 1; v <= remaining - (households - 1 - h); ++v) {
            k[h] = v;
            self(self, h + 1, remaining - v);
        }
    };
    recurse(recurse, 0, resolution);
    return grid;
}

bool dominates(const Vector& w1, const Vector& w2) {
    return dominates(w1, w2, 0.0);
}

bool dominates(const Vector& w1, const Vector& w2, double tol) {
    if (w1.size() != w2.size()) throw DimensionError("dominates: welfare vectors differ in length");
    bool strict = false;
    for (Eigen::Index i = 0; i < w1.size(); ++i) {
        if (w1(i) < w2(i) - tol) return false;
        if (w1(i) > w2(i) + tol) strict = true;
    }
    return strict;
}

std::vector<FrontierPoint> pareto_filter(std::vector<FrontierPoint>& points, double tol) {
    std::vector<FrontierPoint> kept;
    for (std::size_t i = 0; i < points.size(); ++i) {
        points[i].dominated = false;
        for (std::size_t j = 0; j < points.size() && !points[i].dominated; ++j) {
            if (i != j && dominates(points[j].welfare, points[i].welfare, tol)) {
                points[i].dominated = true;
            }
        }
        if (!points[i].dominated) kept.push_back(points[i]);
    }
    return kept;
}

namespace {

FrontierPoint solve_point(const EconomyParams& params, const std::vector<Utility>& utilities,
                          Variant variant, const Vector& theta, const SolverConfig& config) {
    const KKTProblem problem(params, utilities, theta, variant);
    const SolveReport report = solve(problem, config);
    FrontierPoint point;
    point.theta = problem.theta();
    point.welfare = report.welfare;
    point.converged = report.converged;
    point.residual_norm = report.residual_norm;
    point.iterations = report.iterations;
    point.status = report.status;
    return point;
}

}  // namespace

FrontierSweep sweep(const EconomyParams& params, const std::vector<Utility>& utilities,
                    Variant variant, int resolution, const SolverConfig& config,
                    std::size_t workers) {
    const std::vector<Vector> grid = simplex_grid(params.households, resolution);
    std::vector<FrontierPoint> points(grid.size());

    // Static partition: worker w handles indices w, w + workers, ...
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(grid.size(), 1));
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async, [&, w] {
            for (std::size_t i = w; i < grid.size(); i += workers) {
                points[i] = solve_point(params, utilities, variant, grid[i], config);
            }
        }));
    }
    for (auto& job : jobs) job.get();

    std::sort(points.begin(), points.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
        return std::lexicographical_compare(a.theta.begin(), a.theta.end(), b.theta.begin(), b.theta.end());
    });

    FrontierSweep out;
    std::vector<FrontierPoint> converged;
    for (const auto& p : points) {
        if (p.converged) {
            converged.push_back(p);
        } else {
            out.failed.push_back(p.theta);
        }
    }
    auto survivors = pareto_filter(converged, kWelfareTol);
    // Propagate dominance flags back to the full list.
    std::size_t next = 0;
    for (auto& p : points) {
        if (p.converged) p.dominated = converged[next++].dominated;
    }
    out.all = std::move(points);
    out.frontier = std::move(survivors);
    return out;
}

}  // namespace ramsey
