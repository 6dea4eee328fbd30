#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <ramsey/frontier.hpp>
#include <ramsey/oracle.hpp>

#include "ramsey/cli/scenario.hpp"

namespace ramsey::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitParse = 2,
    kExitNotConverged = 3,
    kExitGap = 4,
};

/// Command-line overrides applied on top of a scenario file.
struct CommandOptions {
    std::filesystem::path config;
    std::optional<Variant> variant;
    std::optional<std::filesystem::path> out;
    std::optional<int> resolution;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::optional<int> max_oracle_size;
};

void apply_overrides(ScenarioConfig& config, const CommandOptions& options);

/// Writes consumption.csv, capital.csv, aggregates.csv, multipliers.csv and report.txt.
void write_solution(const std::filesystem::path& dir, const KKTProblem& problem, const SolveReport& report);
std::string solution_report(const KKTProblem& problem, const SolveReport& report);

struct VerifyComparison {
    SolveReport solver;
    OracleResult oracle;
    double weighted_gap = 0.0;    // |theta . (w_solver - w_oracle)|
    Vector household_gaps;        // |w_solver - w_oracle| per household
    double oracle_audit = 0.0;    // KKT audit of the oracle solution
};

inline constexpr double kVerifyGapTol = 1e-6;

VerifyComparison compare_with_oracle(const KKTProblem& problem, const SolverConfig& config,
                                     const OracleOptions& oracle_options);
std::string verify_report(const KKTProblem& problem, const VerifyComparison& cmp);

std::string frontier_csv(const FrontierSweep& sweep, int households);

int run_solve(const CommandOptions& options, std::ostream& out, std::ostream& err);
int run_verify(const CommandOptions& options, std::ostream& out, std::ostream& err);
int run_sweep(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace ramsey::cli
