#include "ramsey/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <ramsey/error.hpp>

#include "ramsey/cli/csv.hpp"

namespace ramsey::cli {

namespace fs = std::filesystem;

void apply_overrides(ScenarioConfig& config, const CommandOptions& options) {
    if (options.variant) config.variant = *options.variant;
    if (options.out) config.output_directory = *options.out;
    if (options.resolution) config.resolution = *options.resolution;
    if (options.tol) config.solver.residual_tol = *options.tol;
    if (options.seed) config.solver.seed = *options.seed;
    if (options.max_oracle_size) config.max_oracle_size = *options.max_oracle_size;
}

namespace {

std::vector<std::string> household_header(const std::string& first, const std::string& prefix, int H) {
    std::vector<std::string> header{first};
    for (int h = 1; h <= H; ++h) header.push_back(prefix + std::to_string(h));
    return header;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    file << text;
}

void line(std::ostringstream& os, const std::string& key, double value) {
    os << key << ": " << format_number(value) << '\n';
}

// Index of the first t >= 1 from which aggregate capital stays within tol of zero, or -1.
int depletion_period(const Vector& aggregate, double tol) {
    int first = -1;
    for (int t = static_cast<int>(aggregate.size()) - 1; t >= 1; --t) {
        if (std::abs(aggregate(t)) > tol) break;
        first = t;
    }
    return first;
}

}  // namespace

std::string solution_report(const KKTProblem& problem, const SolveReport& report) {
    const int H = problem.households();
    const int T = problem.horizon();
    std::ostringstream os;
    os << "variant: " << to_string(problem.variant()) << '\n';
    os << "households: " << H << '\n';
    os << "horizon: " << T << '\n';
    os << "status: " << to_string(report.status) << '\n';
    os << "message: " << report.message << '\n';
    os << "iterations: " << report.iterations << '\n';
    os << "restarted: " << (report.restarted ? "true" : "false") << '\n';
    os << "degenerate: " << (report.degenerate ? "true" : "false") << '\n';
    line(os, "residual_norm", report.residual_norm);
    if (report.welfare.size() == 0) return os.str();

    line(os, "kkt_stationarity", report.audit.stationarity);
    line(os, "kkt_adjoint", report.audit.adjoint);
    line(os, "kkt_accumulation", report.audit.accumulation);
    line(os, "kkt_feasibility", report.audit.feasibility);
    line(os, "kkt_complementarity", report.audit.complementarity);
    line(os, "kkt_sign", report.audit.sign);
    for (int h = 0; h < H; ++h) line(os, "welfare_h" + std::to_string(h + 1), report.welfare(h));
    line(os, "weighted_welfare", problem.theta().dot(report.welfare));
    const Vector aggregate = report.allocation.aggregate_capital();
    for (int h = 0; h < H; ++h) {
        line(os, "terminal_capital_h" + std::to_string(h + 1), report.allocation.capital(h, T + 1));
    }
    line(os, "terminal_aggregate_capital", aggregate(T + 1));
    os << "aggregate_capital_zero_from: " << depletion_period(aggregate, 1e-8) << '\n';
    return os.str();
}

void write_solution(const fs::path& dir, const KKTProblem& problem, const SolveReport& report) {
    fs::create_directories(dir);
    const int H = problem.households();
    const int T = problem.horizon();

    if (report.welfare.size() != 0) {
        const Matrix& c = report.allocation.consumption;
        const Matrix& a = report.allocation.capital;

        CsvWriter consumption(household_header("t", "c_h", H));
        for (int t = 0; t <= T; ++t) {
            std::vector<Cell> row{static_cast<double>(t)};
            for (int h = 0; h < H; ++h) row.emplace_back(c(h, t));
            consumption.row(row);
        }
        consumption.save(dir / "consumption.csv");

        CsvWriter capital(household_header("t", "a_h", H));
        for (int t = 0; t <= T + 1; ++t) {
            std::vector<Cell> row{static_cast<double>(t)};
            for (int h = 0; h < H; ++h) row.emplace_back(a(h, t));
            capital.row(row);
        }
        capital.save(dir / "capital.csv");

        const Vector agg_a = report.allocation.aggregate_capital();
        const Vector agg_c = report.allocation.aggregate_consumption();
        CsvWriter aggregates({"t", "aggregate_capital", "aggregate_consumption"});
        for (int t = 0; t <= T + 1; ++t) {
            aggregates.row({static_cast<double>(t), agg_a(t), t <= T ? Cell(agg_c(t)) : Cell()});
        }
        aggregates.save(dir / "aggregates.csv");

        const MultiplierSet& m = report.multipliers;
        const bool shared = m.lambda.rows() == 1;
        std::vector<std::string> header{"t", "nu", "lambda"};
        if (!shared) {
            header = household_header("t", "lambda_h", H);
            header.insert(header.begin() + 1, "nu");
        }
        CsvWriter multipliers(header);
        const int last = static_cast<int>(m.lambda.cols()) - 1;
        const int rows = std::max(last, static_cast<int>(m.nu.size()));
        for (int t = 0; t <= rows; ++t) {
            std::vector<Cell> row{static_cast<double>(t)};
            row.push_back(t >= 1 && t <= m.nu.size() ? Cell(m.nu(t - 1)) : Cell());
            for (Eigen::Index k = 0; k < m.lambda.rows(); ++k) {
                row.push_back(t <= last ? Cell(m.lambda(k, t)) : Cell());
            }
            multipliers.row(row);
        }
        multipliers.save(dir / "multipliers.csv");
    }
    write_text(dir / "report.txt", solution_report(problem, report));
}

VerifyComparison compare_with_oracle(const KKTProblem& problem, const SolverConfig& config,
                                     const OracleOptions& oracle_options) {
    VerifyComparison cmp;
    cmp.solver = solve(problem, config);
    cmp.oracle = solve_scalarized(ScalarizedProblem::from(problem), oracle_options);
    const int H = problem.households();
    if (cmp.solver.welfare.size() == H && cmp.oracle.welfare.size() == H) {
        cmp.household_gaps = (cmp.solver.welfare - cmp.oracle.welfare).cwiseAbs();
        cmp.weighted_gap = std::abs(problem.theta().dot(cmp.solver.welfare - cmp.oracle.welfare));
    } else {
        cmp.household_gaps = Vector::Constant(H, HUGE_VAL);
        cmp.weighted_gap = HUGE_VAL;
    }
    if (cmp.oracle.converged) {
        cmp.oracle_audit = kkt_residual_full(problem, cmp.oracle.allocation, cmp.oracle.multipliers);
    }
    return cmp;
}

std::string verify_report(const KKTProblem& problem, const VerifyComparison& cmp) {
    std::ostringstream os;
    os << "variant: " << to_string(problem.variant()) << '\n';
    os << "solver_status: " << to_string(cmp.solver.status) << '\n';
    os << "solver_iterations: " << cmp.solver.iterations << '\n';
    line(os, "solver_residual_norm", cmp.solver.residual_norm);
    line(os, "solver_kkt_audit", cmp.solver.audit.worst());
    os << "oracle_status: " << (cmp.oracle.converged ? "converged" : "failed") << '\n';
    os << "oracle_message: " << cmp.oracle.message << '\n';
    os << "oracle_newton_steps: " << cmp.oracle.newton_steps << '\n';
    line(os, "oracle_kkt_audit", cmp.oracle_audit);
    line(os, "oracle_bound_gap", cmp.oracle.upper_bound - cmp.oracle.objective);
    line(os, "weighted_welfare_gap", cmp.weighted_gap);
    for (Eigen::Index h = 0; h < cmp.household_gaps.size(); ++h) {
        line(os, "welfare_gap_h" + std::to_string(h + 1), cmp.household_gaps(h));
    }
    line(os, "gap_tolerance", kVerifyGapTol);
    os << "result: " << (cmp.weighted_gap <= kVerifyGapTol ? "pass" : "fail") << '\n';
    return os.str();
}

std::string frontier_csv(const FrontierSweep& sweep, int households) {
    std::vector<std::string> header{"section"};
    for (int h = 1; h <= households; ++h) header.push_back("theta_h" + std::to_string(h));
    for (int h = 1; h <= households; ++h) header.push_back("welfare_h" + std::to_string(h));
    header.push_back("converged");
    header.push_back("dominated");
    CsvWriter csv(header);
    auto emit = [&](const char* section, const FrontierPoint& p) {
        std::vector<std::string> row{section};
        for (int h = 0; h < households; ++h) row.push_back(format_number(p.theta(h)));
        for (int h = 0; h < households; ++h) {
            row.push_back(p.welfare.size() == households ? format_number(p.welfare(h)) : std::string());
        }
        row.push_back(p.converged ? "1" : "0");
        row.push_back(p.dominated ? "1" : "0");
        csv.row_text(row);
    };
    for (const auto& p : sweep.all) emit("grid", p);
    for (const auto& p : sweep.frontier) emit("frontier", p);
    return csv.str();
}

namespace {

// Shared by the commands: load, override, and map failures to exit codes.
std::optional<ScenarioConfig> load(const CommandOptions& options, std::ostream& err) {
    try {
        ScenarioConfig config = load_scenario(options.config);
        apply_overrides(config, options);
        config.solver.validate();
        return config;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const DomainError& e) {
        err << "error: invalid option: " << e.what() << '\n';
    }
    return std::nullopt;
}

}  // namespace

int run_solve(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    auto config = load(options, err);
    if (!config) return kExitParse;
    const KKTProblem problem = config->problem();
    const SolveReport report = solve(problem, config->solver);
    write_solution(config->output_directory, problem, report);
    out << solution_report(problem, report);
    if (!report.converged) {
        err << "error: solver did not converge: " << report.message << '\n';
        return kExitNotConverged;
    }
    return kExitOk;
}

int run_verify(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    auto config = load(options, err);
    if (!config) return kExitParse;
    const auto& p = config->params;
    const int size = p.households * p.periods();
    if (size > config->max_oracle_size) {
        err << "error: instance too large for the oracle (H*(T+1) = " << size << " > "
            << config->max_oracle_size << "); raise --max-oracle-size to force\n";
        return kExitParse;
    }
    const KKTProblem problem = config->problem();
    OracleOptions oracle_options;
    oracle_options.tol = config->oracle_tol;
    const VerifyComparison cmp = compare_with_oracle(problem, config->solver, oracle_options);
    const std::string text = verify_report(problem, cmp);
    fs::create_directories(config->output_directory);
    write_text(config->output_directory / "verify.txt", text);
    out << text;
    if (!cmp.oracle.converged) {
        err << "error: oracle did not converge: " << cmp.oracle.message << '\n';
        return kExitNotConverged;
    }
    if (cmp.solver.welfare.size() == 0) {
        err << "error: solver did not converge: " << cmp.solver.message << '\n';
        return kExitNotConverged;
    }
    if (!(cmp.weighted_gap <= kVerifyGapTol)) {
        err << "error: weighted welfare gap " << format_number(cmp.weighted_gap) << " exceeds "
            << format_number(kVerifyGapTol) << '\n';
        return kExitGap;
    }
    return kExitOk;
}

int run_sweep(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    auto config = load(options, err);
    if (!config) return kExitParse;
    const int H = config->params.households;
    if (config->resolution < H) {
        err << "error: resolution " << config->resolution << " is below the household count " << H << '\n';
        return kExitParse;
    }
    const FrontierSweep result = sweep(config->params, config->utilities, config->variant, config->resolution,
                                       config->solver, static_cast<std::size_t>(config->workers));
    fs::create_directories(config->output_directory);
    write_text(config->output_directory / "frontier.csv", frontier_csv(result, H));
    out << "grid_points: " << result.all.size() << '\n';
    out << "frontier_points: " << result.frontier.size() << '\n';
    out << "failed_points: " << result.failed.size() << '\n';
    if (!result.failed.empty()) {
        err << "error: " << result.failed.size() << " grid point(s) did not converge\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

}  // namespace ramsey::cli
