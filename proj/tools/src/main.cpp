#include <iostream>

#include <CLI11.hpp>

#include "ramsey/cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace ramsey::cli;

    CLI::App app{"Finite-horizon multi-household Ramsey model solver"};
    app.require_subcommand(1);

    CommandOptions options;
    std::string variant;
    std::string out;

    auto common = [&](CLI::App* cmd) {
        cmd->add_option("--config", options.config, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
        cmd->add_option("--variant", variant, "default or nodefault")
            ->check(CLI::IsMember({"default", "nodefault", "no-default"}));
        cmd->add_option("--out", out, "Output directory");
        cmd->add_option("--tol", options.tol, "Solver residual tolerance");
        cmd->add_option("--seed", options.seed, "Seed for the restart perturbation");
    };

    auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario and write trajectories");
    common(solve_cmd);
    auto* verify_cmd = app.add_subcommand("verify", "Compare the solver against the barrier oracle");
    common(verify_cmd);
    verify_cmd->add_option("--max-oracle-size", options.max_oracle_size, "Largest H*(T+1) the oracle accepts");
    auto* sweep_cmd = app.add_subcommand("sweep", "Trace the welfare frontier over a weight grid");
    common(sweep_cmd);
    sweep_cmd->add_option("--resolution", options.resolution, "Grid resolution")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }
    if (!variant.empty()) options.variant = parse_variant(variant);
    if (!out.empty()) options.out = out;

    try {
        if (*solve_cmd) return run_solve(options, std::cout, std::cerr);
        if (*verify_cmd) return run_verify(options, std::cout, std::cerr);
        return run_sweep(options, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
