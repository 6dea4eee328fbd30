#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <ramsey/cli/commands.hpp>
#include <ramsey/cli/csv.hpp>
#include <ramsey/cli/scenario.hpp>

#include "fixtures.hpp"

using namespace ramsey;
using namespace ramsey::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = RAMSEY_SCENARIO_DIR;

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "ramsey_cli_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kMinimal = R"({
  "economy": {
    "horizon": 2,
    "r": 0.03,
    "omega": [1, 1.1, 1],
    "labor": 1,
    "tau": 1,
    "delta": 0.01,
    "beta": [0.9, 0.95],
    "a0": [1, 2]
  },
  "utilities": "log"
})";

std::string with(const std::string& from, const std::string& to) {
    std::string text = kMinimal;
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

CommandOptions options_for(const std::string& scenario, const fs::path& out) {
    CommandOptions o;
    o.config = kScenarios / scenario;
    o.out = out;
    return o;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("scenario parsing with broadcast") {
    const ScenarioConfig c = parse_scenario(kMinimal);
    CHECK(c.params.households == 2);
    CHECK(c.params.r == std::vector<double>{0.03, 0.03, 0.03});
    CHECK(c.params.omega == std::vector<double>{1, 1.1, 1});
    CHECK(c.params.labor == std::vector<double>{1, 1});
    CHECK(c.variant == Variant::Default);
    CHECK(c.theta == Vector::Constant(2, 0.5));
    CHECK(c.utilities.size() == 2);
    CHECK(c.solver.residual_tol == 1e-10);

    const ScenarioConfig four = load_scenario(kScenarios / "four_household.json");
    CHECK(four.params.households == 4);
    CHECK(four.params.horizon == 100);
    CHECK(four.params.beta == std::vector<double>{0.9, 0.93, 0.95, 0.98});
    CHECK(four.params.a0 == std::vector<double>{30, 20, 10, 10});
}

TEST_CASE("scenario overrides") {
    const ScenarioConfig c = parse_scenario(with(R"("utilities": "log")",
        R"("utilities": ["log", {"kind": "isoelastic", "sigma": 2}],
  "variant": "nodefault",
  "theta": [1, 3],
  "solver": {"residual_tol": 1e-11, "jacobian": "finite-difference", "ncp": "min", "seed": 7})"));
    CHECK(c.variant == Variant::NoDefault);
    CHECK(c.utilities[1] == Utility::isoelastic(2.0));
    CHECK(c.theta(1) == 3.0);
    CHECK(c.solver.residual_tol == 1e-11);
    CHECK(c.solver.jacobian == JacobianMode::FiniteDifference);
    CHECK(c.solver.ncp == NcpFunction::Min);
    CHECK(c.solver.seed == 7);
}

TEST_CASE("parse errors carry key path and line") {
    try {
        parse_scenario(with(R"("beta": [0.9, 0.95])", R"("beta": [0.9, 1.5])"));
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.key_path() == "economy");
    }
    try {
        parse_scenario(with(R"("r": 0.03)", R"("r": [0.03, 0.03])"));
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.key_path() == "economy.r");
        CHECK(e.line() == 4);
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    try {
        parse_scenario(with(R"("a0": [1, 2])", R"("a0": [1, "x"])"));
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.key_path() == "economy.a0[1]");
        CHECK(e.line() == 10);
    }
    try {
        parse_scenario(with(R"("utilities": "log")", R"("utilities": "log", "theta": [1, 0])"));
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.key_path() == "theta[1]");
        CHECK(e.line() == 12);
    }
    try {
        parse_scenario(with(R"("tau": 1,)", R"("tau": 1,,)"));
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.key_path().empty());
        CHECK(e.line() == 7);
    }
    CHECK_THROWS_AS(parse_scenario(with(R"("horizon": 2,)", "")), ConfigError);
    CHECK_THROWS_AS(parse_scenario(with(R"("utilities": "log")", R"("utilities": "cobb")")), ConfigError);
    CHECK_THROWS_AS(parse_scenario(with(R"("utilities": "log")", R"("utilities": "log", "variant": "x")")), ConfigError);
}

TEST_CASE("key line index") {
    const auto lines = index_key_lines(kMinimal);
    CHECK(lines.at("economy") == 2);
    CHECK(lines.at("economy.omega[1]") == 5);
    CHECK(lines.at("utilities") == 12);
}

TEST_CASE("number formatting round trips") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = unit(rng) * std::pow(10.0, 40.0 * unit(rng));
        const std::string s = format_number(x);
        CHECK(parse_number(s) == x);
        CHECK(s.size() <= 24);  // never longer than "-d.dddddddddddddddde-ddd"
    }
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(6.1) == "6.1");
    CHECK_THROWS_AS(parse_number("1.5x"), std::invalid_argument);
}

TEST_CASE("written trajectories parse back bitwise") {
    const auto p = fixtures::four_household();
    const KKTProblem prob = fixtures::problem(p, Variant::Default);
    const SolveReport r = solve(prob);
    const fs::path dir = scratch("roundtrip");
    write_solution(dir, prob, r);

    const CsvTable c = read_csv(dir / "consumption.csv");
    REQUIRE(c.rows.size() == 101);
    REQUIRE(c.header.size() == 5);
    for (int t = 0; t <= 100; ++t) {
        for (int h = 0; h < 4; ++h) CHECK(*c.number(t, h + 1) == r.allocation.consumption(h, t));
    }
    const CsvTable a = read_csv(dir / "capital.csv");
    REQUIRE(a.rows.size() == 102);
    for (int t = 0; t <= 101; ++t) {
        for (int h = 0; h < 4; ++h) CHECK(*a.number(t, h + 1) == r.allocation.capital(h, t));
    }
    const CsvTable g = read_csv(dir / "aggregates.csv");
    CHECK(g.header == std::vector<std::string>{"t", "aggregate_capital", "aggregate_consumption"});
    CHECK_FALSE(g.number(101, 2).has_value());
    const CsvTable m = read_csv(dir / "multipliers.csv");
    CHECK(m.header == std::vector<std::string>{"t", "nu", "lambda"});
    CHECK(*m.number(101, 1) == r.multipliers.nu(100));
    CHECK(fs::exists(dir / "report.txt"));
}

TEST_CASE("solve command on the four-household scenario") {
    const fs::path dir = scratch("solve");
    std::ostringstream out, err;
    REQUIRE(run_solve(options_for("four_household.json", dir), out, err) == kExitOk);
    const CsvTable g = read_csv(dir / "aggregates.csv");
    CHECK(std::abs(*g.number(101, 1)) <= 1e-8);

    CommandOptions nd = options_for("four_household.json", scratch("solve_nd"));
    nd.variant = Variant::NoDefault;
    REQUIRE(run_solve(nd, out, err) == kExitOk);
    const CsvTable a = read_csv(*nd.out / "capital.csv");
    for (int h = 1; h <= 4; ++h) CHECK(std::abs(*a.number(101, h)) <= 1e-8);
    const CsvTable m = read_csv(*nd.out / "multipliers.csv");
    CHECK(m.header.size() == 6);
}

TEST_CASE("identical runs produce identical files") {
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    std::ostringstream out, err;
    REQUIRE(run_solve(options_for("two_household.json", a), out, err) == kExitOk);
    REQUIRE(run_solve(options_for("two_household.json", b), out, err) == kExitOk);
    for (const char* f : {"consumption.csv", "capital.csv", "aggregates.csv", "multipliers.csv", "report.txt"}) {
        CHECK(slurp(a / f) == slurp(b / f));
    }
    REQUIRE(run_sweep(options_for("symmetric_pair.json", a), out, err) == kExitOk);
    REQUIRE(run_sweep(options_for("symmetric_pair.json", b), out, err) == kExitOk);
    CHECK(slurp(a / "frontier.csv") == slurp(b / "frontier.csv"));
}

TEST_CASE("exit codes") {
    std::ostringstream out, err;
    const fs::path dir = scratch("exit");
    const fs::path bad = dir / "bad.json";
    std::ofstream(bad) << "{ \"economy\": { \"horizon\": 1 }\n";
    CommandOptions o;
    o.config = bad;
    o.out = dir;
    CHECK(run_solve(o, out, err) == kExitParse);
    CHECK(err.str().find("line") != std::string::npos);

    CommandOptions limited = options_for("four_household.json", dir);
    limited.tol = 1e-30;
    CHECK(run_solve(limited, out, err) == kExitNotConverged);

    CommandOptions badtol = options_for("four_household.json", dir);
    badtol.tol = -1.0;
    CHECK(run_solve(badtol, out, err) == kExitParse);
}

TEST_CASE("verify command") {
    std::ostringstream out, err;
    REQUIRE(run_verify(options_for("two_household.json", scratch("v1")), out, err) == kExitOk);

    std::ostringstream cf;
    REQUIRE(run_verify(options_for("closed_form.json", scratch("v2")), cf, err) == kExitOk);
    const ScenarioConfig closed = load_scenario(kScenarios / "closed_form.json");
    OracleOptions oo;
    oo.tol = closed.oracle_tol;
    const VerifyComparison cmp = compare_with_oracle(closed.problem(), closed.solver, oo);
    CHECK(cmp.weighted_gap <= 1e-12);

    CommandOptions corrupted = options_for("two_household.json", scratch("v3"));
    corrupted.tol = 1e-2;
    std::ostringstream cerr_;
    CHECK(run_verify(corrupted, out, cerr_) == kExitGap);
    CHECK(cerr_.str().find("gap") != std::string::npos);

    std::ostringstream big;
    CHECK(run_verify(options_for("four_household.json", scratch("v4")), out, big) == kExitParse);
    CHECK(big.str().find("max-oracle-size") != std::string::npos);
}

TEST_CASE("sweep command") {
    std::ostringstream out, err;
    const fs::path dir = scratch("sweep");
    CommandOptions o = options_for("symmetric_pair.json", dir);
    REQUIRE(run_sweep(o, out, err) == kExitOk);
    const CsvTable f = read_csv(dir / "frontier.csv");
    CHECK(f.header.front() == "section");
    int grid = 0;
    for (const auto& row : f.rows) grid += row[0] == "grid";
    CHECK(grid == 7);

    CommandOptions single = options_for("closed_form.json", scratch("sweep1"));
    REQUIRE(run_sweep(single, out, err) == kExitOk);
    const CsvTable s = read_csv(*single.out / "frontier.csv");
    int frontier = 0;
    for (const auto& row : s.rows) frontier += row[0] == "frontier";
    CHECK(frontier == 1);

    CommandOptions four = options_for("four_household.json", scratch("sweep6"));
    four.resolution = 5;
    REQUIRE(run_sweep(four, out, err) == kExitOk);
    const CsvTable w = read_csv(*four.out / "frontier.csv");
    int kept = 0;
    for (const auto& row : w.rows) kept += row[0] == "frontier";
    CHECK(kept == 4);

    CommandOptions low = options_for("four_household.json", scratch("sweep_low"));
    low.resolution = 3;
    CHECK(run_sweep(low, out, err) == kExitParse);
}

TEST_CASE("executable exit codes") {
    const std::string exe = RAMSEY_CLI_PATH;
    const fs::path dir = scratch("exe");
    auto run = [&](const std::string& args) {
        const std::string cmd = exe + " " + args + " > " + (dir / "log.txt").string() + " 2>&1";
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };
    const std::string cfg = (kScenarios / "two_household.json").string();
    CHECK(run("solve --config " + cfg + " --out " + (dir / "a").string()) == 0);
    CHECK(fs::exists(dir / "a" / "consumption.csv"));
    CHECK(run("verify --config " + cfg + " --out " + (dir / "b").string() + " --tol 1e-2") == 4);
    CHECK(run("solve --config " + cfg + " --variant sideways") == 2);
    CHECK(run("solve") == 2);
}

}  // TEST_SUITE
