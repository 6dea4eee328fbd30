#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <ramsey/kkt.hpp>
#include <ramsey/solver.hpp>

namespace ramsey::cli {

/// A malformed or invalid scenario document. `key_path` is empty for syntax errors;
/// `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, std::string key_path, int line);

    const std::string& key_path() const noexcept { return key_path_; }
    int line() const noexcept { return line_; }

private:
    std::string key_path_;
    int line_;
};

struct ScenarioConfig {
    EconomyParams params;
    std::vector<Utility> utilities;
    Variant variant = Variant::Default;
    Vector theta;  // as given; normalized by KKTProblem
    SolverConfig solver;
    int max_oracle_size = 200;  // H * (T+1) guard for verify
    double oracle_tol = 1e-8;
    int resolution = 10;
    int workers = 1;
    std::filesystem::path output_directory = "out";

    KKTProblem problem() const { return KKTProblem(params, utilities, theta, variant); }
};

Variant parse_variant(std::string_view text);
std::string to_string(Variant variant);

/// Line of every key path in a JSON document ("economy.beta[2]" -> 7).
std::map<std::string, int> index_key_lines(std::string_view json_text);

ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace ramsey::cli
