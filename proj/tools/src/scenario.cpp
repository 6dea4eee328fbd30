#include "ramsey/cli/scenario.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <ramsey/error.hpp>

namespace ramsey::cli {

using nlohmann::json;

ConfigError::ConfigError(const std::string& message, std::string key_path, int line)
    : std::runtime_error([&] {
          std::string where = key_path.empty() ? std::string("config") : "config key '" + key_path + "'";
          if (line > 0) where += " (line " + std::to_string(line) + ")";
          return where + ": " + message;
      }()),
      key_path_(std::move(key_path)),
      line_(line) {}

Variant parse_variant(std::string_view text) {
    if (text == "default") return Variant::Default;
    if (text == "nodefault" || text == "no-default") return Variant::NoDefault;
    throw std::invalid_argument("unknown variant '" + std::string(text) + "' (expected default|nodefault)");
}

std::string to_string(Variant variant) {
    return variant == Variant::Default ? "default" : "nodefault";
}

namespace {

// Walks a syntactically valid JSON text and records the line at which each value starts.
class LineIndexer {
public:
    explicit LineIndexer(std::string_view text) : text_(text) {}

    std::map<std::string, int> run() {
        value("");
        return std::move(lines_);
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    std::string string_token() {
        std::string out;
        ++pos_;  // opening quote
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\') {
                out += text_[pos_++];
            }
            if (pos_ < text_.size()) out += text_[pos_++];
        }
        ++pos_;  // closing quote
        return out;
    }

    void value(const std::string& path) {
        skip_ws();
        if (pos_ >= text_.size()) return;
        if (!path.empty()) lines_.emplace(path, line_);
        const char c = text_[pos_];
        if (c == '{') {
            ++pos_;
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '}') {
                ++pos_;
                return;
            }
            while (pos_ < text_.size()) {
                skip_ws();
                const int key_line = line_;
                const std::string key = string_token();
                const std::string child = path.empty() ? key : path + "." + key;
                skip_ws();
                ++pos_;  // ':'
                value(child);
                lines_[child] = key_line;
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                ++pos_;  // '}'
                return;
            }
        } else if (c == '[') {
            ++pos_;
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == ']') {
                ++pos_;
                return;
            }
            for (int i = 0; pos_ < text_.size(); ++i) {
                value(path + "[" + std::to_string(i) + "]");
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                ++pos_;  // ']'
                return;
            }
        } else if (c == '"') {
            string_token();
        } else {
            while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '}' &&
                   text_[pos_] != ']' && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::map<std::string, int> lines_;
};

class Reader {
public:
    Reader(const json& root, std::map<std::string, int> lines) : root_(root), lines_(std::move(lines)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& message) const {
        auto it = lines_.find(path);
        throw ConfigError(message, path, it == lines_.end() ? 0 : it->second);
    }

    const json* find(const std::string& path) const {
        const json* node = &root_;
        std::size_t start = 0;
        while (start < path.size()) {
            std::size_t end = path.find('.', start);
            if (end == std::string::npos) end = path.size();
            const std::string key = path.substr(start, end - start);
            if (!node->is_object() || !node->contains(key)) return nullptr;
            node = &(*node)[key];
            start = end + 1;
        }
        return node;
    }

    const json& require(const std::string& path) const {
        const json* node = find(path);
        if (!node) {
            const auto dot = path.rfind('.');
            fail(dot == std::string::npos ? std::string() : path.substr(0, dot), "missing required key '" + path + "'");
        }
        return *node;
    }

    double number(const std::string& path, const json& node) const {
        if (!node.is_number()) fail(path, "expected a number");
        return node.get<double>();
    }

    int integer(const std::string& path, const json& node) const {
        if (!node.is_number_integer()) fail(path, "expected an integer");
        return node.get<int>();
    }

    std::string text(const std::string& path, const json& node) const {
        if (!node.is_string()) fail(path, "expected a string");
        return node.get<std::string>();
    }

    // A scalar broadcasts to `length` entries; an array must have exactly `length`.
    std::vector<double> sequence(const std::string& path, std::size_t length, bool allow_scalar) const {
        const json& node = require(path);
        if (node.is_number()) {
            if (!allow_scalar) fail(path, "expected an array of " + std::to_string(length) + " numbers");
            return std::vector<double>(length, node.get<double>());
        }
        if (!node.is_array()) fail(path, "expected a number or an array");
        if (node.size() != length) {
            fail(path, "expected " + std::to_string(length) + " entries, found " + std::to_string(node.size()));
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < node.size(); ++i) {
            out.push_back(number(path + "[" + std::to_string(i) + "]", node[i]));
        }
        return out;
    }

    Utility utility(const std::string& path, const json& node) const {
        if (node.is_string()) {
            const std::string kind = node.get<std::string>();
            if (kind == "log" || kind == "logarithmic") return Utility::logarithmic();
            fail(path, "unknown utility '" + kind + "' (use \"log\" or an isoelastic object)");
        }
        if (!node.is_object() || !node.contains("kind")) fail(path, "expected a utility string or object with 'kind'");
        const std::string kind = text(path + ".kind", node["kind"]);
        if (kind == "log" || kind == "logarithmic") return Utility::logarithmic();
        if (kind == "isoelastic" || kind == "crra") {
            if (!node.contains("sigma")) fail(path, "isoelastic utility needs 'sigma'");
            try {
                return Utility::isoelastic(number(path + ".sigma", node["sigma"]));
            } catch (const DomainError& e) {
                fail(path + ".sigma", e.what());
            }
        }
        fail(path + ".kind", "unknown utility kind '" + kind + "'");
    }

private:
    const json& root_;
    std::map<std::string, int> lines_;
};

int line_of_offset(std::string_view text, std::size_t offset) {
    int line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

}  // namespace

std::map<std::string, int> index_key_lines(std::string_view json_text) {
    return LineIndexer(json_text).run();
}

ScenarioConfig parse_scenario(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what(), "", line_of_offset(json_text, e.byte));
    }
    if (!root.is_object()) throw ConfigError("top level must be an object", "", 1);
    const Reader in(root, index_key_lines(json_text));

    ScenarioConfig cfg;
    EconomyParams& p = cfg.params;

    const json& beta = in.require("economy.beta");
    if (!beta.is_array() || beta.empty()) in.fail("economy.beta", "expected a nonempty array");
    p.households = static_cast<int>(beta.size());
    if (const json* h = in.find("economy.households")) {
        if (in.integer("economy.households", *h) != p.households) {
            in.fail("economy.households", "does not match the length of economy.beta");
        }
    }
    p.horizon = in.integer("economy.horizon", in.require("economy.horizon"));
    if (p.horizon < 0) in.fail("economy.horizon", "must be nonnegative");
    const auto H = static_cast<std::size_t>(p.households);
    const auto n = static_cast<std::size_t>(p.horizon + 1);
    p.beta = in.sequence("economy.beta", H, false);
    p.a0 = in.sequence("economy.a0", H, false);
    p.labor = in.sequence("economy.labor", H, true);
    p.r = in.sequence("economy.r", n, true);
    p.omega = in.sequence("economy.omega", n, true);
    p.tau = in.number("economy.tau", in.require("economy.tau"));
    p.delta = in.number("economy.delta", in.require("economy.delta"));
    try {
        p.validate();
    } catch (const DomainError& e) {
        in.fail("economy", e.what());
    }

    const json& u = in.require("utilities");
    if (u.is_array()) {
        if (u.size() != H) in.fail("utilities", "expected one utility per household");
        for (std::size_t h = 0; h < H; ++h) {
            cfg.utilities.push_back(in.utility("utilities[" + std::to_string(h) + "]", u[h]));
        }
    } else {
        cfg.utilities.assign(H, in.utility("utilities", u));
    }

    if (const json* v = in.find("variant")) {
        try {
            cfg.variant = parse_variant(in.text("variant", *v));
        } catch (const std::invalid_argument& e) {
            in.fail("variant", e.what());
        }
    }

    cfg.theta = Vector::Constant(p.households, 1.0 / p.households);
    if (const json* th = in.find("theta")) {
        if (th->is_string()) {
            if (th->get<std::string>() != "equal") in.fail("theta", "expected \"equal\" or an array");
        } else {
            const auto values = in.sequence("theta", H, false);
            for (std::size_t h = 0; h < H; ++h) {
                if (!(values[h] > 0.0)) in.fail("theta[" + std::to_string(h) + "]", "weights must be strictly positive");
                cfg.theta(static_cast<Eigen::Index>(h)) = values[h];
            }
        }
    }

    SolverConfig& s = cfg.solver;
    auto opt_number = [&](const std::string& path, double& slot) {
        if (const json* node = in.find(path)) slot = in.number(path, *node);
    };
    auto opt_integer = [&](const std::string& path, int& slot) {
        if (const json* node = in.find(path)) slot = in.integer(path, *node);
    };
    opt_number("solver.residual_tol", s.residual_tol);
    opt_integer("solver.max_iterations", s.max_iterations);
    opt_number("solver.fd_step", s.fd_step);
    opt_number("solver.backtrack", s.backtrack);
    opt_number("solver.min_step", s.min_step);
    opt_number("solver.complementarity_tol", s.complementarity_tol);
    opt_number("solver.feasibility_tol", s.feasibility_tol);
    if (const json* node = in.find("solver.seed")) {
        if (!node->is_number_unsigned()) in.fail("solver.seed", "expected a nonnegative integer");
        s.seed = node->get<std::uint64_t>();
    }
    if (const json* node = in.find("solver.jacobian")) {
        const std::string mode = in.text("solver.jacobian", *node);
        if (mode == "analytic") {
            s.jacobian = JacobianMode::Analytic;
        } else if (mode == "finite-difference") {
            s.jacobian = JacobianMode::FiniteDifference;
        } else {
            in.fail("solver.jacobian", "expected \"analytic\" or \"finite-difference\"");
        }
    }
    if (const json* node = in.find("solver.ncp")) {
        const std::string f = in.text("solver.ncp", *node);
        if (f == "fischer-burmeister") {
            s.ncp = NcpFunction::FischerBurmeister;
        } else if (f == "min") {
            s.ncp = NcpFunction::Min;
        } else {
            in.fail("solver.ncp", "expected \"fischer-burmeister\" or \"min\"");
        }
    }
    try {
        s.validate();
    } catch (const DomainError& e) {
        in.fail("solver", e.what());
    }

    opt_integer("verify.max_oracle_size", cfg.max_oracle_size);
    opt_number("verify.oracle_tol", cfg.oracle_tol);
    opt_integer("sweep.resolution", cfg.resolution);
    opt_integer("sweep.workers", cfg.workers);
    if (cfg.resolution < 1) in.fail("sweep.resolution", "must be at least 1");
    if (cfg.workers < 1) in.fail("sweep.workers", "must be at least 1");
    if (const json* node = in.find("output.directory")) {
        cfg.output_directory = in.text("output.directory", *node);
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open " + path.string(), "", 0);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_scenario(buffer.str());
}

}  // namespace ramsey::cli
