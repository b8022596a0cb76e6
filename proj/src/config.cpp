#include "sndc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <variant>

#include <fmt/format.h>

#include "sndc/error.hpp"
#include "sndc/fem.hpp"

namespace sndc {

namespace {

using Value = std::variant<double, std::string, bool, std::vector<double>>;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& text, int line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(fmt::format("line {}: '{}' is not a number", line, text));
    }
    return value;
}

Value parse_value(const std::string& text, int line) {
    if (text.empty()) throw ConfigError(fmt::format("line {}: missing value", line));
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"') throw ConfigError(fmt::format("line {}: unterminated string", line));
        return text.substr(1, text.size() - 2);
    }
    if (text == "true") return true;
    if (text == "false") return false;
    if (text.front() == '[') {
        if (text.back() != ']') throw ConfigError(fmt::format("line {}: unterminated array", line));
        std::vector<double> items;
        std::string body = text.substr(1, text.size() - 2);
        std::size_t start = 0;
        while (start <= body.size()) {
            const std::size_t comma = body.find(',', start);
            const std::string item = trim(body.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (!item.empty()) {
                items.push_back(parse_number(item, line));
            } else if (comma != std::string::npos) {
                throw ConfigError(fmt::format("line {}: empty array element", line));
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return items;
    }
    return parse_number(text, line);
}

int as_int(const Value& v, const std::string& key, int line) {
    const double* d = std::get_if<double>(&v);
    if (d == nullptr || *d != static_cast<double>(static_cast<int>(*d))) {
        throw ConfigError(fmt::format("line {}: '{}' must be an integer", line, key));
    }
    return static_cast<int>(*d);
}

double as_double(const Value& v, const std::string& key, int line) {
    const double* d = std::get_if<double>(&v);
    if (d == nullptr) throw ConfigError(fmt::format("line {}: '{}' must be a number", line, key));
    return *d;
}

std::string as_string(const Value& v, const std::string& key, int line) {
    const std::string* s = std::get_if<std::string>(&v);
    if (s == nullptr) throw ConfigError(fmt::format("line {}: '{}' must be a quoted string", line, key));
    return *s;
}

std::vector<int> as_int_list(const Value& v, const std::string& key, int line) {
    const auto* items = std::get_if<std::vector<double>>(&v);
    if (items == nullptr) throw ConfigError(fmt::format("line {}: '{}' must be an array", line, key));
    std::vector<int> out;
    for (double d : *items) {
        if (d != static_cast<double>(static_cast<int>(d))) {
            throw ConfigError(fmt::format("line {}: '{}' must contain integers", line, key));
        }
        out.push_back(static_cast<int>(d));
    }
    return out;
}

void apply(ExperimentConfig& c, const std::string& key, const Value& v, int line) {
    if (key == "problem") {
        c.problem = as_string(v, key, line);
    } else if (key == "distribution") {
        try {
            c.distribution = distribution_from_string(as_string(v, key, line));
        } catch (const InvalidArgument& e) {
            throw ConfigError(fmt::format("line {}: {}", line, e.what()));
        }
    } else if (key == "domain") {
        const auto* items = std::get_if<std::vector<double>>(&v);
        if (items == nullptr || items->size() != 4) {
            throw ConfigError(fmt::format("line {}: 'domain' must be [x0, x1, y0, y1]", line));
        }
        c.domain = {(*items)[0], (*items)[1], (*items)[2], (*items)[3]};
    } else if (key == "n") {
        c.n = as_int(v, key, line);
    } else if (key == "levels") {
        c.levels = as_int_list(v, key, line);
    } else if (key == "k") {
        c.k = as_int(v, key, line);
    } else if (key == "p") {
        c.p = as_int_list(v, key, line);
    } else if (key == "p_sweep") {
        c.p_sweep = as_int_list(v, key, line);
    } else if (key == "ref_n") {
        c.ref_n = as_int(v, key, line);
    } else if (key == "ref_k") {
        c.ref_k = as_int(v, key, line);
    } else if (key == "ref_p") {
        c.ref_p = as_int_list(v, key, line);
    } else if (key == "solver") {
        const std::string s = as_string(v, key, line);
        if (s == "cholesky") {
            c.solver = LinearSolver::Cholesky;
        } else if (s == "cg") {
            c.solver = LinearSolver::ConjugateGradient;
        } else {
            throw ConfigError(fmt::format("line {}: solver must be \"cholesky\" or \"cg\"", line));
        }
    } else if (key == "cg_tolerance") {
        c.cg_tolerance = as_double(v, key, line);
    } else if (key == "volume_quad_degree") {
        c.volume_quad_degree = as_int(v, key, line);
    } else if (key == "edge_quad_degree") {
        c.edge_quad_degree = as_int(v, key, line);
    } else if (key == "check_x_per_axis") {
        c.check_x_per_axis = as_int(v, key, line);
    } else if (key == "check_y_gauss_points") {
        c.check_y_gauss_points = as_int(v, key, line);
    } else if (key == "out") {
        c.out = as_string(v, key, line);
    } else if (key == "threads") {
        c.threads = as_int(v, key, line);
    } else {
        throw ConfigError(fmt::format("line {}: unknown key '{}'", line, key));
    }
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig config;
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        // strip comments outside strings
        bool in_string = false;
        std::size_t cut = raw.size();
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == '"') in_string = !in_string;
            if (raw[i] == '#' && !in_string) {
                cut = i;
                break;
            }
        }
        const std::string text = trim(std::string_view(raw).substr(0, cut));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected 'key = value'", line));
        const std::string key = trim(std::string_view(text).substr(0, eq));
        if (key.empty()) throw ConfigError(fmt::format("line {}: missing key", line));
        apply(config, key, parse_value(trim(std::string_view(text).substr(eq + 1)), line), line);
    }
    validate(config);
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path.string());
    return parse_config(is);
}

void validate(const ExperimentConfig& c) {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    ParametricProblem problem;
    try {
        problem = c.make_problem();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    const auto dims = static_cast<std::size_t>(problem.num_dimensions());
    require(c.domain.x1 > c.domain.x0 && c.domain.y1 > c.domain.y0, "domain must be a non-degenerate rectangle");
    require(c.domain == Rectangle{} || problem.name.rfind("section6", 0) != 0,
            "the section6 problems are defined on (-1, 1)^2");
    require(c.n >= 1 && c.ref_n >= 1, "mesh subdivisions must be positive");
    require(!c.levels.empty() && std::all_of(c.levels.begin(), c.levels.end(), [](int n) { return n >= 1; }),
            "levels must be positive subdivision counts");
    require(c.k >= kMinDegree && c.k <= kMaxDegree && c.ref_k >= kMinDegree && c.ref_k <= kMaxDegree,
            fmt::format("polynomial degrees must lie in [{}, {}]", kMinDegree, kMaxDegree));
    auto valid_p = [&](const std::vector<int>& p) {
        return p.size() == dims &&
               std::all_of(p.begin(), p.end(), [](int v) { return v >= 0 && v < kMaxGaussPoints; });
    };
    require(valid_p(c.p), fmt::format("p must list {} degrees in [0, {}]", dims, kMaxGaussPoints - 1));
    require(valid_p(c.ref_p), fmt::format("ref_p must list {} degrees in [0, {}]", dims, kMaxGaussPoints - 1));
    require(std::all_of(c.p_sweep.begin(), c.p_sweep.end(), [](int v) { return v >= 0 && v < kMaxGaussPoints; }),
            "p_sweep entries must be valid degrees");
    require(c.cg_tolerance > 0.0, "cg_tolerance must be positive");
    require(c.volume_quad_degree >= 0 && c.edge_quad_degree >= 0, "quadrature degrees must be non-negative");
    require(c.check_x_per_axis >= 2 && c.check_y_gauss_points >= 1, "assumption-check sample counts too small");
    require(c.threads >= 0, "threads must be non-negative");
}

}  // namespace sndc
