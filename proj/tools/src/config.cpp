#include "membranes_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace membranes::cli {

namespace {

std::string trim(std::string_view s) {
    const char* ws = " \t\r";
    std::size_t b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Entry {
    std::string value;
    std::size_t line;
    std::string key;

    [[noreturn]] void fail(const std::string& message) const {
        throw ConfigError("line " + std::to_string(line) + ", key '" + key + "': " + message, line, key);
    }

    double number() const {
        double out = 0.0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc() || ptr != value.data() + value.size()) fail("expected a number, got '" + value + "'");
        return out;
    }

    std::size_t count() const {
        std::size_t out = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc() || ptr != value.data() + value.size()) {
            fail("expected a non-negative integer, got '" + value + "'");
        }
        return out;
    }

    Expression expression() const {
        try {
            return Expression::parse(value);
        } catch (const ParseError& e) {
            fail(std::string("bad expression: ") + e.what());
        }
    }

    std::vector<std::size_t> count_list() const {
        std::vector<std::size_t> out;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            Entry part{trim(item), line, key};
            out.push_back(part.count());
        }
        if (out.empty()) fail("expected a comma separated list");
        return out;
    }
};

using Handler = std::function<void(ExperimentConfig&, const Entry&)>;
using SectionTable = std::map<std::string, Handler, std::less<>>;

void set_operator(OperatorTemplate& op, const std::string& key, const Entry& e) {
    if (key == "kind") {
        std::string v = lower(e.value);
        if (v == "variational") {
            op.kind = OperatorTemplate::Kind::Variational;
        } else if (v == "normalized") {
            op.kind = OperatorTemplate::Kind::Normalized;
        } else {
            e.fail("kind must be variational or normalized");
        }
    } else if (key == "p") {
        op.p = e.number();
    } else if (key == "alpha") {
        op.alpha = e.number();
    } else if (key == "beta") {
        op.beta = e.number();
    } else {
        op.source = e.expression();
    }
}

SectionTable operator_section(OperatorTemplate ExperimentConfig::*member) {
    SectionTable table;
    for (const char* key : {"kind", "p", "alpha", "beta", "source"}) {
        table[key] = [member, k = std::string(key)](ExperimentConfig& c, const Entry& e) {
            set_operator(c.*member, k, e);
        };
    }
    return table;
}

const std::map<std::string, SectionTable, std::less<>>& sections() {
    static const std::map<std::string, SectionTable, std::less<>> table = [] {
        std::map<std::string, SectionTable, std::less<>> t;
        t["grid"] = {
            {"dim", [](ExperimentConfig& c, const Entry& e) {
                 std::size_t d = e.count();
                 if (d != 1 && d != 2) e.fail("dim must be 1 or 2");
                 c.dim = static_cast<int>(d);
             }},
            {"n", [](ExperimentConfig& c, const Entry& e) { c.n = e.count(); }},
        };
        t["op1"] = operator_section(&ExperimentConfig::op1);
        t["op2"] = operator_section(&ExperimentConfig::op2);
        t["boundary"] = {
            {"f", [](ExperimentConfig& c, const Entry& e) { c.f = e.expression(); }},
            {"g", [](ExperimentConfig& c, const Entry& e) { c.g = e.expression(); }},
        };
        t["obstacle"] = {
            {"expr", [](ExperimentConfig& c, const Entry& e) {
                 if (lower(e.value) == "none") {
                     c.obstacle.reset();
                 } else {
                     c.obstacle = e.expression();
                 }
             }},
            {"side", [](ExperimentConfig& c, const Entry& e) {
                 std::string v = lower(e.value);
                 if (v == "below") {
                     c.side = Side::Below;
                 } else if (v == "above") {
                     c.side = Side::Above;
                 } else {
                     e.fail("side must be below or above");
                 }
             }},
        };
        t["seed"] = {
            {"expr", [](ExperimentConfig& c, const Entry& e) { c.seed = e.expression(); }},
            {"mode", [](ExperimentConfig& c, const Entry& e) {
                 std::string v = lower(e.value);
                 if (v == "increasing") {
                     c.mode = IterationMode::IncreasingFromSub;
                 } else if (v == "decreasing") {
                     c.mode = IterationMode::DecreasingFromSuper;
                 } else {
                     e.fail("mode must be increasing or decreasing");
                 }
             }},
        };
        t["solver"] = {
            {"method", [](ExperimentConfig& c, const Entry& e) {
                 std::string v = lower(e.value);
                 if (v == "auto") {
                     c.solver.method.reset();
                 } else if (v == "psor") {
                     c.solver.method = VariationalMethod::PSOR;
                 } else if (v == "projected_gradient" || v == "pg") {
                     c.solver.method = VariationalMethod::ProjectedGradient;
                 } else {
                     e.fail("method must be auto, psor or projected_gradient");
                 }
             }},
            {"tol", [](ExperimentConfig& c, const Entry& e) { c.solver.tol = e.number(); }},
            {"max_iter", [](ExperimentConfig& c, const Entry& e) { c.solver.max_iter = e.count(); }},
            {"omega", [](ExperimentConfig& c, const Entry& e) { c.solver.omega = e.number(); }},
            {"damping", [](ExperimentConfig& c, const Entry& e) { c.solver.damping = e.number(); }},
            {"outer_tol", [](ExperimentConfig& c, const Entry& e) { c.solver.outer_tol = e.number(); }},
            {"max_outer", [](ExperimentConfig& c, const Entry& e) { c.solver.max_outer = e.count(); }},
        };
        t["audit"] = {
            {"complementarity", [](ExperimentConfig& c, const Entry& e) { c.audit.complementarity = e.number(); }},
            {"monotonicity", [](ExperimentConfig& c, const Entry& e) { c.audit.monotonicity = e.number(); }},
            {"ordering", [](ExperimentConfig& c, const Entry& e) { c.audit.ordering = e.number(); }},
            {"boundary", [](ExperimentConfig& c, const Entry& e) { c.audit.boundary = e.number(); }},
            {"cross_solver", [](ExperimentConfig& c, const Entry& e) { c.audit.cross_solver = e.number(); }},
            {"ratio_min", [](ExperimentConfig& c, const Entry& e) { c.audit.refinement_ratio_min = e.number(); }},
            {"ratio_max", [](ExperimentConfig& c, const Entry& e) { c.audit.refinement_ratio_max = e.number(); }},
            {"separation", [](ExperimentConfig& c, const Entry& e) { c.audit.separation = e.number(); }},
        };
        t["refine"] = {
            {"reference", [](ExperimentConfig& c, const Entry& e) { c.refine_reference = e.expression(); }},
            {"n_list", [](ExperimentConfig& c, const Entry& e) { c.refine_n = e.count_list(); }},
        };
        t["output"] = {
            {"dir", [](ExperimentConfig& c, const Entry& e) { c.output_dir = e.value; }},
        };
        return t;
    }();
    return table;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig config;
    const SectionTable* current = nullptr;
    std::string section;
    std::set<std::string> seen;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::size_t comment = raw.find_first_of("#;");
        std::string text = trim(std::string_view(raw).substr(0, comment));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated section header", line, "");
            section = lower(trim(std::string_view(text).substr(1, text.size() - 2)));
            auto it = sections().find(section);
            if (it == sections().end()) {
                throw ConfigError("line " + std::to_string(line) + ": unknown section [" + section + "]", line, "");
            }
            current = &it->second;
            continue;
        }
        std::size_t eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line) + ": expected key = value", line, "");
        }
        std::string key = lower(trim(std::string_view(text).substr(0, eq)));
        Entry entry{trim(std::string_view(text).substr(eq + 1)), line, key};
        if (current == nullptr) entry.fail("key outside of any section");
        auto handler = current->find(key);
        if (handler == current->end()) entry.fail("unknown key in [" + section + "]");
        if (!seen.insert(section + "." + key).second) entry.fail("duplicate key in [" + section + "]");
        if (entry.value.empty()) entry.fail("empty value");
        handler->second(config, entry);
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read config file " + path.string());
    return parse_config(in);
}

InnerSolverSettings inner_settings(const ExperimentConfig& config) {
    InnerSolverSettings s;
    s.method = config.solver.method;
    s.tol = config.solver.tol;
    s.max_iter = config.solver.max_iter;
    s.omega = config.solver.omega;
    s.damping = config.solver.damping;
    return s;
}

ObstacleProblem build_problem(const ExperimentConfig& config, const GridPtr& grid) {
    bool below = config.side == Side::Below;
    ScalarField obstacle = config.obstacle ? sample(grid, *config.obstacle) : absent_obstacle(grid, below);
    return ObstacleProblem{config.op1.instantiate(grid), config.side, std::move(obstacle),
                           sample(grid, config.f)};
}

MembraneConfig build_membrane_config(const ExperimentConfig& config, const GridPtr& grid) {
    return MembraneConfig{.upper = config.op1.instantiate(grid),
                          .lower = config.op2.instantiate(grid),
                          .boundary_f = sample(grid, config.f),
                          .boundary_g = sample(grid, config.g),
                          .seed = sample(grid, config.seed),
                          .mode = config.mode,
                          .tol = config.solver.outer_tol,
                          .max_outer = config.solver.max_outer,
                          .inner = inner_settings(config)};
}

}  // namespace membranes::cli
