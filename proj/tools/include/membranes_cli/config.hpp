#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "membranes/iteration.hpp"
#include "membranes/verify.hpp"

namespace membranes::cli {

/// A config file problem, located by 1-based line and offending key
/// (empty for section-level errors).
class ConfigError : public ParseError {
public:
    ConfigError(const std::string& what, std::size_t line, std::string key)
        : ParseError(what, line), key_(std::move(key)) {}
    std::size_t line() const noexcept { return position(); }
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct SolverSection {
    std::optional<VariationalMethod> method;
    double tol = 1e-10;
    std::size_t max_iter = 2'000'000;
    double omega = 1.5;
    double damping = 1.0;
    double outer_tol = 1e-9;
    std::size_t max_outer = 10'000;
};

/// Every section is optional. The defaults are the 1D non-uniqueness
/// example: L1 = -u'' + 10, L2 = -v'' - 2, f = 1, g = 0, seed v0 = 0.
struct ExperimentConfig {
    int dim = 1;
    std::size_t n = 201;
    OperatorTemplate op1{OperatorTemplate::Kind::Variational, 2.0, 0.0, 1.0, Expression::constant(10.0)};
    OperatorTemplate op2{OperatorTemplate::Kind::Variational, 2.0, 0.0, 1.0, Expression::constant(-2.0)};
    Expression f = Expression::constant(1.0);
    Expression g = Expression::constant(0.0);
    /// Unset means no obstacle.
    std::optional<Expression> obstacle;
    Side side = Side::Below;
    Expression seed = Expression::constant(0.0);
    IterationMode mode = IterationMode::IncreasingFromSub;
    SolverSection solver;
    AuditThresholds audit;
    std::optional<Expression> refine_reference;
    std::vector<std::size_t> refine_n{51, 101, 201};
    std::filesystem::path output_dir = "out";
};

/// Parses the INI-style format:
///
///   [grid]      dim, n
///   [op1] [op2] kind (variational|normalized), p, alpha, beta, source
///   [boundary]  f, g
///   [obstacle]  expr (or none), side (below|above)
///   [seed]      expr, mode (increasing|decreasing)
///   [solver]    method (auto|psor|projected_gradient), tol, max_iter, omega,
///               damping, outer_tol, max_outer
///   [audit]     complementarity, monotonicity, ordering, boundary,
///               cross_solver, ratio_min, ratio_max, separation
///   [refine]    reference, n_list (comma separated)
///   [output]    dir
///
/// `#` and `;` start comments. Unknown sections or keys, duplicates and
/// malformed values throw ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

InnerSolverSettings inner_settings(const ExperimentConfig& config);

/// The obstacle problem of `solve`: operator op1, data f.
ObstacleProblem build_problem(const ExperimentConfig& config, const GridPtr& grid);

MembraneConfig build_membrane_config(const ExperimentConfig& config, const GridPtr& grid);

}  // namespace membranes::cli
