#include "membranes_cli/runner.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "membranes/field_io.hpp"
#include "membranes/serialization.hpp"
#include "membranes_cli/config.hpp"

namespace membranes::cli {

namespace {

namespace fs = std::filesystem;

spdlog::logger& log() {
    static auto logger =
        std::make_shared<spdlog::logger>("membranes", std::make_shared<spdlog::sinks::stderr_sink_st>());
    return *logger;
}

void configure_logging() {
    const char* env = std::getenv("MEMBRANE_LOG");
    std::string level = env ? env : "info";
    if (level == "quiet") {
        log().set_level(spdlog::level::err);
    } else if (level == "debug") {
        log().set_level(spdlog::level::debug);
    } else {
        log().set_level(spdlog::level::info);
        if (level != "info") log().warn("MEMBRANE_LOG={} not recognized, using info", level);
    }
}

struct Invocation {
    std::string command;
    ExperimentConfig config;
    fs::path out;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot write " + path.string());
    file << text;
    log().debug("wrote {}", path.string());
}

void write_field(const fs::path& path, const ScalarField& field) {
    write_field_csv(path, field);
    log().debug("wrote {}", path.string());
}

GridPtr grid_of(const ExperimentConfig& config) { return build_grid(config.dim, config.n); }

nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

int cmd_solve(const Invocation& inv) {
    GridPtr grid = grid_of(inv.config);
    ObstacleProblem problem = build_problem(inv.config, grid);
    SolveReport report = solve_obstacle_problem(problem, inner_settings(inv.config));
    write_text(inv.out / "report.json", solve_report_json(report));
    write_field(inv.out / "solution.csv", report.solution);
    log().info("solve: converged={} iterations={} residual={:.3e} contacts={}", report.converged,
               report.iterations, report.final_residual, report.contact_set.size());
    return report.converged ? kOk : kNotConverged;
}

void write_trace(const Invocation& inv, const IterationTrace& trace) {
    std::ofstream csv(inv.out / "trace.csv", std::ios::binary);
    if (!csv) throw Error("cannot write " + (inv.out / "trace.csv").string());
    write_trace_csv(csv, trace);
    write_text(inv.out / "summary.json", trace_summary_json(trace));
    if (!trace.steps.empty()) {
        write_field(inv.out / "u_final.csv", trace.last().u);
        write_field(inv.out / "v_final.csv", trace.last().v);
    }
}

int cmd_iterate(const Invocation& inv) {
    GridPtr grid = grid_of(inv.config);
    MembraneConfig membrane = build_membrane_config(inv.config, grid);
    IterationTrace trace;
    try {
        trace = iterate(membrane);
    } catch (const InnerSolveFailed& e) {
        log().error("{}", e.what());
        write_trace(inv, e.partial());
        return kNotConverged;
    }
    for (const std::string& w : trace.warnings) log().warn("{}", w);
    write_trace(inv, trace);
    log().info("iterate: mode={} steps={} converged={}", to_string(trace.mode), trace.outer_steps(),
               trace.converged);
    return trace.converged ? kOk : kNotConverged;
}

nlohmann::ordered_json residual_json(const MembraneResidual& r) {
    nlohmann::ordered_json j;
    j["res_u"] = number_or_null(r.res_u);
    j["res_v"] = number_or_null(r.res_v);
    j["boundary_u"] = number_or_null(r.boundary_u);
    j["boundary_v"] = number_or_null(r.boundary_v);
    return j;
}

int cmd_demo(const Invocation& inv) {
    const double audit_tol = inv.config.audit.complementarity;
    std::optional<DemoResult> result;
    try {
        result = nonuniqueness_demo(inv.config.n, audit_tol, inner_settings(inv.config));
    } catch (const DemoFailed& e) {
        log().error("{}", e.what());
        return kNotConverged;
    }
    const DemoResult& demo = *result;
    write_field(inv.out / "hat_u.csv", demo.hat_u);
    write_field(inv.out / "hat_v.csv", demo.hat_v);
    write_field(inv.out / "tilde_u.csv", demo.tilde_u);
    write_field(inv.out / "tilde_v.csv", demo.tilde_v);

    const std::size_t mid = (demo.grid->size() - 1) / 2;
    nlohmann::ordered_json j;
    j["n"] = demo.grid->size();
    j["x_mid"] = demo.grid->coordinate(mid, 0);
    j["hat_u_mid"] = demo.hat_u[mid];
    j["hat_v_mid"] = demo.hat_v[mid];
    j["tilde_u_mid"] = demo.tilde_u[mid];
    j["tilde_v_mid"] = demo.tilde_v[mid];
    j["separation"] = number_or_null(demo.separation);
    j["audit_tol"] = audit_tol;
    j["hat_residual"] = residual_json(demo.hat_residual);
    j["tilde_residual"] = residual_json(demo.tilde_residual);
    write_text(inv.out / "demo_summary.json", j.dump(2) + "\n");
    log().info("demo: separation={:.6f} hat_u(x_mid)={:.6f}", demo.separation, demo.hat_u[mid]);
    return kOk;
}

AuditReport inconclusive(const std::string& name, double tolerance, std::size_t node = 0) {
    return AuditReport{name, false, true, std::numeric_limits<double>::quiet_NaN(), node, tolerance};
}

bool cross_solver_applies(const OperatorSpec& spec) {
    if (const auto* v = std::get_if<Variational>(&spec)) return v->p() == 2.0;
    const auto& nl = std::get<NormalizedPLaplacian>(spec);
    return nl.alpha() == 0.0 && nl.beta() == 1.0;
}

int cmd_verify(const Invocation& inv) {
    const ExperimentConfig& cfg = inv.config;
    const AuditThresholds& th = cfg.audit;
    const InnerSolverSettings inner = inner_settings(cfg);
    GridPtr grid = grid_of(cfg);
    std::vector<AuditReport> reports;

    ObstacleProblem problem = build_problem(cfg, grid);
    SolveReport solved = solve_obstacle_problem(problem, inner);
    if (solved.converged) {
        reports.push_back(audit_complementarity(solved, problem, th));
    } else {
        reports.push_back(inconclusive("complementarity", th.complementarity));
    }
    if (cross_solver_applies(problem.spec)) reports.push_back(audit_cross_solver(problem, th, inner));

    MembraneConfig membrane = build_membrane_config(cfg, grid);
    try {
        IterationTrace trace = iterate(membrane);
        for (AuditReport& r : audit_trace(trace, membrane.boundary_f, membrane.boundary_g, th)) {
            reports.push_back(std::move(r));
        }
        reports.push_back(AuditReport{"trace_converged", trace.converged, false,
                                      static_cast<double>(trace.outer_steps()), 0, 0.0});
    } catch (const InnerSolveFailed& e) {
        log().error("{}", e.what());
        for (AuditReport& r : audit_trace(e.partial(), membrane.boundary_f, membrane.boundary_g, th)) {
            reports.push_back(std::move(r));
        }
        reports.push_back(inconclusive("trace_converged", 0.0, e.step()));
    } catch (const RejectedSeed& e) {
        log().error("{}", e.what());
        reports.push_back(inconclusive("trace_seed", membrane.seed_tol, e.node()));
    }

    if (cfg.dim == 1) {
        try {
            DemoResult demo = nonuniqueness_demo(cfg.n, th.complementarity, inner);
            for (AuditReport& r : audit_demo(demo, th)) reports.push_back(std::move(r));
        } catch (const DemoFailed& e) {
            log().error("{}", e.what());
            reports.push_back(inconclusive("demo", th.complementarity));
        }
    }

    if (cfg.refine_reference) {
        auto rows = grid_refinement_study(cfg.op1, *cfg.refine_reference, cfg.refine_n, cfg.dim, inner);
        reports.push_back(audit_refinement(rows, th));
    }

    write_text(inv.out / "audits.json", audit_reports_json(reports));
    int failed = 0;
    for (const AuditReport& r : reports) {
        if (!r.passed) ++failed;
        log().info("audit {}: {}{} worst={:.3e} tol={:.1e}", r.name, r.passed ? "pass" : "FAIL",
                   r.inconclusive ? " (inconclusive)" : "", r.worst_value, r.tolerance);
    }
    return failed;
}

int cmd_refine(const Invocation& inv) {
    const ExperimentConfig& cfg = inv.config;
    if (!cfg.refine_reference) throw ConfigError("refine needs [refine] reference", 0, "reference");
    auto rows = grid_refinement_study(cfg.op1, *cfg.refine_reference, cfg.refine_n, cfg.dim,
                                      inner_settings(cfg));
    std::ofstream csv(inv.out / "refinement.csv", std::ios::binary);
    if (!csv) throw Error("cannot write " + (inv.out / "refinement.csv").string());
    write_refinement_csv(csv, rows);
    for (const RefinementRow& r : rows) {
        log().info("refine: n={} error={:.3e} ratio={:.3f}", r.n, r.error, r.ratio);
    }
    return kOk;
}

int dispatch(const Invocation& inv) {
    fs::create_directories(inv.out);
    if (inv.command == "solve") return cmd_solve(inv);
    if (inv.command == "iterate") return cmd_iterate(inv);
    if (inv.command == "demo") return cmd_demo(inv);
    if (inv.command == "verify") return cmd_verify(inv);
    return cmd_refine(inv);
}

}  // namespace

int run(int argc, const char* const* argv) {
    configure_logging();

    CLI::App app{"Obstacle problems and the two-membranes iteration"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir;
    std::optional<std::size_t> n_override;
    std::optional<double> tol_override;
    const std::pair<const char*, const char*> commands[] = {
        {"solve", "Solve the [obstacle] problem with operator op1 and data f"},
        {"iterate", "Run the membrane iteration from [seed]"},
        {"demo", "Build both solution pairs of the 1D non-uniqueness example"},
        {"verify", "Run every audit; exit code = number of failures"},
        {"refine", "Grid refinement study against [refine] reference"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "INI experiment file (defaults if omitted)");
        sub->add_option("--out", out_dir, "Output directory (overrides [output] dir)");
        sub->add_option("--n", n_override, "Nodes per axis (overrides [grid] n)");
        sub->add_option("--tol", tol_override, "Inner solver tolerance (overrides [solver] tol)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kParseError;
    }

    Invocation inv;
    inv.command = app.get_subcommands().front()->get_name();
    try {
        inv.config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        if (n_override) inv.config.n = *n_override;
        if (tol_override) inv.config.solver.tol = *tol_override;
        inv.out = out_dir.empty() ? inv.config.output_dir : fs::path(out_dir);
        log().info("{}: dim={} n={} out={}", inv.command, inv.config.dim, inv.config.n, inv.out.string());
        return dispatch(inv);
    } catch (const ParseError& e) {
        log().error("parse error: {}", e.what());
        return kParseError;
    } catch (const InfeasibleProblem& e) {
        log().error("infeasible: {}", e.what());
        return kInfeasible;
    } catch (const std::exception& e) {
        log().error("{}", e.what());
        return kFailure;
    }
}

}  // namespace membranes::cli
