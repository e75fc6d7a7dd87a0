#include "membranes/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace membranes {

SolveReport solve_obstacle_problem(const ObstacleProblem& problem,
                                   const InnerSolverSettings& settings,
                                   std::optional<ScalarField> initial) {
    if (const auto* spec = std::get_if<Variational>(&problem.spec)) {
        VariationalSolverOptions options;
        options.method = settings.method.value_or(spec->p() == 2.0
                                                      ? VariationalMethod::PSOR
                                                      : VariationalMethod::ProjectedGradient);
        options.tol = settings.tol;
        options.max_iter = settings.max_iter;
        options.omega = settings.omega;
        options.initial = std::move(initial);
        return solve_obstacle(problem, options);
    }
    SchemeConfig config;
    config.tol = settings.tol;
    config.max_iter = settings.max_iter;
    config.damping = settings.damping;
    config.initial = std::move(initial);
    return solve_visc_obstacle(problem, config);
}

std::string_view to_string(IterationMode mode) noexcept {
    return mode == IterationMode::IncreasingFromSub ? "increasing" : "decreasing";
}

MembraneResidual two_membrane_residual(const ScalarField& u, const ScalarField& v,
                                       const OperatorSpec& upper, const OperatorSpec& lower,
                                       const ScalarField& boundary_f,
                                       const ScalarField& boundary_g) {
    require_same_grid(u, v, "two_membrane_residual");
    require_same_grid(u, boundary_f, "two_membrane_residual");
    require_same_grid(v, boundary_g, "two_membrane_residual");
    ResidualField ru = residual(u, upper);
    ResidualField rv = residual(v, lower);
    MembraneResidual out;
    const Grid& grid = u.grid();
    for (std::size_t k : grid.interior_nodes()) {
        double du = std::min(ru[k], u[k] - v[k]);
        double dv = std::max(rv[k], v[k] - u[k]);
        if (std::abs(du) > out.res_u) {
            out.res_u = std::abs(du);
            out.worst_u = du;
            out.worst_u_node = k;
        }
        if (std::abs(dv) > out.res_v) {
            out.res_v = std::abs(dv);
            out.worst_v = dv;
            out.worst_v_node = k;
        }
    }
    for (std::size_t k : grid.boundary_nodes()) {
        out.boundary_u = std::max(out.boundary_u, std::abs(u[k] - boundary_f[k]));
        out.boundary_v = std::max(out.boundary_v, std::abs(v[k] - boundary_g[k]));
    }
    return out;
}

namespace {

void check_config(const MembraneConfig& config) {
    const ScalarField& f = config.boundary_f;
    require_same_grid(f, config.boundary_g, "membrane config");
    require_same_grid(f, config.seed, "membrane config");
    require_same_grid(f, source_of(config.upper), "membrane config");
    require_same_grid(f, source_of(config.lower), "membrane config");
    for (std::size_t k : f.grid().boundary_nodes()) {
        if (f[k] < config.boundary_g[k]) {
            throw InfeasibleProblem("boundary data must satisfy f >= g; violated at node " +
                                    std::to_string(k));
        }
    }

    const bool increasing = config.mode == IterationMode::IncreasingFromSub;
    const ScalarField& data = increasing ? config.boundary_g : config.boundary_f;
    for (std::size_t k : f.grid().boundary_nodes()) {
        if (std::abs(config.seed[k] - data[k]) > config.seed_tol) {
            throw RejectedSeed(std::string("seed differs from the ") + (increasing ? "g" : "f") +
                                   " boundary data at node " + std::to_string(k),
                               k);
        }
    }
    Classification c = classify(config.seed, increasing ? config.lower : config.upper,
                                config.seed_tol);
    if (increasing && c.kind != SolutionClass::Subsolution && c.kind != SolutionClass::Solution) {
        std::ostringstream msg;
        msg << "seed is not a subsolution of L2: residual " << c.max_residual << " at node "
            << c.max_node;
        throw RejectedSeed(msg.str(), c.max_node);
    }
    if (!increasing && c.kind != SolutionClass::Supersolution && c.kind != SolutionClass::Solution) {
        std::ostringstream msg;
        msg << "seed is not a supersolution of L1: residual " << c.min_residual << " at node "
            << c.min_node;
        throw RejectedSeed(msg.str(), c.min_node);
    }
}

std::vector<std::string> exponent_warnings(const MembraneConfig& config) {
    const auto* p = std::get_if<Variational>(&config.upper);
    const auto* q = std::get_if<Variational>(&config.lower);
    if (p == nullptr || q == nullptr) return {};
    std::ostringstream msg;
    if (config.mode == IterationMode::IncreasingFromSub && p->p() < q->p()) {
        msg << "increasing iteration with p = " << p->p() << " < q = " << q->p()
            << "; convergence is only guaranteed for p >= q";
    } else if (config.mode == IterationMode::DecreasingFromSuper && p->p() > q->p()) {
        msg << "decreasing iteration with p = " << p->p() << " > q = " << q->p()
            << "; convergence is only guaranteed for p <= q";
    } else {
        return {};
    }
    return {msg.str()};
}

struct Solver {
    const MembraneConfig& config;
    IterationTrace& trace;

    ScalarField upper_membrane(const ScalarField& obstacle, std::optional<ScalarField> warm,
                               std::size_t step) const {
        ObstacleProblem problem{config.upper, Side::Below, obstacle, config.boundary_f};
        return run(problem, std::move(warm), step, "u");
    }

    ScalarField lower_membrane(const ScalarField& obstacle, std::optional<ScalarField> warm,
                               std::size_t step) const {
        ObstacleProblem problem{config.lower, Side::Above, obstacle, config.boundary_g};
        return run(problem, std::move(warm), step, "v");
    }

    ScalarField run(const ObstacleProblem& problem, std::optional<ScalarField> warm,
                    std::size_t step, const char* which) const {
        SolveReport report = solve_obstacle_problem(problem, config.inner, std::move(warm));
        if (!report.converged) {
            std::ostringstream msg;
            msg << "obstacle solve for " << which << " did not converge at outer step " << step
                << " (defect " << report.final_residual << " after " << report.iterations
                << " iterations)";
            throw InnerSolveFailed(msg.str(), step, trace);
        }
        return std::move(report.solution);
    }

    StepRecord record(std::size_t n, ScalarField u, ScalarField v, const StepRecord* previous) const {
        StepRecord rec{n, std::move(u), std::move(v), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, std::nullopt, std::nullopt};
        const bool increasing = config.mode == IterationMode::IncreasingFromSub;
        rec.min_gap = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < rec.u.size(); ++k) {
            rec.min_gap = std::min(rec.min_gap, rec.u[k] - rec.v[k]);
        }
        if (previous != nullptr) {
            rec.sup_du = sup_distance(rec.u, previous->u);
            rec.sup_dv = sup_distance(rec.v, previous->v);
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < rec.u.size(); ++k) {
                double du = rec.u[k] - previous->u[k];
                double dv = rec.v[k] - previous->v[k];
                if (!increasing) {
                    du = -du;
                    dv = -dv;
                }
                worst = std::min({worst, du, dv});
            }
            rec.worst_monotonicity = worst;
        }
        MembraneResidual res = two_membrane_residual(rec.u, rec.v, config.upper, config.lower,
                                                     config.boundary_f, config.boundary_g);
        rec.res_u = res.res_u;
        rec.res_v = res.res_v;
        if (const auto* p = std::get_if<Variational>(&config.upper)) rec.energy_u = energy(rec.u, *p);
        if (const auto* q = std::get_if<Variational>(&config.lower)) rec.energy_v = energy(rec.v, *q);
        return rec;
    }
};

}  // namespace

IterationTrace iterate(const MembraneConfig& config) {
    check_config(config);
    IterationTrace trace;
    trace.mode = config.mode;
    trace.warnings = exponent_warnings(config);
    Solver solver{config, trace};

    const bool increasing = config.mode == IterationMode::IncreasingFromSub;
    if (increasing) {
        ScalarField v0 = config.seed;
        for (std::size_t k : v0.grid().boundary_nodes()) v0[k] = config.boundary_g[k];
        ScalarField u0 = solver.upper_membrane(v0, std::nullopt, 0);
        trace.steps.push_back(solver.record(0, std::move(u0), std::move(v0), nullptr));
    } else {
        ScalarField u0 = config.seed;
        for (std::size_t k : u0.grid().boundary_nodes()) u0[k] = config.boundary_f[k];
        ScalarField v0 = solver.lower_membrane(u0, std::nullopt, 0);
        trace.steps.push_back(solver.record(0, std::move(u0), std::move(v0), nullptr));
    }

    for (std::size_t n = 1; n <= config.max_outer; ++n) {
        const StepRecord& prev = trace.steps.back();
        ScalarField u(prev.u.grid_ptr(), 0.0);
        ScalarField v(prev.v.grid_ptr(), 0.0);
        if (increasing) {
            v = solver.lower_membrane(prev.u, prev.v, n);
            u = solver.upper_membrane(v, prev.u, n);
        } else {
            u = solver.upper_membrane(prev.v, prev.u, n);
            v = solver.lower_membrane(u, prev.v, n);
        }
        trace.steps.push_back(solver.record(n, std::move(u), std::move(v), &prev));
        const StepRecord& now = trace.steps.back();
        if (now.sup_du < config.tol && now.sup_dv < config.tol) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

DemoResult nonuniqueness_demo(std::size_t n, double audit_tol, const InnerSolverSettings& inner) {
    GridPtr grid = build_grid(1, n);
    OperatorSpec upper = Variational(2.0, ScalarField(grid, 10.0));
    OperatorSpec lower = Variational(2.0, ScalarField(grid, -2.0));
    ScalarField f(grid, 1.0);
    ScalarField g(grid, 0.0);

    auto solve = [&](const OperatorSpec& spec, Side side, ScalarField obstacle,
                     const ScalarField& data) {
        SolveReport report = solve_obstacle_problem(ObstacleProblem{spec, side, std::move(obstacle), data},
                                                    inner);
        if (!report.converged) throw DemoFailed("demo obstacle solve did not converge");
        return std::move(report.solution);
    };

    ScalarField hat_u = solve(upper, Side::Below, absent_obstacle(grid, true), f);
    ScalarField hat_v = solve(lower, Side::Above, hat_u, g);
    ScalarField tilde_v = solve(lower, Side::Above, absent_obstacle(grid, false), g);
    ScalarField tilde_u = solve(upper, Side::Below, tilde_v, f);

    DemoResult out{grid,
                   upper,
                   lower,
                   hat_u,
                   hat_v,
                   tilde_u,
                   tilde_v,
                   two_membrane_residual(hat_u, hat_v, upper, lower, f, g),
                   two_membrane_residual(tilde_u, tilde_v, upper, lower, f, g),
                   sup_distance(hat_u, tilde_u)};

    if (!out.hat_residual.passes(audit_tol)) {
        throw DemoFailed("pair (hat u, hat v) fails the two-membrane audit: res_u = " +
                         std::to_string(out.hat_residual.res_u) +
                         ", res_v = " + std::to_string(out.hat_residual.res_v));
    }
    if (!out.tilde_residual.passes(audit_tol)) {
        throw DemoFailed("pair (tilde u, tilde v) fails the two-membrane audit: res_u = " +
                         std::to_string(out.tilde_residual.res_u) +
                         ", res_v = " + std::to_string(out.tilde_residual.res_v));
    }
    if (out.separation < 0.5 - 1e-3) {
        throw DemoFailed("solution pairs are not separated: sup |hat u - tilde u| = " +
                         std::to_string(out.separation));
    }
    return out;
}

}  // namespace membranes
