#include "membranes/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace membranes {

AuditReport audit_complementarity(const SolveReport& report, const ObstacleProblem& problem,
                                  const AuditThresholds& thresholds) {
    if (!report.converged) {
        throw PreconditionError("audit_complementarity needs a converged solve report");
    }
    ScalarField defect = complementarity_defect(report.solution, problem);
    AuditReport out{"complementarity", false, false, 0.0, 0, thresholds.complementarity};
    double worst_abs = -1.0;
    for (std::size_t k : defect.grid().interior_nodes()) {
        if (std::abs(defect[k]) > worst_abs) {
            worst_abs = std::abs(defect[k]);
            out.worst_value = defect[k];
            out.worst_node = k;
        }
    }
    out.passed = std::abs(out.worst_value) <= thresholds.complementarity;
    return out;
}

std::vector<AuditReport> audit_trace(const IterationTrace& trace, const ScalarField& boundary_f,
                                     const ScalarField& boundary_g,
                                     const AuditThresholds& thresholds) {
    AuditReport mono{"monotonicity", true, false, 0.0, 0, thresholds.monotonicity};
    AuditReport order{"ordering", true, false, std::numeric_limits<double>::infinity(), 0,
                      thresholds.ordering};
    AuditReport pin{"boundary_pinning", true, false, 0.0, 0, thresholds.boundary};
    const bool increasing = trace.mode == IterationMode::IncreasingFromSub;

    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
        const StepRecord& step = trace.steps[s];
        const Grid& grid = step.u.grid();
        for (std::size_t k = 0; k < step.u.size(); ++k) {
            double gap = step.u[k] - step.v[k];
            if (gap < order.worst_value) {
                order.worst_value = gap;
                order.worst_node = k;
            }
            if (s > 0) {
                const StepRecord& prev = trace.steps[s - 1];
                double du = step.u[k] - prev.u[k];
                double dv = step.v[k] - prev.v[k];
                double inc = increasing ? std::min(du, dv) : std::min(-du, -dv);
                if (inc < mono.worst_value) {
                    mono.worst_value = inc;
                    mono.worst_node = k;
                }
            }
            if (grid.is_boundary(k)) {
                double dev = std::max(std::abs(step.u[k] - boundary_f[k]),
                                      std::abs(step.v[k] - boundary_g[k]));
                if (dev > pin.worst_value) {
                    pin.worst_value = dev;
                    pin.worst_node = k;
                }
            }
        }
    }
    if (trace.steps.empty()) order.worst_value = 0.0;
    mono.passed = mono.worst_value >= -thresholds.monotonicity;
    order.passed = order.worst_value >= -thresholds.ordering;
    pin.passed = pin.worst_value <= thresholds.boundary;
    return {mono, order, pin};
}

AuditReport audit_cross_solver(const ObstacleProblem& problem, const AuditThresholds& thresholds,
                               const InnerSolverSettings& settings) {
    const ScalarField& source = source_of(problem.spec);
    bool accepted = false;
    if (const auto* v = std::get_if<Variational>(&problem.spec)) {
        accepted = v->p() == 2.0;
    } else {
        const auto& nl = std::get<NormalizedPLaplacian>(problem.spec);
        accepted = nl.alpha() == 0.0 && nl.beta() == 1.0;
    }
    if (!accepted) {
        throw PreconditionError(
            "cross-solver audit needs a p = 2 variational or alpha = 0, beta = 1 normalized operator");
    }

    ObstacleProblem variational = problem;
    variational.spec = Variational(2.0, source);
    ObstacleProblem viscosity = problem;
    viscosity.spec = NormalizedPLaplacian(0.0, 1.0, source);

    InnerSolverSettings psor = settings;
    psor.method = VariationalMethod::PSOR;
    SolveReport a = solve_obstacle_problem(variational, psor);
    SolveReport b = solve_obstacle_problem(viscosity, settings);

    AuditReport out{"cross_solver", false, false, 0.0, 0, thresholds.cross_solver};
    if (!a.converged || !b.converged) {
        out.inconclusive = true;
        out.worst_value = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    for (std::size_t k = 0; k < a.solution.size(); ++k) {
        double d = std::abs(a.solution[k] - b.solution[k]);
        if (d > out.worst_value) {
            out.worst_value = d;
            out.worst_node = k;
        }
    }
    out.passed = out.worst_value <= thresholds.cross_solver;
    return out;
}

std::vector<RefinementRow> grid_refinement_study(const OperatorTemplate& op,
                                                 const Expression& reference,
                                                 std::span<const std::size_t> resolutions, int dim,
                                                 const InnerSolverSettings& settings) {
    std::vector<RefinementRow> rows;
    for (std::size_t n : resolutions) {
        GridPtr grid = build_grid(dim, n);
        ScalarField exact = sample(grid, reference);
        ObstacleProblem problem{op.instantiate(grid), Side::Below, absent_obstacle(grid, true), exact};
        SolveReport report = solve_obstacle_problem(problem, settings);
        if (!report.converged) {
            throw Error("refinement solve did not converge at n = " + std::to_string(n));
        }
        RefinementRow row{n, grid->spacing(), sup_distance(report.solution, exact), 0.0};
        if (!rows.empty() && row.error > 0.0) row.ratio = rows.back().error / row.error;
        rows.push_back(row);
    }
    return rows;
}

AuditReport audit_refinement(const std::vector<RefinementRow>& rows,
                             const AuditThresholds& thresholds) {
    AuditReport out{"refinement_ratio", true, false, 0.0, 0, thresholds.refinement_ratio_min};
    if (rows.size() < 2) {
        out.passed = false;
        out.inconclusive = true;
        return out;
    }
    double worst_distance = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double r = rows[i].ratio;
        bool inside = r >= thresholds.refinement_ratio_min && r <= thresholds.refinement_ratio_max;
        double distance = inside ? 0.0
                                 : std::max(thresholds.refinement_ratio_min - r,
                                            r - thresholds.refinement_ratio_max);
        if (distance > worst_distance) {
            worst_distance = distance;
            out.worst_value = r;
            out.worst_node = i;
        }
        out.passed = out.passed && inside;
    }
    return out;
}

std::vector<AuditReport> audit_demo(const DemoResult& demo, const AuditThresholds& thresholds) {
    auto pair_report = [&](const char* name, const MembraneResidual& res) {
        AuditReport r{name, false, false, 0.0, 0, thresholds.complementarity};
        bool u_worse = res.res_u >= res.res_v;
        r.worst_value = std::max({res.res_u, res.res_v, res.boundary_u, res.boundary_v});
        r.worst_node = u_worse ? res.worst_u_node : res.worst_v_node;
        r.passed = res.passes(thresholds.complementarity);
        return r;
    };
    AuditReport separation{"demo_separation", demo.separation >= thresholds.separation, false,
                           demo.separation, 0, thresholds.separation};
    for (std::size_t k = 0; k < demo.hat_u.size(); ++k) {
        if (std::abs(demo.hat_u[k] - demo.tilde_u[k]) == demo.separation) {
            separation.worst_node = k;
            break;
        }
    }
    return {pair_report("demo_hat_pair", demo.hat_residual),
            pair_report("demo_tilde_pair", demo.tilde_residual), separation};
}

}  // namespace membranes
