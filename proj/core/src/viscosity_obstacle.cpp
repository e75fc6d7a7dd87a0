#include "membranes/viscosity_obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "membranes/errors.hpp"

namespace membranes {

double local_solve(std::span<const double> axis, std::span<const double> stencil, double source,
                   double spacing, double alpha, double beta) {
    if (!(alpha + beta > 0.0)) throw InvalidOperator("local_solve: alpha + beta must be positive");
    double sum = 0.0;
    for (double v : axis) sum += v;
    auto [lo, hi] = std::minmax_element(stencil.begin(), stencil.end());
    double diagonal = beta * static_cast<double>(axis.size()) + 2.0 * alpha;
    return (beta * sum + alpha * (*hi + *lo) - source * spacing * spacing) / diagonal;
}

double local_solve(const ScalarField& w, std::size_t node, const NormalizedPLaplacian& spec) {
    if (w.grid().is_boundary(node)) {
        throw PreconditionError("local_solve: node " + std::to_string(node) + " is on the boundary");
    }
    Neighborhood nb = neighborhood(w, node);
    return local_solve(nb.axis_values(), nb.stencil_values(), spec.source()[node],
                       w.grid().spacing(), spec.alpha(), spec.beta());
}

namespace {

const NormalizedPLaplacian& require_normalized(const ObstacleProblem& problem) {
    const auto* spec = std::get_if<NormalizedPLaplacian>(&problem.spec);
    if (spec == nullptr) {
        throw PreconditionError("viscosity solver needs a normalized p-Laplacian operator");
    }
    return *spec;
}

// Returns the sup-norm change of the sweep.
double sweep_in_place(ScalarField& w, const ObstacleProblem& problem,
                      const NormalizedPLaplacian& spec, double damping) {
    const Grid& grid = w.grid();
    const bool below = problem.side == Side::Below;
    double change = 0.0;
    for (std::size_t k : grid.interior_nodes()) {
        double target = local_solve(w, k, spec);
        double updated = w[k] + damping * (target - w[k]);
        updated = below ? std::max(updated, problem.obstacle[k])
                        : std::min(updated, problem.obstacle[k]);
        change = std::max(change, std::abs(updated - w[k]));
        w[k] = updated;
    }
    return change;
}

void check_damping(double damping) {
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw PreconditionError("damping must lie in (0, 1]");
    }
}

}  // namespace

ScalarField visc_sweep(const ScalarField& w, const ObstacleProblem& problem, double damping) {
    const NormalizedPLaplacian& spec = require_normalized(problem);
    check_damping(damping);
    require_same_grid(w, problem.obstacle, "visc_sweep");
    ScalarField out = w;
    sweep_in_place(out, problem, spec, damping);
    return out;
}

SolveReport solve_visc_obstacle(const ObstacleProblem& problem, const SchemeConfig& config) {
    const NormalizedPLaplacian& spec = require_normalized(problem);
    validate(problem);
    check_damping(config.damping);
    if (!(config.tol > 0.0)) throw PreconditionError("scheme tolerance must be positive");

    ScalarField w = feasible_start(problem);
    if (config.initial) {
        require_same_grid(*config.initial, problem.obstacle, "initial guess");
        w = make_feasible(*config.initial, problem);
    }

    double defect = complementarity_norm(w, problem);
    double change = std::numeric_limits<double>::infinity();
    std::size_t sweeps = 0;
    constexpr std::size_t kCheckEvery = 4;
    while ((change >= config.tol || defect > config.tol) && sweeps < config.max_iter) {
        change = sweep_in_place(w, problem, spec, config.damping);
        ++sweeps;
        if (change < config.tol || sweeps % kCheckEvery == 0 || sweeps == config.max_iter) {
            defect = complementarity_norm(w, problem);
        }
    }

    SolveReport report{std::move(w), sweeps, defect, {}, false, false, {}};
    report.converged = change < config.tol && defect <= config.tol;
    report.contact_set =
        contact_set(report.solution, problem.obstacle, contact_gap_tolerance(config.tol));
    return report;
}

ComparisonReport comparison_check(const ScalarField& w1, const ScalarField& w2,
                                  const OperatorSpec& spec, double tol) {
    require_same_grid(w1, w2, "comparison_check");
    ComparisonReport out;
    out.first = classify(w1, spec, tol).kind;
    out.second = classify(w2, spec, tol).kind;
    const Grid& grid = w1.grid();
    out.boundary_ordered = std::all_of(grid.boundary_nodes().begin(), grid.boundary_nodes().end(),
                                       [&](std::size_t k) { return w1[k] <= w2[k] + tol; });
    bool sub = out.first == SolutionClass::Subsolution || out.first == SolutionClass::Solution;
    bool super = out.second == SolutionClass::Supersolution || out.second == SolutionClass::Solution;
    out.hypotheses_hold = sub && super && out.boundary_ordered;

    out.worst_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < w1.size(); ++k) {
        double margin = w1[k] - w2[k];
        if (margin > out.worst_margin) {
            out.worst_margin = margin;
            out.worst_node = k;
        }
    }
    out.passed = out.worst_margin <= tol;
    return out;
}

}  // namespace membranes
