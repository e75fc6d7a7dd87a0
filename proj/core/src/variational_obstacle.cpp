#include "membranes/variational_obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "membranes/errors.hpp"

namespace membranes {

namespace {

const Variational& require_variational(const ObstacleProblem& problem, const char* context) {
    const auto* spec = std::get_if<Variational>(&problem.spec);
    if (spec == nullptr) {
        throw PreconditionError(std::string(context) + " needs a variational operator");
    }
    return *spec;
}

void require_below(const ObstacleProblem& problem, const char* context) {
    if (problem.side != Side::Below) {
        throw PreconditionError(std::string(context) + " solves lower obstacle problems only");
    }
}

void require_p2(const Variational& spec, const char* context) {
    if (spec.p() != 2.0) {
        throw PreconditionError(std::string(context) + " requires p = 2, got p = " +
                                std::to_string(spec.p()));
    }
}

ScalarField starting_point(const ObstacleProblem& problem, const VariationalSolverOptions& options) {
    if (options.initial) {
        require_same_grid(*options.initial, problem.obstacle, "initial guess");
        return make_feasible(*options.initial, problem);
    }
    return feasible_start(problem);
}

void sweep_in_place(ScalarField& w, const ObstacleProblem& problem, double omega) {
    const Grid& grid = w.grid();
    const ScalarField& source = source_of(problem.spec);
    const double h2 = grid.spacing() * grid.spacing();
    const std::size_t n = grid.n_per_axis();
    for (std::size_t k : grid.interior_nodes()) {
        double neighbors;
        double degree;
        if (grid.dim() == 1) {
            neighbors = w[k - 1] + w[k + 1];
            degree = 2.0;
        } else {
            neighbors = w[k - n] + w[k + n] + w[k - 1] + w[k + 1];
            degree = 4.0;
        }
        double gauss_seidel = (neighbors - source[k] * h2) / degree;
        double relaxed = w[k] + omega * (gauss_seidel - w[k]);
        w[k] = std::max(relaxed, problem.obstacle[k]);
    }
}

SolveReport finish(ScalarField w, const ObstacleProblem& problem, std::size_t iterations,
                   double defect, double tol) {
    SolveReport report{std::move(w), iterations, defect, {}, defect <= tol, false, {}};
    report.contact_set =
        contact_set(report.solution, problem.obstacle, contact_gap_tolerance(tol));
    return report;
}

SolveReport psor_solve(const ObstacleProblem& problem, const VariationalSolverOptions& options) {
    require_p2(require_variational(problem, "PSOR"), "PSOR");
    if (!(options.omega > 0.0 && options.omega < 2.0)) {
        throw PreconditionError("PSOR relaxation must lie in (0, 2)");
    }
    ScalarField w = starting_point(problem, options);
    double defect = complementarity_norm(w, problem);
    std::size_t sweeps = 0;
    // The defect costs about as much as a sweep; checking every few sweeps is enough.
    constexpr std::size_t kCheckEvery = 4;
    while (defect > options.tol && sweeps < options.max_iter) {
        sweep_in_place(w, problem, options.omega);
        ++sweeps;
        if (sweeps % kCheckEvery == 0 || sweeps == options.max_iter) {
            defect = complementarity_norm(w, problem);
        }
    }
    return finish(std::move(w), problem, sweeps, defect, options.tol);
}

// Inner product weighted by node volumes over interior nodes.
double weighted_dot(const ScalarField& a, const ScalarField& b) {
    const Grid& grid = a.grid();
    double sum = 0.0;
    for (std::size_t k : grid.interior_nodes()) sum += a[k] * b[k] * grid.node_volume(k);
    return sum;
}

}  // namespace

ScalarField psor_sweep(const ScalarField& w, const ObstacleProblem& problem, double omega) {
    require_p2(require_variational(problem, "psor_sweep"), "psor_sweep");
    require_below(problem, "psor_sweep");
    if (!(omega > 0.0 && omega < 2.0)) throw PreconditionError("PSOR relaxation must lie in (0, 2)");
    require_same_grid(w, problem.obstacle, "psor_sweep");
    ScalarField out = w;
    sweep_in_place(out, problem, omega);
    return out;
}

SolveReport projected_gradient_solve(const ObstacleProblem& problem,
                                     const VariationalSolverOptions& options) {
    const Variational& spec = require_variational(problem, "projected_gradient_solve");
    require_below(problem, "projected_gradient_solve");
    validate(problem);

    constexpr double kArmijo = 1e-4;
    constexpr int kMaxHalvings = 60;

    const Grid& grid = problem.obstacle.grid();
    const double h2 = grid.spacing() * grid.spacing();
    ScalarField w = starting_point(problem, options);
    ScalarField r = residual_variational(w, spec);
    double defect = complementarity_norm(w, problem);
    double energy_now = energy(w, spec);

    SolveReport report{w, 0, defect, {}, false, false, {energy_now}};
    // The p = 2 stencil has largest eigenvalue about 4 d / h^2.
    const double default_step = h2 / (4.0 * grid.dim());
    double step = default_step;
    std::size_t it = 0;

    ScalarField trial(w.grid_ptr(), 0.0);
    ScalarField displacement(w.grid_ptr(), 0.0);
    while (defect > options.tol && it < options.max_iter) {
        ScalarField gradient = energy_gradient(w, spec);
        bool accepted = false;
        double t = step;
        for (int halving = 0; halving <= kMaxHalvings; ++halving, t *= 0.5) {
            double slope = 0.0;
            for (std::size_t k = 0; k < w.size(); ++k) {
                if (grid.is_boundary(k)) {
                    trial[k] = w[k];
                } else {
                    trial[k] = std::max(w[k] - t * r[k], problem.obstacle[k]);
                }
                displacement[k] = trial[k] - w[k];
                slope += gradient[k] * displacement[k];
            }
            if (slope == 0.0) break;
            double change = energy_difference(w, displacement, spec);
            if (change <= kArmijo * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            report.stalled = true;
            break;
        }
        ++it;
        ScalarField r_next = residual_variational(trial, spec);
        ScalarField dr = r_next;
        for (std::size_t k = 0; k < dr.size(); ++k) dr[k] -= r[k];
        double sy = weighted_dot(displacement, dr);
        double ss = weighted_dot(displacement, displacement);
        step = (sy > 0.0 && ss > 0.0) ? ss / sy : default_step;
        step = std::clamp(step, default_step * 1e-6, default_step * 1e6);

        w = trial;
        r = std::move(r_next);
        energy_now = energy(w, spec);
        report.energy_history.push_back(energy_now);
        defect = complementarity_norm(w, problem);
    }

    SolveReport done = finish(std::move(w), problem, it, defect, options.tol);
    done.stalled = report.stalled;
    done.energy_history = std::move(report.energy_history);
    return done;
}

SolveReport solve_obstacle(const ObstacleProblem& problem, const VariationalSolverOptions& options) {
    require_variational(problem, "solve_obstacle");
    validate(problem);
    if (!(options.tol > 0.0)) throw PreconditionError("solver tolerance must be positive");
    if (problem.side == Side::Above) {
        VariationalSolverOptions dual_options = options;
        if (dual_options.initial) dual_options.initial = -*dual_options.initial;
        SolveReport report = solve_obstacle(dualize(problem), dual_options);
        // E(-v) for the dual source equals E(v), so the energy history carries over unchanged.
        report.solution = -report.solution;
        return report;
    }
    if (options.method == VariationalMethod::PSOR) return psor_solve(problem, options);
    return projected_gradient_solve(problem, options);
}

}  // namespace membranes
