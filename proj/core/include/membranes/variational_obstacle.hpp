#pragma once

#include <cstddef>
#include <optional>

#include "membranes/obstacle_problem.hpp"

namespace membranes {

enum class VariationalMethod { PSOR, ProjectedGradient };

struct VariationalSolverOptions {
    VariationalMethod method = VariationalMethod::PSOR;
    /// Stop once the sup-norm complementarity defect is at most tol.
    double tol = 1e-10;
    std::size_t max_iter = 1'000'000;
    /// PSOR relaxation factor, 0 < omega < 2.
    double omega = 1.5;
    /// Optional warm start; projected onto the feasible set before use.
    std::optional<ScalarField> initial;
};

/// Minimizes the discrete energy over {w = f on the boundary, w >= phi}
/// (Below) or {w <= psi} (Above). Above-side problems are dualized, solved
/// from below and negated back.
///
/// Throws InfeasibleProblem for incompatible boundary data and
/// PreconditionError for a non-variational operator or PSOR with p != 2.
/// Running out of iterations yields converged = false, never an exception.
SolveReport solve_obstacle(const ObstacleProblem& problem, const VariationalSolverOptions& options);

/// One lexicographic projected SOR sweep for p = 2, side Below.
ScalarField psor_sweep(const ScalarField& w, const ObstacleProblem& problem, double omega);

/// Projected gradient descent on the energy for any p > 1, side Below.
///
/// The search direction is the residual (the energy gradient divided by the
/// node weights). Each iteration tries a Barzilai-Borwein step and halves it
/// until the Armijo condition holds, so the energy never increases. If 60
/// halvings do not satisfy Armijo the report comes back stalled.
SolveReport projected_gradient_solve(const ObstacleProblem& problem,
                                     const VariationalSolverOptions& options);

}  // namespace membranes
