#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "membranes/obstacle_problem.hpp"

namespace membranes {

struct SchemeConfig {
    /// Stop when the sup-norm update of a sweep is below tol and the
    /// complementarity defect is at most tol.
    double tol = 1e-10;
    std::size_t max_iter = 2'000'000;
    /// Relaxation of the Gauss-Seidel update, in (0, 1].
    double damping = 1.0;
    std::optional<ScalarField> initial;
};

/// Value at a node that zeroes the normalized p-Laplacian residual given
/// its neighbors:
///   -beta (sum(axis) - 2 d w) / h^2 - alpha (max + min - 2 w) / h^2 + source = 0.
/// `axis` holds the 2 d Laplacian neighbors, `stencil` the values scanned by
/// the min-max infinity Laplacian.
double local_solve(std::span<const double> axis, std::span<const double> stencil, double source,
                   double spacing, double alpha, double beta);

double local_solve(const ScalarField& w, std::size_t node, const NormalizedPLaplacian& spec);

/// One lexicographic Gauss-Seidel sweep of local_solve, each node clamped to
/// the obstacle right after its update (max for Below, min for Above).
ScalarField visc_sweep(const ScalarField& w, const ObstacleProblem& problem, double damping = 1.0);

/// Iterates visc_sweep from a feasible start. Handles both sides natively.
/// Throws InfeasibleProblem / PreconditionError; exhausting max_iter yields
/// converged = false.
SolveReport solve_visc_obstacle(const ObstacleProblem& problem, const SchemeConfig& config);

struct ComparisonReport {
    /// w1 <= w2 + tol at every node.
    bool passed = false;
    /// w1 is a subsolution, w2 a supersolution, and w1 <= w2 on the boundary.
    bool hypotheses_hold = false;
    SolutionClass first = SolutionClass::Neither;
    SolutionClass second = SolutionClass::Neither;
    bool boundary_ordered = false;
    /// max_k (w1_k - w2_k) and where it occurs.
    double worst_margin = 0.0;
    std::size_t worst_node = 0;

    /// Hypotheses hold but the ordering fails.
    bool violates_comparison() const noexcept { return hypotheses_hold && !passed; }
};

ComparisonReport comparison_check(const ScalarField& w1, const ScalarField& w2,
                                  const OperatorSpec& spec, double tol);

}  // namespace membranes
