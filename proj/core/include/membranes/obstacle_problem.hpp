#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "membranes/grid.hpp"
#include "membranes/operators.hpp"

namespace membranes {

/// Below: solution stays above the obstacle (min{Lu, u - phi} = 0).
/// Above: solution stays below the obstacle (max{Lv, v - psi} = 0).
enum class Side { Below, Above };

std::string_view to_string(Side side) noexcept;

struct ObstacleProblem {
    OperatorSpec spec;
    Side side = Side::Below;
    ScalarField obstacle;
    /// Only boundary entries are used.
    ScalarField boundary;
};

/// Throws GridMismatch if the fields disagree and InfeasibleProblem if the
/// boundary data sits on the wrong side of the obstacle at some boundary node.
void validate(const ObstacleProblem& problem);

/// Flips the side and negates obstacle, boundary data and source.
/// dualize(dualize(P)) == P bit for bit.
ObstacleProblem dualize(const ObstacleProblem& problem);

/// Threshold separating contact nodes from the free set.
inline double contact_gap_tolerance(double tol) noexcept { return tol * 10.0 > 1e-8 ? tol * 10.0 : 1e-8; }

struct SolveReport {
    ScalarField solution;
    std::size_t iterations = 0;
    /// Sup over interior nodes of |complementarity defect|.
    double final_residual = 0.0;
    std::vector<std::size_t> contact_set;
    bool converged = false;
    /// Projected gradient only: the line search found no admissible step.
    bool stalled = false;
    /// Projected gradient only: energy after every accepted step (entry 0 is the start).
    std::vector<double> energy_history;
};

/// Per-node signed complementarity defect: min(residual, w - obstacle) for
/// Below, max(residual, w - obstacle) for Above; 0 on the boundary.
ScalarField complementarity_defect(const ScalarField& w, const ObstacleProblem& problem);

/// Sup norm of complementarity_defect over interior nodes.
double complementarity_norm(const ScalarField& w, const ObstacleProblem& problem);

/// Interior nodes with |w - obstacle| <= gap_tol.
std::vector<std::size_t> contact_set(const ScalarField& w, const ScalarField& obstacle,
                                     double gap_tol);

/// max(obstacle, linear interpolation of the boundary data) for Below,
/// min(...) for Above. Boundary nodes carry the boundary data.
ScalarField feasible_start(const ObstacleProblem& problem);

/// Projects `w` onto the feasible set: boundary values reset, then clamped to the obstacle.
ScalarField make_feasible(ScalarField w, const ObstacleProblem& problem);

}  // namespace membranes
