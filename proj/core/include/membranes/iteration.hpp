#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "membranes/errors.hpp"
#include "membranes/obstacle_problem.hpp"
#include "membranes/variational_obstacle.hpp"
#include "membranes/viscosity_obstacle.hpp"

namespace membranes {

/// Settings forwarded to whichever obstacle solver matches an operator.
struct InnerSolverSettings {
    /// Variational operators only. Unset picks PSOR for p = 2 and projected
    /// gradient otherwise.
    std::optional<VariationalMethod> method;
    double tol = 1e-10;
    std::size_t max_iter = 2'000'000;
    double omega = 1.5;
    double damping = 1.0;
};

/// Solves an obstacle problem with the backend its operator calls for:
/// variational specs go to solve_obstacle, normalized ones to solve_visc_obstacle.
SolveReport solve_obstacle_problem(const ObstacleProblem& problem,
                                   const InnerSolverSettings& settings,
                                   std::optional<ScalarField> initial = std::nullopt);

enum class IterationMode { IncreasingFromSub, DecreasingFromSuper };

std::string_view to_string(IterationMode mode) noexcept;

struct MembraneConfig {
    /// L1: operator of the upper membrane u (obstacle problems from below).
    OperatorSpec upper;
    /// L2: operator of the lower membrane v (obstacle problems from above).
    OperatorSpec lower;
    ScalarField boundary_f;
    ScalarField boundary_g;
    /// v0 for IncreasingFromSub, u0 for DecreasingFromSuper.
    ScalarField seed;
    IterationMode mode = IterationMode::IncreasingFromSub;
    /// Outer stop: both sup-norm deltas below tol.
    double tol = 1e-9;
    std::size_t max_outer = 10'000;
    /// Tolerance of the seed classification and its boundary check.
    double seed_tol = 1e-8;
    InnerSolverSettings inner{};
};

struct StepRecord {
    std::size_t n = 0;
    ScalarField u;
    ScalarField v;
    /// Step 0 has no predecessor; its deltas and monotonicity entry are 0.
    double sup_du = 0.0;
    double sup_dv = 0.0;
    /// min_k (u_k - v_k)
    double min_gap = 0.0;
    /// Most negative nodewise increment in the monotone direction (negative = violation).
    double worst_monotonicity = 0.0;
    /// Two-membrane complementarity residuals of (u_n, v_n).
    double res_u = 0.0;
    double res_v = 0.0;
    std::optional<double> energy_u;
    std::optional<double> energy_v;
};

struct IterationTrace {
    IterationMode mode = IterationMode::IncreasingFromSub;
    std::vector<StepRecord> steps;
    bool converged = false;
    std::vector<std::string> warnings;

    const StepRecord& last() const { return steps.back(); }
    /// Number of outer steps after step 0.
    std::size_t outer_steps() const noexcept { return steps.empty() ? 0 : steps.size() - 1; }
};

/// The seed is not a sub/supersolution of the right operator or misses the boundary data.
class RejectedSeed : public Error {
public:
    RejectedSeed(const std::string& what, std::size_t node) : Error(what), node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// An obstacle solve inside the iteration did not converge. Carries the trace up to that point.
class InnerSolveFailed : public Error {
public:
    InnerSolveFailed(const std::string& what, std::size_t step, IterationTrace partial)
        : Error(what), step_(step), partial_(std::move(partial)) {}
    std::size_t step() const noexcept { return step_; }
    const IterationTrace& partial() const noexcept { return partial_; }

private:
    std::size_t step_;
    IterationTrace partial_;
};

/// Runs the alternating obstacle iteration.
///
/// IncreasingFromSub (seed v0, a subsolution of L2 with v0 = g on the boundary):
///   u0 = lower obstacle solve (L1, obstacle v0, data f), then for n >= 1
///   v_n = upper obstacle solve (L2, obstacle u_{n-1}, data g),
///   u_n = lower obstacle solve (L1, obstacle v_n, data f).
/// DecreasingFromSuper (seed u0, a supersolution of L1 with u0 = f on the boundary):
///   v0 = upper obstacle solve (L2, u0, g), then
///   u_n = lower obstacle solve (L1, v_{n-1}, f), v_n = upper obstacle solve (L2, u_n, g).
///
/// The seed must match its boundary data within seed_tol; its boundary
/// entries are then overwritten with the data so every iterate is pinned exactly.
/// Throws InfeasibleProblem if f < g somewhere on the boundary, RejectedSeed,
/// or InnerSolveFailed. Hitting max_outer returns a trace with converged = false.
IterationTrace iterate(const MembraneConfig& config);

struct MembraneResidual {
    /// sup_k |min(L1 u_k, u_k - v_k)| and the signed value where it is attained.
    double res_u = 0.0;
    double worst_u = 0.0;
    std::size_t worst_u_node = 0;
    /// sup_k |max(L2 v_k, v_k - u_k)| and the signed value where it is attained.
    double res_v = 0.0;
    double worst_v = 0.0;
    std::size_t worst_v_node = 0;
    /// sup over boundary nodes of |u - f| and |v - g|.
    double boundary_u = 0.0;
    double boundary_v = 0.0;

    bool passes(double tol) const noexcept {
        return res_u <= tol && res_v <= tol && boundary_u <= tol && boundary_v <= tol;
    }
};

MembraneResidual two_membrane_residual(const ScalarField& u, const ScalarField& v,
                                       const OperatorSpec& upper, const OperatorSpec& lower,
                                       const ScalarField& boundary_f,
                                       const ScalarField& boundary_g);

class DemoFailed : public Error {
public:
    using Error::Error;
};

/// The two solution pairs of the 1D non-uniqueness example on (0,1):
/// L1 = -u'' + 10, L2 = -v'' - 2, f = 1, g = 0.
struct DemoResult {
    GridPtr grid;
    OperatorSpec upper;
    OperatorSpec lower;
    /// u solves L1 u = 0, v is the upper obstacle solution under it.
    ScalarField hat_u;
    ScalarField hat_v;
    /// v solves L2 v = 0, u is the lower obstacle solution over it.
    ScalarField tilde_u;
    ScalarField tilde_v;
    MembraneResidual hat_residual;
    MembraneResidual tilde_residual;
    /// sup |hat_u - tilde_u|
    double separation = 0.0;
};

/// Builds both pairs on an n-node grid and audits them at `audit_tol`.
/// Throws DemoFailed if either pair fails the audit or the separation is below 0.5 - 1e-3.
DemoResult nonuniqueness_demo(std::size_t n = 201, double audit_tol = 1e-6,
                              const InnerSolverSettings& inner = {});

}  // namespace membranes
