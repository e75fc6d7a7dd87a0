#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "membranes/iteration.hpp"

namespace membranes {

/// Pass/fail thresholds for every audit. Check logic never hard-codes them.
struct AuditThresholds {
    double complementarity = 1e-6;
    double monotonicity = 1e-8;
    double ordering = 1e-8;
    double boundary = 0.0;
    double cross_solver = 1e-6;
    double refinement_ratio_min = 3.5;
    double refinement_ratio_max = 4.5;
    /// Minimum sup |hat_u - tilde_u| of the non-uniqueness demo.
    double separation = 0.5 - 1e-3;
};

struct AuditReport {
    std::string name;
    bool passed = false;
    /// Inputs did not allow a verdict (e.g. a backend failed to converge); passed is false.
    bool inconclusive = false;
    double worst_value = 0.0;
    std::size_t worst_node = 0;
    double tolerance = 0.0;
};

/// Worst signed complementarity defect over interior nodes: min(L u, u - phi)
/// from below, max(L v, v - psi) from above. Passes when |worst| <= tol.
/// Throws PreconditionError for a non-converged report.
AuditReport audit_complementarity(const SolveReport& report, const ObstacleProblem& problem,
                                  const AuditThresholds& thresholds);

/// Three reports over every step of the trace, recomputed from the stored fields:
///   "monotonicity"     - most negative increment in the monotone direction,
///   "ordering"         - min (u_n - v_n),
///   "boundary_pinning" - max deviation from f and g on boundary nodes.
std::vector<AuditReport> audit_trace(const IterationTrace& trace, const ScalarField& boundary_f,
                                     const ScalarField& boundary_g,
                                     const AuditThresholds& thresholds);

/// Solves a p = 2 problem with PSOR and with the viscosity backend
/// (alpha = 0, beta = 1) and reports their sup distance. Accepts either form
/// of the operator; anything else throws PreconditionError.
AuditReport audit_cross_solver(const ObstacleProblem& problem, const AuditThresholds& thresholds,
                               const InnerSolverSettings& settings = {});

struct RefinementRow {
    std::size_t n = 0;
    double spacing = 0.0;
    double error = 0.0;
    /// error of the previous row over this one; 0 for the first row.
    double ratio = 0.0;
};

/// Free (no obstacle) solves against a closed-form reference: boundary data
/// are sampled from the reference, errors are sup norms over all nodes.
std::vector<RefinementRow> grid_refinement_study(const OperatorTemplate& op,
                                                 const Expression& reference,
                                                 std::span<const std::size_t> resolutions,
                                                 int dim = 1,
                                                 const InnerSolverSettings& settings = {});

/// Passes when every consecutive ratio lies in [ratio_min, ratio_max].
AuditReport audit_refinement(const std::vector<RefinementRow>& rows,
                             const AuditThresholds& thresholds);

/// Both pairs of the demo pass two_membrane_residual and are separated.
std::vector<AuditReport> audit_demo(const DemoResult& demo, const AuditThresholds& thresholds);

}  // namespace membranes
