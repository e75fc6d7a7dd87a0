#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "membranes/iteration.hpp"
#include "membranes/verify.hpp"

namespace membranes {

/// {"converged", "iterations", "final_residual", "contact_count"}
std::string solve_report_json(const SolveReport& report);

/// JSON array of {"name", "passed", "inconclusive", "worst_value", "worst_node", "tolerance"}.
std::string audit_reports_json(const std::vector<AuditReport>& reports);

/// {"mode", "steps", "converged", "final_res_u", "final_res_v",
///  "sup_separation_if_demo", "warnings"}; separation is null unless given.
std::string trace_summary_json(const IterationTrace& trace,
                               std::optional<double> separation = std::nullopt);

/// Header `n,sup_du,sup_dv,min_gap,worst_monotonicity,res_u,res_v,energy_u,energy_v`;
/// energy cells are empty for non-variational operators.
void write_trace_csv(std::ostream& out, const IterationTrace& trace);

/// Header `n,h,error,ratio`.
void write_refinement_csv(std::ostream& out, const std::vector<RefinementRow>& rows);

}  // namespace membranes
