#include "membranes/serialization.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "json.hpp"

namespace membranes {

namespace {

nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

std::string solve_report_json(const SolveReport& report) {
    nlohmann::ordered_json j;
    j["converged"] = report.converged;
    j["iterations"] = report.iterations;
    j["final_residual"] = number_or_null(report.final_residual);
    j["contact_count"] = report.contact_set.size();
    return j.dump(2) + "\n";
}

std::string audit_reports_json(const std::vector<AuditReport>& reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const AuditReport& r : reports) {
        nlohmann::ordered_json j;
        j["name"] = r.name;
        j["passed"] = r.passed;
        j["inconclusive"] = r.inconclusive;
        j["worst_value"] = number_or_null(r.worst_value);
        j["worst_node"] = r.worst_node;
        j["tolerance"] = r.tolerance;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string trace_summary_json(const IterationTrace& trace, std::optional<double> separation) {
    nlohmann::ordered_json j;
    j["mode"] = std::string(to_string(trace.mode));
    j["steps"] = trace.outer_steps();
    j["converged"] = trace.converged;
    j["final_res_u"] = trace.steps.empty() ? nlohmann::json(nullptr) : number_or_null(trace.last().res_u);
    j["final_res_v"] = trace.steps.empty() ? nlohmann::json(nullptr) : number_or_null(trace.last().res_v);
    j["sup_separation_if_demo"] = separation ? number_or_null(*separation) : nlohmann::json(nullptr);
    j["warnings"] = trace.warnings;
    return j.dump(2) + "\n";
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
    out << "n,sup_du,sup_dv,min_gap,worst_monotonicity,res_u,res_v,energy_u,energy_v\n";
    out << std::setprecision(17);
    for (const StepRecord& s : trace.steps) {
        out << s.n << ',' << s.sup_du << ',' << s.sup_dv << ',' << s.min_gap << ','
            << s.worst_monotonicity << ',' << s.res_u << ',' << s.res_v << ',';
        if (s.energy_u) out << *s.energy_u;
        out << ',';
        if (s.energy_v) out << *s.energy_v;
        out << '\n';
    }
}

void write_refinement_csv(std::ostream& out, const std::vector<RefinementRow>& rows) {
    out << "n,h,error,ratio\n" << std::setprecision(17);
    for (const RefinementRow& r : rows) {
        out << r.n << ',' << r.spacing << ',' << r.error << ',';
        if (r.ratio > 0.0) out << r.ratio;
        out << '\n';
    }
}

}  // namespace membranes
