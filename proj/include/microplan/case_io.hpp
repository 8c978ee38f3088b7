#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "microplan/npv.hpp"
#include "microplan/types.hpp"

namespace microplan {

/// Parses and validates a case document (JSON). Distances are computed from
/// node coordinates when the matrix is absent. Throws CaseFormatError with the
/// offending field path on any schema violation.
NetworkCase load_case(std::istream& in);
NetworkCase load_case_file(const std::string& path);

/// Plan document: investment plan + money breakdown + per-period dispatch.
/// write/read are inverses; serialization is deterministic (fixed key order).
void write_plan_document(std::ostream& out, const NetworkCase& c, const InvestmentPlan& plan,
                         const std::vector<OperationalState>& dispatches,
                         const MoneyBreakdown& money);
struct PlanDocument {
    InvestmentPlan plan;
    std::vector<OperationalState> dispatches;
    MoneyBreakdown money;
};
PlanDocument read_plan_document(std::istream& in);
PlanDocument read_plan_document_file(const std::string& path);

/// Scenario dump: one JSON record per line (origin, loads, corrective
/// residual); readable back for resumable runs and audits.
void write_scenario_record(std::ostream& out, const Scenario& s, double corrective_residual);
std::vector<Scenario> read_scenario_records(std::istream& in);
std::vector<Scenario> read_scenario_file(const std::string& path);

}  // namespace microplan
