#pragma once

#include <string>
#include <vector>

#include "microplan/types.hpp"

namespace microplan {

struct CheckTolerances {
    double hard_abs = 1e-6;        // absolute slack on linear constraints
    double cone_allowance = 0.0;   // the accuracy_eps the solution was produced
                                   // with; SOC excursions a (1+eps) polyhedral
                                   // relaxation can admit are not violations
};

struct Violation {
    std::string family;
    std::string where;
    double magnitude = 0.0;
};

/// Positive part of p^2 + q^2 - psi*nu on a directed branch: slack the
/// power-current-voltage cone relaxation left open.
struct SocGap {
    int scenario = 0, from = 0, to = 0, period = 0;
    double gap = 0.0;
};

struct ViolationReport {
    std::vector<Violation> violations;  // hard violations only
    std::vector<SocGap> soc_gaps;       // informational relaxation gaps
    bool feasible() const { return violations.empty(); }
    double max_magnitude() const;
    double max_soc_gap() const;
    /// Distinct violated families, insertion order.
    std::vector<std::string> families() const;
};

/// Re-evaluates every model constraint on a candidate solution: plan
/// invariants, connectivity (graph search), generator capability, balance,
/// level-consistent losses and voltage drops, loss positivity, voltage bounds,
/// thermal ratings and angle constraints. SOC rows are checked in their exact
/// (non-relaxed) form; gaps within the configured cone allowance are reported
/// as soc_gaps, anything beyond becomes a hard violation.
/// `scenarios` supplies the loads per dispatch; when empty the deterministic
/// loads are used (dispatches.size() must then be 1).
ViolationReport check_plan(const NetworkCase& c, const InvestmentPlan& plan,
                           const std::vector<OperationalState>& dispatches,
                           const std::vector<Scenario>& scenarios = {},
                           const CheckTolerances& tol = {});

}  // namespace microplan
