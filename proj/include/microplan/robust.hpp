#pragma once

#include <vector>

#include "microplan/cone.hpp"
#include "microplan/npv.hpp"
#include "microplan/solver.hpp"
#include "microplan/types.hpp"

namespace microplan {

struct RobustOptions {
    ConeApproxConfig cone;
    SolveOptions solve;
    double tol = 1e-6;        // problematic threshold, load units
    int max_iterations = 20;
    double load_bias = 1e-9;  // objective nudge that lands free load variables on box bounds
    int assignment_cap = 12;  // max 2^cap load-bound assignments per thermal period
};

/// Scenario found by an adversarial problem plus its (maximized) objective and
/// the violated-constraint set at the optimizer.
struct AdversaryOutcome {
    Scenario scenario;
    double objective = 0.0;
    std::vector<std::array<int, 3>> violated;  // gen: {i,g,-1}; thermal: {i,j,g}
};

/// Maximizes masked shedding over the box with the plan fixed (investments
/// constant, dispatch and loads free, balance relaxed by shedding). The
/// returned scenario is snapped to box bounds coordinatewise (ties toward hi).
AdversaryOutcome adversarial_generation(const NetworkCase& c, const InvestmentPlan& plan,
                                        const UncertaintyBox& box, const TargetMask& mask,
                                        const RobustOptions& opt = {});

/// Maximizes masked thermal excess p^2+q^2-(count*S)^2 with the rating rows
/// removed. Solved by enumerating bound assignments of the masked periods'
/// load coordinates (periods decouple once the plan is fixed) and maximizing
/// linear flow directions per assignment; may return a negative objective.
AdversaryOutcome adversarial_thermal(const NetworkCase& c, const InvestmentPlan& plan,
                                     const UncertaintyBox& box, const TargetMask& mask,
                                     const RobustOptions& opt = {});

/// Minimum total shedding once the scenario is fixed; zero means the scenario
/// is not problematic.
double corrective_generation(const NetworkCase& c, const InvestmentPlan& plan, const Scenario& s,
                             const RobustOptions& opt = {});

/// Minimum thermal infeasibility once the scenario is fixed (ratings relaxed
/// with slack); the reported residual is the squared excess
/// sum(max(0, p^2+q^2-cap^2)) at the optimum.
double corrective_thermal(const NetworkCase& c, const InvestmentPlan& plan, const Scenario& s,
                          const RobustOptions& opt = {});

struct ProblematicScenario {
    Scenario scenario;
    double residual = 0.0;
};

/// Inner loop of the robust algorithm for a fixed plan: every singleton
/// target, the violated-set re-solve, corrective filtering, fingerprint
/// de-duplication. Returns the problematic scenarios with their residuals.
std::vector<ProblematicScenario> adversary_sweep(const NetworkCase& c, const InvestmentPlan& plan,
                                                 const UncertaintyBox& box,
                                                 const RobustOptions& opt = {});

struct IterationAudit {
    int iteration = 0;
    double main_objective = 0.0;
    int scenarios_total = 0;
    int scenarios_added = 0;
    double worst_residual = 0.0;
};

struct RobustResult {
    bool converged = false;
    InvestmentPlan plan;
    std::vector<OperationalState> states;  // one per protected scenario
    MoneyBreakdown money;
    std::vector<Scenario> scenarios;       // the protection set S
    std::vector<double> residuals;         // corrective residual per scenario at admission
    int iterations = 0;
    std::vector<IterationAudit> audit;
};

/// Full outer loop: plan on S (starting from the deterministic scenario),
/// sweep adversaries against the fixed plan, grow S, repeat until the sweep
/// comes back clean or the iteration cap is hit (converged = false then).
RobustResult robust_plan(const NetworkCase& c, const UncertaintyBox& box,
                         const RobustOptions& opt = {});

}  // namespace microplan
