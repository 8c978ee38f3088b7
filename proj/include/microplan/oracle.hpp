#pragma once

// Brute-force reference implementations used by tests and the acceptance
// suite. Deliberately shares no model-building code with formulation or the
// robust engine: dispatch problems are written directly from the constraint
// equations with tangent-cut (Kelley) outer approximation of the exact cones,
// and the discrete searches are exhaustive enumerations.

#include <string>
#include <vector>

#include "microplan/solver.hpp"
#include "microplan/types.hpp"

namespace microplan::oracle {

/// Independent NPV accumulation used to cross-check core npv().
double reference_npv(const NetworkCase& c, const InvestmentPlan& plan,
                     const std::vector<OperationalState>& dispatches);

enum class DispatchMode { plain, min_shed, min_thermal_excess };

struct DispatchResult {
    bool feasible = false;
    double opex = 0.0;            // discounted, a- and b-parts (plain mode)
    double shed_total = 0.0;      // min_shed mode objective
    double thermal_excess = 0.0;  // sum max(0, p^2+q^2-cap^2) at the optimum
};

/// Continuous operational problem for a fixed plan and fixed loads, solved to
/// near-exact SOC feasibility by iterating tangent cuts. Periods decouple and
/// are solved separately.
DispatchResult solve_dispatch(const NetworkCase& c, const InvestmentPlan& plan, const Scenario& s,
                              DispatchMode mode);

struct DesignResult {
    bool feasible = false;
    InvestmentPlan plan;
    double objective = 0.0;
    long designs_checked = 0;
    long designs_dispatched = 0;
};

/// Exhaustive search over all symmetric, monotone one-year designs.
/// Guards: n <= 4, Y == 1, max_parallel <= 2.
DesignResult enumerate_designs(const NetworkCase& c);

struct VertexScenario {
    Scenario scenario;
    double residual = 0.0;
};

struct VertexAdversaryResult {
    double worst_residual = 0.0;
    Scenario worst_scenario;
    std::vector<VertexScenario> problematic;
    long vertices = 0;
};

/// Corrective residual at every vertex of the box (2^k vertices, k <= 20),
/// iterated hi-first so ties keep the hi-most vertex.
VertexAdversaryResult enumerate_vertex_adversary(const NetworkCase& c, const InvestmentPlan& plan,
                                                 const UncertaintyBox& box,
                                                 TargetMask::Family family, double tol = 1e-6);

struct ResidualEntry {
    std::string family;
    double max_residual = 0.0;
    long violations = 0;  // entries beyond 1e-6
};

/// Direct arithmetic evaluation of every constraint family on a candidate
/// solution; SOC rows evaluated exactly, not through any approximation.
std::vector<ResidualEntry> evaluate_constraints(const NetworkCase& c, const InvestmentPlan& plan,
                                                const std::vector<OperationalState>& dispatches,
                                                const std::vector<Scenario>& scenarios = {});

}  // namespace microplan::oracle
