#pragma once

#include <vector>

#include "microplan/cone.hpp"
#include "microplan/milp.hpp"
#include "microplan/types.hpp"

namespace microplan {

/// Activation constants for the level-indexed loss and voltage-drop windows,
/// plus the cap on squared current. All derived from variable bounds, so a
/// deactivated window is satisfiable for every in-bound point.
struct BigMSet {
    double m1 = 0.0;      // loss windows
    double m2 = 0.0;      // voltage-drop windows
    double psi_max = 0.0; // upper bound on squared current
};

BigMSet compute_big_m(const NetworkCase& c);

/// Full planning MILP for the deterministic loads (single scenario).
MilpInstance build_deterministic(const NetworkCase& c, const ConeApproxConfig& cfg);

/// Planning MILP with one operational block per scenario, shared investment
/// variables, and operating cost averaged over equiprobable scenarios.
MilpInstance build_main_problem(const NetworkCase& c, const std::vector<Scenario>& scenarios,
                                const ConeApproxConfig& cfg);

// Fixed-plan subproblem builders used by the robust engine. Variable names
// follow the shared family(scenario,indices) scheme; scenario index is 0.

/// Load variables range over the box, balance carries shedding, objective
/// maximizes masked shed (emitted negated: the instance minimizes) plus
/// `load_bias` per load unit (subtract bias * loads from the solved objective).
MilpInstance build_generation_adversarial(const NetworkCase& c, const InvestmentPlan& plan,
                                          const UncertaintyBox& box, const TargetMask& mask,
                                          const ConeApproxConfig& cfg, double load_bias);

/// Loads fixed to `s`; minimizes total active+reactive shed.
MilpInstance build_generation_corrective(const NetworkCase& c, const InvestmentPlan& plan,
                                         const Scenario& s, const ConeApproxConfig& cfg);

/// Loads fixed; thermal caps relaxed with per-line slack; minimizes the slack sum.
MilpInstance build_thermal_corrective(const NetworkCase& c, const InvestmentPlan& plan,
                                      const Scenario& s, const ConeApproxConfig& cfg);

/// Single-period dispatch model with the thermal caps removed (adversarial
/// thermal probes); the caller installs the objective on flow variables.
MilpInstance build_thermal_probe(const NetworkCase& c, const InvestmentPlan& plan,
                                 const Scenario& s, int period, const ConeApproxConfig& cfg);

// Name-map helpers shared by extraction and the robust engine.
namespace vars {
std::string line_count(int i, int j, int y);
std::string line_built(int i, int j, int y);
std::string line_level(int i, int j, int k, int y);
std::string gen_built(int i, int y);
std::string gen_p(int s, int i, int g);
std::string gen_q(int s, int i, int g);
std::string volt2(int s, int i, int g);
std::string cur2(int s, int i, int j, int g);   // i < j
std::string flow_p(int s, int i, int j, int g); // directed
std::string flow_q(int s, int i, int j, int g);
std::string shed_p(int s, int i, int g);
std::string shed_q(int s, int i, int g);
std::string load_p(int s, int i, int g);
std::string load_q(int s, int i, int g);
std::string thermal_slack(int s, int i, int j, int g);
}  // namespace vars

}  // namespace microplan
