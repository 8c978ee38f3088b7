#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "microplan/milp.hpp"
#include "microplan/npv.hpp"
#include "microplan/types.hpp"

namespace microplan {

/// Raised when the requested backend is unavailable or fails internally.
class SolveError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SolveOptions {
    std::string backend = "builtin";
    double mip_gap = 1e-6;        // relative
    double time_limit = 300.0;    // seconds
    int threads = 1;              // accepted for contract compatibility; builtin is single-threaded
    int verbosity = 0;
    long node_limit = 2'000'000;
    double int_tol = 1e-6;
    double feas_tol = 1e-6;
};

enum class SolveStatus { optimal, feasible, infeasible, unbounded, time_limit };

const char* to_string(SolveStatus s);

struct MilpSolution {
    SolveStatus status = SolveStatus::infeasible;
    double objective = 0.0;
    std::vector<double> values;   // per variable id of the instance
    double gap = 0.0;             // relative
    double solve_time = 0.0;      // seconds
    long nodes = 0;
    long iterations = 0;
    std::string log;              // per-solve text artifact

    bool usable() const { return status == SolveStatus::optimal || status == SolveStatus::feasible; }
};

/// Solves `instance` with the backend selected in `opts`. Deterministic for
/// the builtin backend. Throws SolveError for unknown backends.
MilpSolution solve(const MilpInstance& instance, const SolveOptions& opts = {});

/// Everything extract() recovers from a planning solve: the plan, one dispatch
/// per scenario, and the money breakdown cross-checked against the solver
/// objective.
struct ExtractedSolution {
    InvestmentPlan plan;
    std::vector<OperationalState> states;  // one per scenario
    MoneyBreakdown money;
};

/// Recovers typed results from a planning-model solution. Integer values are
/// rounded only within opts.int_tol; larger residuals raise ModelError (they
/// indicate a formulation bug, not user error). The recomputed NPV must match
/// the solver objective to 1e-6 relative.
ExtractedSolution extract(const MilpInstance& instance, const MilpSolution& solution,
                          const NetworkCase& c, int num_scenarios = 1,
                          const SolveOptions& opts = {});

}  // namespace microplan
