#include <cmath>

#include "microplan/formulation.hpp"
#include "microplan/npv.hpp"
#include "microplan/solver.hpp"

namespace microplan {

namespace {

long checked_round(double v, double tol, const std::string& what) {
    const double r = std::round(v);
    if (std::abs(v - r) > tol)
        throw ModelError("extract: " + what + " = " + std::to_string(v) +
                         " is not integral within tolerance " + std::to_string(tol));
    return static_cast<long>(r);
}

}  // namespace

ExtractedSolution extract(const MilpInstance& instance, const MilpSolution& solution,
                          const NetworkCase& c, int num_scenarios, const SolveOptions& opts) {
    if (!solution.usable())
        throw ModelError("extract: solution status is not optimal/feasible");
    if (static_cast<int>(solution.values.size()) != instance.num_vars())
        throw ModelError("extract: value vector does not match the instance");

    const auto& v = solution.values;
    auto value = [&](const std::string& name) { return v[instance.var_id(name)]; };

    ExtractedSolution out;
    out.plan = InvestmentPlan(c.n(), c.years(), c.electrical.max_parallel);
    for (int y = 1; y <= c.years(); ++y) {
        for (int i = 0; i < c.n(); ++i) {
            out.plan.set_gen(y, i, checked_round(value(vars::gen_built(i, y)), opts.int_tol,
                                                 vars::gen_built(i, y)) != 0);
            for (int j = i + 1; j < c.n(); ++j) {
                const long count = checked_round(value(vars::line_count(i, j, y)), opts.int_tol,
                                                 vars::line_count(i, j, y));
                out.plan.set_line_count(y, i, j, static_cast<int>(count));
                const long built = checked_round(value(vars::line_built(i, j, y)), opts.int_tol,
                                                 vars::line_built(i, j, y));
                if ((count >= 1) != (built == 1))
                    throw ModelError("extract: corridor indicator inconsistent with line count at " +
                                     vars::line_built(i, j, y));
                for (int k = 1; k <= c.electrical.max_parallel; ++k) {
                    const long level = checked_round(value(vars::line_level(i, j, k, y)),
                                                     opts.int_tol, vars::line_level(i, j, k, y));
                    if (level != (count >= k ? 1 : 0))
                        throw ModelError("extract: level indicator inconsistent at " +
                                         vars::line_level(i, j, k, y));
                }
            }
        }
    }
    const auto violations = out.plan.invariant_violations();
    if (!violations.empty())
        throw ModelError("extract: plan violates invariants: " + violations.front());

    for (int s = 0; s < num_scenarios; ++s) {
        OperationalState st(c.n(), c.total_periods());
        for (int g = 0; g < c.total_periods(); ++g) {
            for (int i = 0; i < c.n(); ++i) {
                st.p_gen(i, g) = value(vars::gen_p(s, i, g));
                st.q_gen(i, g) = value(vars::gen_q(s, i, g));
                st.nu(i, g) = value(vars::volt2(s, i, g));
                if (auto id = instance.find_var(vars::shed_p(s, i, g)))
                    st.p_shed(i, g) = v[*id];
                if (auto id = instance.find_var(vars::shed_q(s, i, g)))
                    st.q_shed(i, g) = v[*id];
                for (int j = 0; j < c.n(); ++j) {
                    if (j == i) continue;
                    st.p_flow(i, j, g) = value(vars::flow_p(s, i, j, g));
                    st.q_flow(i, j, g) = value(vars::flow_q(s, i, j, g));
                    if (j > i) st.psi(i, j, g) = value(vars::cur2(s, i, j, g));
                }
            }
        }
        out.states.push_back(std::move(st));
    }

    out.money = npv_over_scenarios(c, out.plan, out.states);
    const double obj = solution.objective;
    if (std::abs(out.money.npv - obj) > 1e-6 * (1.0 + std::abs(obj)))
        throw ModelError("extract: recomputed NPV " + std::to_string(out.money.npv) +
                         " does not match solver objective " + std::to_string(obj));
    return out;
}

}  // namespace microplan
