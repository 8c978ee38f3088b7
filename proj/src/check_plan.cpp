#include "microplan/check_plan.hpp"

#include <algorithm>
#include <cmath>

#include "microplan/milp.hpp"

namespace microplan {

double ViolationReport::max_magnitude() const {
    double m = 0.0;
    for (const auto& v : violations) m = std::max(m, v.magnitude);
    return m;
}

double ViolationReport::max_soc_gap() const {
    double m = 0.0;
    for (const auto& g : soc_gaps) m = std::max(m, g.gap);
    return m;
}

std::vector<std::string> ViolationReport::families() const {
    std::vector<std::string> out;
    for (const auto& v : violations)
        if (std::find(out.begin(), out.end(), v.family) == out.end()) out.push_back(v.family);
    return out;
}

ViolationReport check_plan(const NetworkCase& c, const InvestmentPlan& plan,
                           const std::vector<OperationalState>& dispatches,
                           const std::vector<Scenario>& scenarios, const CheckTolerances& tol) {
    if (plan.n() != c.n() || plan.years() != c.years())
        throw ModelError("check_plan: plan dimensions do not match the case");
    std::vector<Scenario> det;
    if (scenarios.empty()) det.push_back(deterministic_scenario(c));
    const std::vector<Scenario>& loads = scenarios.empty() ? det : scenarios;
    if (loads.size() != dispatches.size())
        throw ModelError("check_plan: one dispatch per scenario required");

    ViolationReport rep;
    auto flag = [&rep](const char* family, std::string where, double mag) {
        rep.violations.push_back({family, std::move(where), mag});
    };

    for (const auto& msg : plan.invariant_violations()) flag("plan_invariants", msg, 0.0);

    // Connectivity: every node reachable from the first through built corridors.
    for (int y = 1; y <= c.years() && c.n() > 1; ++y) {
        std::vector<int> seen(c.n(), 0), stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < c.n(); ++j)
                if (j != i && !seen[j] && plan.line_built(y, i, j)) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
        }
        for (int i = 0; i < c.n(); ++i)
            if (!seen[i]) flag("connectivity", key("isolated_node", {i, y}), 1.0);
    }

    const auto& el = c.electrical;
    const double tanphi = el.tan_phi();
    const double vlo2 = el.v_min * el.v_min, vhi2 = el.v_max * el.v_max;
    const double ta = tol.hard_abs;

    for (size_t sc = 0; sc < dispatches.size(); ++sc) {
        const int s = static_cast<int>(sc);
        const auto& st = dispatches[sc];
        const auto& ld = loads[sc];
        if (st.n() != c.n() || st.total_periods() != c.total_periods())
            throw ModelError("check_plan: dispatch dimensions do not match the case");
        for (int g = 0; g < c.total_periods(); ++g) {
            const int y = c.year_of(g);
            for (int i = 0; i < c.n(); ++i) {
                const double pg = st.p_gen(i, g), qg = st.q_gen(i, g);
                const double cap_hi = plan.gen_built(y, i) ? el.p_gen_max : 0.0;
                const double cap_lo = plan.gen_built(y, i) ? el.p_gen_min : 0.0;
                if (pg > cap_hi + ta) flag("gen_capacity", key("gen_p_hi", {s, i, g}), pg - cap_hi);
                if (pg < cap_lo - ta) flag("gen_capacity", key("gen_p_lo", {s, i, g}), cap_lo - pg);
                if (qg > tanphi * pg + ta)
                    flag("gen_reactive", key("gen_q_hi", {s, i, g}), qg - tanphi * pg);
                if (qg < -tanphi * pg - ta)
                    flag("gen_reactive", key("gen_q_lo", {s, i, g}), -tanphi * pg - qg);

                double sump = 0.0, sumq = 0.0;
                for (int j = 0; j < c.n(); ++j) {
                    if (j == i) continue;
                    sump += st.p_flow(i, j, g);
                    sumq += st.q_flow(i, j, g);
                }
                const double bp = pg - ld.p(i, g) + st.p_shed(i, g) - sump;
                const double bq = qg - ld.q(i, g) + st.q_shed(i, g) - sumq;
                if (std::abs(bp) > ta) flag("balance", key("balance_p", {s, i, g}), std::abs(bp));
                if (std::abs(bq) > ta) flag("balance", key("balance_q", {s, i, g}), std::abs(bq));

                const double nu = st.nu(i, g);
                if (nu < vlo2 - ta) flag("voltage_bounds", key("volt_lo", {s, i, g}), vlo2 - nu);
                if (nu > vhi2 + ta) flag("voltage_bounds", key("volt_hi", {s, i, g}), nu - vhi2);
                if (st.p_shed(i, g) < -ta) flag("shed_sign", key("shed_p", {s, i, g}), -st.p_shed(i, g));
                if (st.q_shed(i, g) < -ta) flag("shed_sign", key("shed_q", {s, i, g}), -st.q_shed(i, g));
            }

            for (int i = 0; i < c.n(); ++i)
                for (int j = i + 1; j < c.n(); ++j) {
                    const int count = plan.line_count(y, i, j);
                    const double d = c.distance(i, j);
                    const double pij = st.p_flow(i, j, g), pji = st.p_flow(j, i, g);
                    const double qij = st.q_flow(i, j, g), qji = st.q_flow(j, i, g);
                    const double psi = st.psi(i, j, g);

                    if (psi < -ta) flag("current_sign", key("cur2", {s, i, j, g}), -psi);
                    if (pij + pji < -ta)
                        flag("loss_sign", key("loss_pos_p", {s, i, j, g}), -(pij + pji));
                    if (qij + qji < -ta)
                        flag("loss_sign", key("loss_pos_q", {s, i, j, g}), -(qij + qji));

                    if (count >= 1) {
                        const double lp = pij + pji - el.r * d / count * psi;
                        const double lq = qij + qji - el.x * d / count * psi;
                        if (std::abs(lp) > ta) flag("losses", key("loss_p", {s, i, j, g}), std::abs(lp));
                        if (std::abs(lq) > ta) flag("losses", key("loss_q", {s, i, j, g}), std::abs(lq));
                        const double drop = st.nu(j, g) - st.nu(i, g) +
                                            2.0 * d * (el.r * pij + el.x * qij) / count -
                                            d * d * (el.r * el.r + el.x * el.x) /
                                                (double(count) * count) * psi;
                        if (std::abs(drop) > ta)
                            flag("voltage_drop", key("vdrop", {s, i, j, g}), std::abs(drop));
                    }

                    // Exact SOC forms: power-current cone gaps inside the
                    // allowance are informational; thermal beyond it is hard.
                    // A (1+eps) norm relaxation admits squared excesses of
                    // eps(2+eps) relative to u^2 = ((psi+nu)/2)^2 resp. cap^2.
                    const double sq_allow = tol.cone_allowance * (2.0 + tol.cone_allowance);
                    for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                        const double pa = st.p_flow(a, b, g), qa = st.q_flow(a, b, g);
                        const double u = 0.5 * (psi + st.nu(a, g));
                        const double gap = pa * pa + qa * qa - psi * st.nu(a, g);
                        if (gap > ta) {
                            rep.soc_gaps.push_back({s, a, b, g, gap});
                            if (gap > sq_allow * u * u + ta)
                                flag("soc_relaxation", key("soc", {s, a, b, g}), gap);
                        }
                        const double cap = count * el.s_rating;
                        const double therm = pa * pa + qa * qa - cap * cap;
                        if (therm > sq_allow * cap * cap + ta)
                            flag("thermal", key("thermal", {s, a, b, g}), therm);

                        const double tant = std::tan(el.theta_delta);
                        const double lhs_a = el.r * d * (qa + tant * pa) + el.x * d * (tant * qa - pa);
                        const double lhs_b = el.x * d * (pa + tant * qa) + el.r * d * (tant * pa - qa);
                        const double rhs = tant * st.nu(a, g) * count;
                        if (lhs_a > rhs + ta) flag("angle", key("angle_a", {s, a, b, g}), lhs_a - rhs);
                        if (lhs_b > rhs + ta) flag("angle", key("angle_b", {s, a, b, g}), lhs_b - rhs);
                    }
                }
        }
    }
    return rep;
}

}  // namespace microplan
