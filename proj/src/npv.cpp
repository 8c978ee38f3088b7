#include "microplan/npv.hpp"

#include <cmath>

namespace microplan {

namespace {

void check_shapes(const NetworkCase& c, const InvestmentPlan& plan,
                  const OperationalState& dispatch) {
    if (plan.n() != c.n() || plan.years() != c.years())
        throw ModelError("npv: plan dimensions do not match the case");
    if (dispatch.n() != c.n() || dispatch.total_periods() != c.total_periods())
        throw ModelError("npv: dispatch dimensions do not match the case");
}

}  // namespace

MoneyBreakdown npv_over_scenarios(const NetworkCase& c, const InvestmentPlan& plan,
                                  const std::vector<OperationalState>& dispatches) {
    if (dispatches.empty()) throw ModelError("npv: at least one dispatch required");
    for (const auto& d : dispatches) check_shapes(c, plan, d);

    const int Y = c.years();
    MoneyBreakdown m;
    m.capex_dist.assign(Y, 0.0);
    m.capex_gen.assign(Y, 0.0);
    m.opex.assign(Y, 0.0);

    const int ppy = c.periods_per_year();
    for (int y = 1; y <= Y; ++y) {
        for (int i = 0; i < c.n(); ++i) {
            for (int j = i + 1; j < c.n(); ++j) {
                const int dg = plan.line_count(y, i, j) - plan.line_count(y - 1, i, j);
                const int dw = (plan.line_built(y, i, j) ? 1 : 0) - (plan.line_built(y - 1, i, j) ? 1 : 0);
                m.capex_dist[y - 1] += dg * c.distance(i, j) * c.cost.conductor_per_km +
                                       dw * c.distance(i, j) * c.cost.pole_per_km;
            }
            m.capex_gen[y - 1] +=
                ((plan.gen_built(y, i) ? 1 : 0) - (plan.gen_built(y - 1, i) ? 1 : 0)) *
                c.cost.generator;
        }
        double opex = 0.0;
        for (int g = (y - 1) * ppy; g < y * ppy; ++g) {
            const double w = c.period_weight(g);
            for (int i = 0; i < c.n(); ++i) {
                double mean_pg = 0.0;
                for (const auto& d : dispatches) mean_pg += d.p_gen(i, g);
                mean_pg /= static_cast<double>(dispatches.size());
                opex += w * ((plan.gen_built(y, i) ? c.cost.gen_hourly_a : 0.0) +
                             c.cost.gen_marginal_b * mean_pg);
            }
        }
        m.opex[y - 1] = opex;
    }

    m.npv = 0.0;
    for (int y = 1; y <= Y; ++y)
        m.npv += (m.capex_dist[y - 1] + m.capex_gen[y - 1] + m.opex[y - 1]) /
                 std::pow(1.0 + c.discount_rate, y);
    return m;
}

MoneyBreakdown npv(const NetworkCase& c, const InvestmentPlan& plan,
                   const OperationalState& dispatch) {
    return npv_over_scenarios(c, plan, {dispatch});
}

}  // namespace microplan
