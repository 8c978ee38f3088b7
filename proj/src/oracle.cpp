#include "microplan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "microplan/milp.hpp"

namespace microplan::oracle {

namespace {

struct Edge {
    int i, j;
};

std::vector<Edge> built_edges(const NetworkCase& c, const InvestmentPlan& plan, int y) {
    std::vector<Edge> out;
    for (int i = 0; i < c.n(); ++i)
        for (int j = i + 1; j < c.n(); ++j)
            if (plan.line_count(y, i, j) >= 1) out.push_back({i, j});
    return out;
}

/// One period of the operational problem, written straight from the balance,
/// loss, voltage and capability equations with the plan constant. The two SOC
/// families are enforced by a tangent-cut loop around the LP.
class PeriodLp {
  public:
    PeriodLp(const NetworkCase& c, const InvestmentPlan& plan, const Scenario& loads, int g,
             DispatchMode mode)
        : c_(c), plan_(plan), g_(g), mode_(mode), y_(c.year_of(g)), edges_(built_edges(c, plan, y_)) {
        build(loads);
    }

    bool solve(DispatchResult& agg) {
        SolveOptions opts;
        opts.mip_gap = 0.0;
        for (int round = 0; round < 60; ++round) {
            MilpSolution sol = microplan::solve(inst_, opts);
            if (sol.status == SolveStatus::infeasible) return false;
            if (!sol.usable()) throw ModelError("oracle dispatch LP failed: " +
                                                std::string(to_string(sol.status)));
            if (add_cuts(sol, round)) {
                last_ = std::move(sol);
                break;
            }
            last_ = std::move(sol);
        }
        accumulate(agg);
        return true;
    }

  private:
    const NetworkCase& c_;
    const InvestmentPlan& plan_;
    int g_, cuts_ = 0;
    DispatchMode mode_;
    int y_;
    std::vector<Edge> edges_;
    MilpInstance inst_;
    MilpSolution last_;

    int pg(int i) const { return inst_.var_id(key("og_pg", {i})); }
    int qg(int i) const { return inst_.var_id(key("og_qg", {i})); }
    int nu(int i) const { return inst_.var_id(key("og_nu", {i})); }
    int psi(int e) const { return inst_.var_id(key("og_psi", {e})); }
    int fp(int a, int b) const { return inst_.var_id(key("og_fp", {a, b})); }
    int fq(int a, int b) const { return inst_.var_id(key("og_fq", {a, b})); }
    int shp(int i) const { return inst_.var_id(key("og_shp", {i})); }
    int shq(int i) const { return inst_.var_id(key("og_shq", {i})); }
    int slack(int e) const { return inst_.var_id(key("og_slack", {e})); }

    void build(const Scenario& loads) {
        const auto& el = c_.electrical;
        const double tanphi = el.tan_phi();
        const double vlo2 = el.v_min * el.v_min, vhi2 = el.v_max * el.v_max;
        double fcap = el.max_parallel * el.s_rating;
        if (mode_ == DispatchMode::min_thermal_excess) {
            // rating relaxed: bound flows by the loads instead
            double tot = 0.0;
            for (int i = 0; i < c_.n(); ++i)
                tot += std::abs(loads.p(i, g_)) + std::abs(loads.q(i, g_));
            fcap += tot + 1.0;
        }
        const double psimax = fcap * fcap / vlo2;

        for (int i = 0; i < c_.n(); ++i) {
            const bool on = plan_.gen_built(y_, i);
            inst_.add_var(key("og_pg", {i}), VarKind::continuous, on ? el.p_gen_min : 0.0,
                          on ? el.p_gen_max : 0.0,
                          mode_ == DispatchMode::plain ? c_.cost.gen_marginal_b : 0.0);
            inst_.add_var(key("og_qg", {i}), VarKind::continuous, -tanphi * el.p_gen_max,
                          tanphi * el.p_gen_max);
            inst_.add_var(key("og_nu", {i}), VarKind::continuous, vlo2, vhi2);
            if (mode_ == DispatchMode::min_shed) {
                inst_.add_var(key("og_shp", {i}), VarKind::continuous, 0.0,
                              loads.p(i, g_) + c_.n() * fcap, 1.0);
                inst_.add_var(key("og_shq", {i}), VarKind::continuous, 0.0,
                              loads.q(i, g_) + c_.n() * fcap + tanphi * el.p_gen_max, 1.0);
            }
        }
        for (size_t e = 0; e < edges_.size(); ++e) {
            inst_.add_var(key("og_psi", {(int)e}), VarKind::continuous, 0.0, psimax);
            const auto [i, j] = edges_[e];
            for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                inst_.add_var(key("og_fp", {a, b}), VarKind::continuous, -fcap, fcap);
                inst_.add_var(key("og_fq", {a, b}), VarKind::continuous, -fcap, fcap);
            }
            if (mode_ == DispatchMode::min_thermal_excess)
                inst_.add_var(key("og_slack", {(int)e}), VarKind::continuous, 0.0, 2.0 * fcap, 1.0);
        }

        for (int i = 0; i < c_.n(); ++i) {
            // generator reactive envelope
            inst_.add_le(key("og_qhi", {i}), {{qg(i), 1.0}, {pg(i), -tanphi}}, 0.0);
            inst_.add_ge(key("og_qlo", {i}), {{qg(i), 1.0}, {pg(i), tanphi}}, 0.0);
            // nodal balance
            std::vector<std::pair<int, double>> bp{{pg(i), 1.0}};
            std::vector<std::pair<int, double>> bq{{qg(i), 1.0}};
            for (size_t e = 0; e < edges_.size(); ++e) {
                const auto [a, b] = edges_[e];
                if (a == i || b == i) {
                    const int other = a == i ? b : a;
                    bp.emplace_back(fp(i, other), -1.0);
                    bq.emplace_back(fq(i, other), -1.0);
                }
            }
            if (mode_ == DispatchMode::min_shed) {
                bp.emplace_back(shp(i), 1.0);
                bq.emplace_back(shq(i), 1.0);
            }
            inst_.add_eq(key("og_balp", {i}), std::move(bp), loads.p(i, g_));
            inst_.add_eq(key("og_balq", {i}), std::move(bq), loads.q(i, g_));
        }

        const double tant = std::tan(el.theta_delta);
        for (size_t e = 0; e < edges_.size(); ++e) {
            const auto [i, j] = edges_[e];
            const int count = plan_.line_count(y_, i, j);
            const double d = c_.distance(i, j);
            // exact loss identities and loss positivity
            inst_.add_eq(key("og_lossp", {(int)e}),
                         {{fp(i, j), 1.0}, {fp(j, i), 1.0}, {psi((int)e), -el.r * d / count}}, 0.0);
            inst_.add_eq(key("og_lossq", {(int)e}),
                         {{fq(i, j), 1.0}, {fq(j, i), 1.0}, {psi((int)e), -el.x * d / count}}, 0.0);
            inst_.add_ge(key("og_lpos_p", {(int)e}), {{fp(i, j), 1.0}, {fp(j, i), 1.0}}, 0.0);
            inst_.add_ge(key("og_lpos_q", {(int)e}), {{fq(i, j), 1.0}, {fq(j, i), 1.0}}, 0.0);
            // voltage drop
            inst_.add_eq(key("og_vdrop", {(int)e}),
                         {{nu(j), 1.0},
                          {nu(i), -1.0},
                          {fp(i, j), 2.0 * d * el.r / count},
                          {fq(i, j), 2.0 * d * el.x / count},
                          {psi((int)e), -d * d * (el.r * el.r + el.x * el.x) / (count * count)}},
                         0.0);
            // angle-difference rows, count constant
            for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                inst_.add_le(key("og_ang_a", {a, b}),
                             {{fq(a, b), el.r * d + el.x * d * tant},
                              {fp(a, b), el.r * d * tant - el.x * d},
                              {nu(a), -tant * count}},
                             0.0);
                inst_.add_le(key("og_ang_b", {a, b}),
                             {{fp(a, b), el.x * d + el.r * d * tant},
                              {fq(a, b), el.x * d * tant - el.r * d},
                              {nu(a), -tant * count}},
                             0.0);
            }
        }
    }

    /// Tangent cuts for the exact cones at the current point; returns true
    /// when everything is satisfied to 1e-9 relative.
    bool add_cuts(const MilpSolution& sol, int round) {
        const auto& el = c_.electrical;
        bool clean = true;
        for (size_t e = 0; e < edges_.size(); ++e) {
            const auto [i, j] = edges_[e];
            const int count = plan_.line_count(y_, i, j);
            const double cap = count * el.s_rating;
            for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                const double p = sol.values[fp(a, b)], q = sol.values[fq(a, b)];
                const double ps = sol.values[psi((int)e)], nv = sol.values[nu(a)];
                // current-voltage cone: ||(p, q, (psi-nu)/2)|| <= (psi+nu)/2
                const double v = 0.5 * (ps - nv), u = 0.5 * (ps + nv);
                const double norm = std::sqrt(p * p + q * q + v * v);
                if (norm > u * (1.0 + 1e-9) + 1e-12) {
                    clean = false;
                    const double np = p / norm, nq = q / norm, nv2 = v / norm;
                    // n.(p,q,(psi-nu)/2) <= (psi+nu)/2
                    inst_.add_le(key("og_cut20", {a, b, round, cuts_++}),
                                 {{fp(a, b), np},
                                  {fq(a, b), nq},
                                  {psi((int)e), 0.5 * nv2 - 0.5},
                                  {nu(a), -0.5 * nv2 - 0.5}},
                                 0.0);
                }
                // thermal: ||(p,q)|| <= cap (+ slack in corrective mode)
                const double fn = std::hypot(p, q);
                const double sl =
                    mode_ == DispatchMode::min_thermal_excess ? sol.values[slack((int)e)] : 0.0;
                if (mode_ != DispatchMode::min_thermal_excess && fn > cap * (1.0 + 1e-9) + 1e-12) {
                    clean = false;
                    inst_.add_le(key("og_cut23", {a, b, round, cuts_++}),
                                 {{fp(a, b), p / fn}, {fq(a, b), q / fn}}, cap);
                }
                if (mode_ == DispatchMode::min_thermal_excess && fn > cap + sl + 1e-9 * (1 + cap)) {
                    clean = false;
                    inst_.add_le(key("og_cut23s", {a, b, round, cuts_++}),
                                 {{fp(a, b), p / fn}, {fq(a, b), q / fn}, {slack((int)e), -1.0}},
                                 cap);
                }
            }
        }
        return clean;
    }

    void accumulate(DispatchResult& agg) {
        const auto& el = c_.electrical;
        const double disc = std::pow(1.0 + c_.discount_rate, -y_);
        const double w = c_.period_weight(g_);
        if (mode_ == DispatchMode::plain) {
            // marginal part only; the commitment part is plan arithmetic and
            // is accumulated by the caller
            double produced = 0.0;
            for (int i = 0; i < c_.n(); ++i) produced += last_.values[pg(i)];
            agg.opex += disc * w * c_.cost.gen_marginal_b * produced;
        } else if (mode_ == DispatchMode::min_shed) {
            for (int i = 0; i < c_.n(); ++i)
                agg.shed_total += last_.values[shp(i)] + last_.values[shq(i)];
        } else {
            for (size_t e = 0; e < edges_.size(); ++e) {
                const auto [i, j] = edges_[e];
                const double cap = plan_.line_count(y_, i, j) * el.s_rating;
                double worst = 0.0;  // one rating per line; worse orientation counts
                for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                    const double p = last_.values[fp(a, b)], q = last_.values[fq(a, b)];
                    worst = std::max(worst, p * p + q * q - cap * cap);
                }
                agg.thermal_excess += worst;
            }
        }
    }
};

bool connected(const NetworkCase& c, const InvestmentPlan& plan, int y) {
    if (c.n() == 1) return true;
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
    return std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; });
}

}  // namespace

double reference_npv(const NetworkCase& c, const InvestmentPlan& plan,
                     const std::vector<OperationalState>& dispatches) {
    double total = 0.0;
    for (int y = 1; y <= c.years(); ++y) {
        double cash = 0.0;
        for (int i = 0; i < c.n(); ++i) {
            for (int j = i + 1; j < c.n(); ++j) {
                cash += (plan.line_count(y, i, j) - plan.line_count(y - 1, i, j)) *
                        c.distance(i, j) * c.cost.conductor_per_km;
                cash += ((plan.line_built(y, i, j) ? 1 : 0) -
                         (plan.line_built(y - 1, i, j) ? 1 : 0)) *
                        c.distance(i, j) * c.cost.pole_per_km;
            }
            cash += ((plan.gen_built(y, i) ? 1 : 0) - (plan.gen_built(y - 1, i) ? 1 : 0)) *
                    c.cost.generator;
        }
        const int ppy = c.periods_per_year();
        for (int g = (y - 1) * ppy; g < y * ppy; ++g)
            for (int i = 0; i < c.n(); ++i) {
                double mean = 0.0;
                for (const auto& st : dispatches) mean += st.p_gen(i, g);
                mean /= static_cast<double>(dispatches.size());
                cash += c.period_weight(g) *
                        ((plan.gen_built(y, i) ? c.cost.gen_hourly_a : 0.0) +
                         c.cost.gen_marginal_b * mean);
            }
        total += cash * std::pow(1.0 + c.discount_rate, -static_cast<double>(y));
    }
    return total;
}

DispatchResult solve_dispatch(const NetworkCase& c, const InvestmentPlan& plan, const Scenario& s,
                              DispatchMode mode) {
    DispatchResult agg;
    agg.feasible = true;
    for (int g = 0; g < c.total_periods(); ++g) {
        PeriodLp lp(c, plan, s, g, mode);
        if (!lp.solve(agg)) {
            agg.feasible = false;
            return agg;
        }
    }
    return agg;
}

DesignResult enumerate_designs(const NetworkCase& c) {
    if (c.n() > 4 || c.years() != 1 || c.electrical.max_parallel > 2)
        throw ModelError("enumerate_designs: guard exceeded (needs n<=4, Y=1, max_parallel<=2)");

    DesignResult best;
    const int n = c.n();
    const int xi = c.electrical.max_parallel;
    std::vector<Edge> all;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) all.push_back({i, j});
    const int ne = static_cast<int>(all.size());

    const double peak = c.peak_total_load();
    const double disc1 = 1.0 / (1.0 + c.discount_rate);
    double opex_floor_cash = 0.0;  // b * total load, the cheapest possible fuel bill
    for (int g = 0; g < c.total_periods(); ++g) {
        double tot = 0.0;
        for (int i = 0; i < n; ++i) tot += c.p_load(i, g);
        opex_floor_cash += c.period_weight(g) * c.cost.gen_marginal_b * tot;
    }

    std::vector<int> gamma(ne, 0);
    const Scenario det = deterministic_scenario(c);
    const long sigma_combos = 1L << n;
    while (true) {
        for (long mask = 0; mask < sigma_combos; ++mask) {
            ++best.designs_checked;
            InvestmentPlan plan(n, 1, xi);
            for (int e = 0; e < ne; ++e) plan.set_line_count(1, all[e].i, all[e].j, gamma[e]);
            double cap_total = 0.0;
            int gens = 0;
            for (int i = 0; i < n; ++i)
                if ((mask >> i) & 1) {
                    plan.set_gen(1, i, true);
                    cap_total += c.electrical.p_gen_max;
                    ++gens;
                }
            if (cap_total < peak) continue;
            if (!connected(c, plan, 1)) continue;

            double capex = gens * c.cost.generator;
            for (int e = 0; e < ne; ++e)
                capex += c.distance(all[e].i, all[e].j) *
                         (gamma[e] * c.cost.conductor_per_km +
                          (gamma[e] >= 1 ? c.cost.pole_per_km : 0.0));
            double fixed_opex_cash = 0.0;
            for (int g = 0; g < c.total_periods(); ++g)
                fixed_opex_cash += c.period_weight(g) * c.cost.gen_hourly_a * gens;
            const double lower_bound = disc1 * (capex + fixed_opex_cash + opex_floor_cash);
            if (best.feasible && lower_bound >= best.objective - 1e-12) continue;

            ++best.designs_dispatched;
            DispatchResult dr = solve_dispatch(c, plan, det, DispatchMode::plain);
            if (!dr.feasible) continue;
            const double total = disc1 * (capex + fixed_opex_cash) + dr.opex;
            if (!best.feasible || total < best.objective - 1e-12) {
                best.feasible = true;
                best.objective = total;
                best.plan = plan;
            }
        }
        // gamma odometer
        int e = 0;
        for (; e < ne; ++e) {
            if (++gamma[e] <= xi) break;
            gamma[e] = 0;
        }
        if (e == ne) break;
    }
    return best;
}

VertexAdversaryResult enumerate_vertex_adversary(const NetworkCase& c, const InvestmentPlan& plan,
                                                 const UncertaintyBox& box,
                                                 TargetMask::Family family, double tol) {
    struct Coord {
        int node, g;
        bool reactive;
    };
    std::vector<Coord> coords;
    for (int i = 0; i < c.n(); ++i)
        for (int g = 0; g < c.total_periods(); ++g) {
            if (box.p_hi(i, g) - box.p_lo(i, g) > 1e-12) coords.push_back({i, g, false});
            if (box.q_hi(i, g) - box.q_lo(i, g) > 1e-12) coords.push_back({i, g, true});
        }
    if (coords.size() > 20)
        throw ModelError("enumerate_vertex_adversary: more than 20 uncertain coordinates");

    VertexAdversaryResult res;
    res.worst_scenario = deterministic_scenario(c);
    const uint64_t combos = 1ull << coords.size();
    res.vertices = static_cast<long>(combos);
    const DispatchMode mode = family == TargetMask::Family::generation
                                  ? DispatchMode::min_shed
                                  : DispatchMode::min_thermal_excess;

    for (uint64_t down = 0; down < combos; ++down) {
        const uint64_t bits = (combos - 1) - down;  // hi-first
        Scenario s = deterministic_scenario(c);
        s.set_origin(family == TargetMask::Family::generation
                         ? ScenarioOrigin::generation_adversary
                         : ScenarioOrigin::thermal_adversary);
        for (size_t k = 0; k < coords.size(); ++k) {
            const bool hi = (bits >> k) & 1;
            const auto& co = coords[k];
            if (co.reactive)
                s.q(co.node, co.g) = hi ? box.q_hi(co.node, co.g) : box.q_lo(co.node, co.g);
            else
                s.p(co.node, co.g) = hi ? box.p_hi(co.node, co.g) : box.p_lo(co.node, co.g);
        }
        DispatchResult dr = solve_dispatch(c, plan, s, mode);
        // A vertex the committed generation cannot balance has no thermal
        // corrective at all; mirror the engine's +inf residual.
        const double residual = family == TargetMask::Family::generation
                                    ? dr.shed_total
                                    : (dr.feasible ? dr.thermal_excess
                                                   : std::numeric_limits<double>::infinity());
        if (residual > tol) res.problematic.push_back({s, residual});
        if (residual > res.worst_residual) {
            res.worst_residual = residual;
            res.worst_scenario = s;
        }
    }
    return res;
}

std::vector<ResidualEntry> evaluate_constraints(const NetworkCase& c, const InvestmentPlan& plan,
                                                const std::vector<OperationalState>& dispatches,
                                                const std::vector<Scenario>& scenarios) {
    std::vector<Scenario> det;
    if (scenarios.empty()) det.push_back(deterministic_scenario(c));
    const std::vector<Scenario>& loads = scenarios.empty() ? det : scenarios;
    if (loads.size() != dispatches.size())
        throw ModelError("evaluate_constraints: one dispatch per scenario required");

    std::vector<ResidualEntry> table = {
        {"investment_monotone", 0, 0}, {"investment_symmetry", 0, 0}, {"parallel_cap", 0, 0},
        {"connectivity", 0, 0},        {"gen_capacity", 0, 0},        {"gen_reactive", 0, 0},
        {"balance_p", 0, 0},           {"balance_q", 0, 0},           {"losses", 0, 0},
        {"loss_sign", 0, 0},           {"cone_power_current", 0, 0},  {"voltage_drop", 0, 0},
        {"voltage_bounds", 0, 0},      {"thermal", 0, 0},             {"angle", 0, 0},
    };
    auto bump = [&table](const char* family, double residual) {
        for (auto& e : table)
            if (e.family == family) {
                e.max_residual = std::max(e.max_residual, residual);
                if (residual > 1e-6) ++e.violations;
                return;
            }
    };

    const auto& el = c.electrical;
    const double tanphi = el.tan_phi();
    const double tant = std::tan(el.theta_delta);

    for (int y = 1; y <= c.years(); ++y) {
        for (int i = 0; i < c.n(); ++i) {
            if (plan.gen_built(y - 1, i) && !plan.gen_built(y, i)) bump("investment_monotone", 1.0);
            for (int j = 0; j < c.n(); ++j) {
                if (i == j) continue;
                bump("investment_symmetry",
                     std::abs(plan.line_count(y, i, j) - plan.line_count(y, j, i)));
                bump("investment_monotone",
                     std::max(0, plan.line_count(y - 1, i, j) - plan.line_count(y, i, j)));
                bump("parallel_cap",
                     std::max(0, plan.line_count(y, i, j) - el.max_parallel));
            }
        }
        bump("connectivity", connected(c, plan, y) ? 0.0 : 1.0);
    }

    for (size_t sc = 0; sc < dispatches.size(); ++sc) {
        const auto& st = dispatches[sc];
        const auto& ld = loads[sc];
        for (int g = 0; g < c.total_periods(); ++g) {
            const int y = c.year_of(g);
            for (int i = 0; i < c.n(); ++i) {
                const double pgv = st.p_gen(i, g), qgv = st.q_gen(i, g);
                const double hi = plan.gen_built(y, i) ? el.p_gen_max : 0.0;
                const double lo = plan.gen_built(y, i) ? el.p_gen_min : 0.0;
                bump("gen_capacity", std::max(pgv - hi, lo - pgv));
                bump("gen_reactive", std::max(qgv - tanphi * pgv, -tanphi * pgv - qgv));
                double sump = 0.0, sumq = 0.0;
                for (int j = 0; j < c.n(); ++j)
                    if (j != i) {
                        sump += st.p_flow(i, j, g);
                        sumq += st.q_flow(i, j, g);
                    }
                bump("balance_p", std::abs(st.p_gen(i, g) - ld.p(i, g) + st.p_shed(i, g) - sump));
                bump("balance_q", std::abs(st.q_gen(i, g) - ld.q(i, g) + st.q_shed(i, g) - sumq));
                const double nu = st.nu(i, g);
                bump("voltage_bounds",
                     std::max(el.v_min * el.v_min - nu, nu - el.v_max * el.v_max));
            }
            for (int i = 0; i < c.n(); ++i)
                for (int j = i + 1; j < c.n(); ++j) {
                    const int count = plan.line_count(y, i, j);
                    const double d = c.distance(i, j);
                    const double pij = st.p_flow(i, j, g), pji = st.p_flow(j, i, g);
                    const double qij = st.q_flow(i, j, g), qji = st.q_flow(j, i, g);
                    const double ps = st.psi(i, j, g);
                    bump("loss_sign", std::max(-(pij + pji), -(qij + qji)));
                    if (count >= 1) {
                        bump("losses", std::abs(pij + pji - el.r * d / count * ps));
                        bump("losses", std::abs(qij + qji - el.x * d / count * ps));
                        bump("voltage_drop",
                             std::abs(st.nu(j, g) - st.nu(i, g) +
                                      2.0 * d * (el.r * pij + el.x * qij) / count -
                                      d * d * (el.r * el.r + el.x * el.x) / (count * count) * ps));
                    }
                    for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                        const double p = st.p_flow(a, b, g), q = st.q_flow(a, b, g);
                        bump("cone_power_current", p * p + q * q - ps * st.nu(a, g));
                        const double cap = count * el.s_rating;
                        bump("thermal", p * p + q * q - cap * cap);
                        const double rhs = tant * st.nu(a, g) * count;
                        bump("angle", el.r * d * (q + tant * p) + el.x * d * (tant * q - p) - rhs);
                        bump("angle", el.x * d * (p + tant * q) + el.r * d * (tant * p - q) - rhs);
                    }
                }
        }
    }
    return table;
}

}  // namespace microplan::oracle
