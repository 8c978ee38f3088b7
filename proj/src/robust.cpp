#include "microplan/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "microplan/formulation.hpp"

namespace microplan {

namespace {

void snap_to_box(Scenario& s, const UncertaintyBox& box) {
    for (int i = 0; i < s.n(); ++i)
        for (int g = 0; g < s.total_periods(); ++g) {
            const double pm = 0.5 * (box.p_lo(i, g) + box.p_hi(i, g));
            s.p(i, g) = s.p(i, g) >= pm ? box.p_hi(i, g) : box.p_lo(i, g);
            const double qm = 0.5 * (box.q_lo(i, g) + box.q_hi(i, g));
            s.q(i, g) = s.q(i, g) >= qm ? box.q_hi(i, g) : box.q_lo(i, g);
        }
}

MilpSolution solve_lp(const MilpInstance& inst, const RobustOptions& opt, const char* what) {
    MilpSolution sol = solve(inst, opt.solve);
    if (!sol.usable())
        throw ModelError(std::string(what) + ": subproblem came back " + to_string(sol.status) +
                         " (formulation bug: shedding/slack should guarantee feasibility)");
    return sol;
}

double thermal_cap2(const NetworkCase& c, const InvestmentPlan& plan, int y, int i, int j) {
    const double cap = plan.line_count(y, i, j) * c.electrical.s_rating;
    return cap * cap;
}

}  // namespace

AdversaryOutcome adversarial_generation(const NetworkCase& c, const InvestmentPlan& plan,
                                        const UncertaintyBox& box, const TargetMask& mask,
                                        const RobustOptions& opt) {
    MilpInstance inst = build_generation_adversarial(c, plan, box, mask, opt.cone, opt.load_bias);
    MilpSolution sol = solve_lp(inst, opt, "adversarial_generation");

    AdversaryOutcome out;
    out.scenario = Scenario(c.n(), c.total_periods(), ScenarioOrigin::generation_adversary);
    double masked_shed = 0.0;
    for (int i = 0; i < c.n(); ++i)
        for (int g = 0; g < c.total_periods(); ++g) {
            out.scenario.p(i, g) = sol.values[inst.var_id(vars::load_p(0, i, g))];
            out.scenario.q(i, g) = sol.values[inst.var_id(vars::load_q(0, i, g))];
            const double shed = sol.values[inst.var_id(vars::shed_p(0, i, g))] +
                                sol.values[inst.var_id(vars::shed_q(0, i, g))];
            if (shed > opt.tol) out.violated.push_back({i, g, -1});
        }
    for (const auto& e : mask.entries)
        masked_shed += sol.values[inst.var_id(vars::shed_p(0, e[0], e[1]))] +
                       sol.values[inst.var_id(vars::shed_q(0, e[0], e[1]))];
    out.objective = masked_shed;
    snap_to_box(out.scenario, box);
    return out;
}

AdversaryOutcome adversarial_thermal(const NetworkCase& c, const InvestmentPlan& plan,
                                     const UncertaintyBox& box, const TargetMask& mask,
                                     const RobustOptions& opt) {
    if (mask.family != TargetMask::Family::thermal || mask.empty())
        throw ModelError("adversarial_thermal: requires a non-empty thermal mask");

    // Masked periods, each handled independently (flows at a period depend
    // only on that period's loads once the plan is fixed).
    std::vector<int> periods;
    for (const auto& e : mask.entries)
        if (std::find(periods.begin(), periods.end(), e[2]) == periods.end())
            periods.push_back(e[2]);
    std::sort(periods.begin(), periods.end());

    static const double kDirs[8][2] = {{1, 0},  {0.70710678118654752, 0.70710678118654752},
                                       {0, 1},  {-0.70710678118654752, 0.70710678118654752},
                                       {-1, 0}, {-0.70710678118654752, -0.70710678118654752},
                                       {0, -1}, {0.70710678118654752, -0.70710678118654752}};

    AdversaryOutcome out;
    out.scenario = deterministic_scenario(c);
    out.scenario.set_origin(ScenarioOrigin::thermal_adversary);
    out.objective = 0.0;

    for (int g : periods) {
        const int y = c.year_of(g);
        std::vector<std::array<int, 3>> targets;  // edges in the mask at this period
        for (const auto& e : mask.entries)
            if (e[2] == g) targets.push_back(e);

        // Uncertain coordinates of this period.
        struct Coord {
            int node;
            bool reactive;
        };
        std::vector<Coord> coords;
        for (int i = 0; i < c.n(); ++i) {
            if (box.p_hi(i, g) - box.p_lo(i, g) > 1e-12) coords.push_back({i, false});
            if (box.q_hi(i, g) - box.q_lo(i, g) > 1e-12) coords.push_back({i, true});
        }
        if (static_cast<int>(coords.size()) > opt.assignment_cap)
            throw ModelError("adversarial_thermal: too many uncertain coordinates in one period (" +
                             std::to_string(coords.size()) + " > cap " +
                             std::to_string(opt.assignment_cap) + ")");

        double best_obj = -std::numeric_limits<double>::infinity();
        Scenario best_loads = deterministic_scenario(c);
        std::vector<std::array<int, 3>> best_violated;

        const uint64_t combos = 1ull << coords.size();
        for (uint64_t bits = 0; bits < combos; ++bits) {
            Scenario probe_loads = deterministic_scenario(c);
            for (size_t k = 0; k < coords.size(); ++k) {
                const bool hi = (bits >> k) & 1;
                const auto& co = coords[k];
                if (co.reactive)
                    probe_loads.q(co.node, g) = hi ? box.q_hi(co.node, g) : box.q_lo(co.node, g);
                else
                    probe_loads.p(co.node, g) = hi ? box.p_hi(co.node, g) : box.p_lo(co.node, g);
            }
            MilpInstance probe = build_thermal_probe(c, plan, probe_loads, g, opt.cone);
            for (const auto& t : targets) {
                if (plan.line_count(y, t[0], t[1]) < 1) continue;
                const int vp = probe.var_id(vars::flow_p(0, t[0], t[1], g));
                const int vq = probe.var_id(vars::flow_q(0, t[0], t[1], g));
                for (const auto& dir : kDirs) {
                    probe.set_obj(vp, -dir[0]);
                    probe.set_obj(vq, -dir[1]);
                    MilpSolution sol = solve(probe, opt.solve);
                    probe.set_obj(vp, 0.0);
                    probe.set_obj(vq, 0.0);
                    if (!sol.usable()) continue;  // assignment not servable without shedding
                    double obj = 0.0;
                    std::vector<std::array<int, 3>> violated;
                    for (const auto& t2 : targets) {
                        double line_obj = -std::numeric_limits<double>::infinity();
                        for (auto [a, b] : {std::pair{t2[0], t2[1]}, std::pair{t2[1], t2[0]}}) {
                            const double p = sol.values[probe.var_id(vars::flow_p(0, a, b, g))];
                            const double q = sol.values[probe.var_id(vars::flow_q(0, a, b, g))];
                            line_obj = std::max(line_obj,
                                                p * p + q * q - thermal_cap2(c, plan, y, t2[0], t2[1]));
                        }
                        obj += line_obj;
                    }
                    // violated set over every built edge, for the re-solve step
                    for (int i = 0; i < c.n(); ++i)
                        for (int j = i + 1; j < c.n(); ++j) {
                            if (plan.line_count(y, i, j) < 1) continue;
                            for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                                const double p = sol.values[probe.var_id(vars::flow_p(0, a, b, g))];
                                const double q = sol.values[probe.var_id(vars::flow_q(0, a, b, g))];
                                if (p * p + q * q - thermal_cap2(c, plan, y, i, j) > opt.tol) {
                                    violated.push_back({i, j, g});
                                    break;
                                }
                            }
                        }
                    if (obj > best_obj) {
                        best_obj = obj;
                        best_loads = probe_loads;
                        best_violated = std::move(violated);
                    }
                }
            }
        }

        if (best_obj == -std::numeric_limits<double>::infinity()) continue;
        out.objective += best_obj;
        for (int i = 0; i < c.n(); ++i) {
            out.scenario.p(i, g) = best_loads.p(i, g);
            out.scenario.q(i, g) = best_loads.q(i, g);
        }
        for (const auto& v : best_violated)
            if (std::find(out.violated.begin(), out.violated.end(), v) == out.violated.end())
                out.violated.push_back(v);
    }

    snap_to_box(out.scenario, box);
    return out;
}

double corrective_generation(const NetworkCase& c, const InvestmentPlan& plan, const Scenario& s,
                             const RobustOptions& opt) {
    MilpInstance inst = build_generation_corrective(c, plan, s, opt.cone);
    return solve_lp(inst, opt, "corrective_generation").objective;
}

double corrective_thermal(const NetworkCase& c, const InvestmentPlan& plan, const Scenario& s,
                          const RobustOptions& opt) {
    MilpInstance inst = build_thermal_corrective(c, plan, s, opt.cone);
    MilpSolution sol = solve(inst, opt.solve);
    // Balance carries no shedding here; a scenario the committed generation
    // cannot even balance has no thermal corrective at all.
    if (sol.status == SolveStatus::infeasible) return std::numeric_limits<double>::infinity();
    if (!sol.usable())
        throw ModelError(std::string("corrective_thermal: subproblem came back ") +
                         to_string(sol.status));
    double residual = 0.0;
    for (int g = 0; g < c.total_periods(); ++g) {
        const int y = c.year_of(g);
        for (int i = 0; i < c.n(); ++i)
            for (int j = i + 1; j < c.n(); ++j) {
                if (plan.line_count(y, i, j) < 1) continue;
                double worst = 0.0;  // one rating per line; worse orientation counts
                for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                    const double p = sol.values[inst.var_id(vars::flow_p(0, a, b, g))];
                    const double q = sol.values[inst.var_id(vars::flow_q(0, a, b, g))];
                    worst = std::max(worst, p * p + q * q - thermal_cap2(c, plan, y, i, j));
                }
                residual += worst;
            }
    }
    return residual;
}

std::vector<ProblematicScenario> adversary_sweep(const NetworkCase& c, const InvestmentPlan& plan,
                                                 const UncertaintyBox& box,
                                                 const RobustOptions& opt) {
    std::vector<ProblematicScenario> out;
    std::set<uint64_t> seen;
    auto admit = [&](const Scenario& s, double residual) {
        if (residual <= opt.tol) return;
        if (!seen.insert(s.fingerprint()).second) return;
        out.push_back({s, residual});
    };

    // Generation infeasibility, one singleton target at a time.
    for (int g = 0; g < c.total_periods(); ++g)
        for (int i = 0; i < c.n(); ++i) {
            TargetMask mask = TargetMask::gen_singleton(i, g);
            AdversaryOutcome adv = adversarial_generation(c, plan, box, mask, opt);
            if (adv.objective <= opt.tol) continue;
            const bool superset = adv.violated.size() > 1 ||
                                  (adv.violated.size() == 1 &&
                                   (adv.violated[0][0] != i || adv.violated[0][1] != g));
            if (superset) {
                TargetMask wide;
                wide.family = TargetMask::Family::generation;
                wide.entries = adv.violated;
                adv = adversarial_generation(c, plan, box, wide, opt);
            }
            admit(adv.scenario, corrective_generation(c, plan, adv.scenario, opt));
        }

    // Line thermal rating infeasibility, one built line and period at a time.
    for (int g = 0; g < c.total_periods(); ++g) {
        const int y = c.year_of(g);
        for (int i = 0; i < c.n(); ++i)
            for (int j = i + 1; j < c.n(); ++j) {
                if (plan.line_count(y, i, j) < 1) continue;
                TargetMask mask = TargetMask::thermal_singleton(i, j, g);
                AdversaryOutcome adv = adversarial_thermal(c, plan, box, mask, opt);
                if (adv.objective <= opt.tol) continue;
                const bool superset =
                    adv.violated.size() > 1 ||
                    (adv.violated.size() == 1 && (adv.violated[0][0] != i ||
                                                  adv.violated[0][1] != j ||
                                                  adv.violated[0][2] != g));
                if (superset && !adv.violated.empty()) {
                    TargetMask wide;
                    wide.family = TargetMask::Family::thermal;
                    wide.entries = adv.violated;
                    adv = adversarial_thermal(c, plan, box, wide, opt);
                }
                admit(adv.scenario, corrective_thermal(c, plan, adv.scenario, opt));
            }
    }
    return out;
}

RobustResult robust_plan(const NetworkCase& c, const UncertaintyBox& box,
                         const RobustOptions& opt) {
    RobustResult res;
    res.scenarios.push_back(deterministic_scenario(c));
    res.residuals.push_back(0.0);

    for (int it = 1; it <= opt.max_iterations; ++it) {
        MilpInstance inst = build_main_problem(c, res.scenarios, opt.cone);
        MilpSolution sol = solve(inst, opt.solve);
        if (!sol.usable())
            throw SolveError("robust_plan: main problem " + std::string(to_string(sol.status)) +
                             " at iteration " + std::to_string(it));
        ExtractedSolution ex =
            extract(inst, sol, c, static_cast<int>(res.scenarios.size()), opt.solve);

        auto problematic = adversary_sweep(c, ex.plan, box, opt);

        IterationAudit audit;
        audit.iteration = it;
        audit.main_objective = sol.objective;
        audit.scenarios_total = static_cast<int>(res.scenarios.size());
        audit.scenarios_added = static_cast<int>(problematic.size());
        for (const auto& ps : problematic)
            audit.worst_residual = std::max(audit.worst_residual, ps.residual);
        res.audit.push_back(audit);
        res.iterations = it;
        res.plan = std::move(ex.plan);
        res.states = std::move(ex.states);
        res.money = std::move(ex.money);

        if (problematic.empty()) {
            res.converged = true;
            return res;
        }

        std::set<uint64_t> have;
        for (const auto& s : res.scenarios) have.insert(s.fingerprint());
        for (auto& ps : problematic)
            if (have.insert(ps.scenario.fingerprint()).second) {
                res.scenarios.push_back(std::move(ps.scenario));
                res.residuals.push_back(ps.residual);
            }
    }
    res.converged = false;
    return res;
}

}  // namespace microplan
