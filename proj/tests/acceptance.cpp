// Acceptance suite: one line per criterion, each pinned to its stated
// tolerance. Build target `acceptance`, registered in ctest.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "fixtures.hpp"
#include "microplan/case_io.hpp"
#include "microplan/chance.hpp"
#include "microplan/check_plan.hpp"
#include "microplan/cone.hpp"
#include "microplan/formulation.hpp"
#include "microplan/oracle.hpp"
#include "microplan/robust.hpp"

using namespace microplan;

namespace {

int g_failures = 0;

void criterion(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    if (!pass) ++g_failures;
}

double now_minus(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Fixture set for the planning-equivalence criterion: n <= 4, one year.
std::vector<NetworkCase> planning_fixtures() {
    std::vector<NetworkCase> out;
    out.push_back(fixtures::one_node(1.0));
    out.push_back(fixtures::two_node(4.0, 3.0));
    {
        fixtures::ToySpec t;  // parallel conductors required: flow 6 > one rating 4
        t.n = 2;
        t.p = {{1.0}, {6.0}};
        t.p_max = 12.0;
        t.s_rating = 4.0;
        t.max_parallel = 2;
        out.push_back(fixtures::make_case(t));
    }
    out.push_back(fixtures::three_node(4.0, 2.0, 1.5));
    {
        fixtures::ToySpec t;
        t.n = 4;
        t.p = {{1.0}, {2.3}, {3.6}, {4.9}};
        t.p_max = 8.0;
        auto c = fixtures::make_case(t);
        c.distances = {{0.0, 1.0, 2.0, 2.5},
                       {1.0, 0.0, 1.5, 2.2},
                       {2.0, 1.5, 0.0, 1.1},
                       {2.5, 2.2, 1.1, 0.0}};
        c.validate();
        out.push_back(c);
    }
    return out;
}

struct SolvedFixture {
    NetworkCase c;
    InvestmentPlan plan;
    std::vector<OperationalState> states;
    std::vector<Scenario> scenarios;
    double objective;
};
std::vector<SolvedFixture> g_solved;  // collected planning solutions for criterion 6

void criterion1_planning_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    ConeApproxConfig cfg;  // 1e-3
    SolveOptions sopts;
    bool pass = true;
    std::ostringstream detail;
    const double slack = (1.0 + cfg.accuracy_eps) * (1.0 + cfg.accuracy_eps) * (1.0 + sopts.mip_gap);

    int idx = 0;
    for (const auto& c : planning_fixtures()) {
        MilpInstance inst = build_deterministic(c, cfg);
        MilpSolution sol = solve(inst, sopts);
        auto best = oracle::enumerate_designs(c);
        if (sol.status != SolveStatus::optimal || !best.feasible) {
            pass = false;
            detail << " fixture" << idx << ":status(" << to_string(sol.status) << ")";
            ++idx;
            continue;
        }
        const bool ok = sol.objective <= best.objective * slack + 1e-6 &&
                        best.objective <= sol.objective * slack + 1e-6;
        if (!ok) {
            pass = false;
            detail << " fixture" << idx << ": milp=" << sol.objective
                   << " oracle=" << best.objective;
        }
        auto ex = extract(inst, sol, c, 1, sopts);
        g_solved.push_back({c, ex.plan, ex.states, {deterministic_scenario(c)}, sol.objective});
        ++idx;
    }
    const double dt = now_minus(t0);
    if (dt >= 60.0) pass = false;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d fixtures within (1+eps)^2(1+gap), %.1fs (< 60s)", idx, dt);
    criterion(1, "oracle equivalence, planning", pass, buf + detail.str());
}

struct AdversaryFixture {
    NetworkCase c;
    InvestmentPlan plan;
    UncertaintyBox box;
    TargetMask::Family family;
};

std::vector<AdversaryFixture> adversary_fixtures() {
    std::vector<AdversaryFixture> out;
    const double lossless = 1e-9;

    {  // capacity shortfall at a single node, 1 coordinate
        fixtures::ToySpec t;
        t.n = 1;
        t.p = {{2.0}};
        t.q = {{0.0}};
        t.p_max = 2.0;
        auto c = fixtures::make_case(t);
        InvestmentPlan plan(1, 1, 1);
        plan.set_gen(1, 0, true);
        UncertaintyBox box(1, 1);
        box.p_lo(0, 0) = 1.5;
        box.p_hi(0, 0) = 2.5;
        out.push_back({c, plan, box, TargetMask::Family::generation});
    }
    {  // two nodes, shared generator, 2 P coordinates
        fixtures::ToySpec t;
        t.n = 2;
        t.p = {{3.0}, {2.0}};
        t.q = {{0.0}, {0.0}};
        t.p_max = 6.0;
        t.r = t.x = lossless;
        auto c = fixtures::make_case(t);
        InvestmentPlan plan(2, 1, 1);
        plan.set_gen(1, 0, true);
        plan.set_line_count(1, 0, 1, 1);
        out.push_back({c, plan, UncertaintyBox::from_factors(c, 1.0, 1.4),
                       TargetMask::Family::generation});
    }
    {  // redispatch filtering across two generators
        fixtures::ToySpec t;
        t.n = 2;
        t.p = {{2.0}, {3.0}};
        t.q = {{0.0}, {0.0}};
        t.p_max = 4.0;
        t.r = t.x = lossless;
        auto c = fixtures::make_case(t);
        InvestmentPlan plan(2, 1, 1);
        plan.set_gen(1, 0, true);
        plan.set_gen(1, 1, true);
        plan.set_line_count(1, 0, 1, 1);
        out.push_back({c, plan, UncertaintyBox::from_factors(c, 1.0, 1.5),
                       TargetMask::Family::generation});
    }
    {  // thermal overload on a radial line
        fixtures::ToySpec t;
        t.n = 2;
        t.p = {{1.0}, {3.0}};
        t.q = {{0.3}, {0.9}};
        t.p_max = 8.0;
        t.s_rating = 4.0;
        t.r = t.x = lossless;
        auto c = fixtures::make_case(t);
        InvestmentPlan plan(2, 1, 1);
        plan.set_gen(1, 0, true);
        plan.set_line_count(1, 0, 1, 1);
        out.push_back({c, plan, UncertaintyBox::from_factors(c, 1.0, 1.5),
                       TargetMask::Family::thermal});
    }
    {  // meshed triangle where rerouting absorbs most vertices
        fixtures::ToySpec t;
        t.n = 3;
        t.p = {{1.0}, {3.0}, {0.5}};
        t.q = {{0.0}, {0.0}, {0.0}};
        t.p_max = 8.0;
        t.s_rating = 3.0;
        t.r = t.x = lossless;
        auto c = fixtures::make_case(t);
        InvestmentPlan plan(3, 1, 1);
        plan.set_gen(1, 0, true);
        plan.set_line_count(1, 0, 1, 1);
        plan.set_line_count(1, 0, 2, 1);
        plan.set_line_count(1, 1, 2, 1);
        out.push_back({c, plan, UncertaintyBox::from_factors(c, 1.0, 1.6),
                       TargetMask::Family::thermal});
    }
    {  // two periods, eight coordinates, generation family
        fixtures::ToySpec t;
        t.n = 2;
        t.periods = 2;
        t.p = {{2.0, 1.5}, {3.0, 3.5}};
        t.q = {{0.6, 0.45}, {0.9, 1.05}};
        t.p_max = 4.0;
        t.r = t.x = lossless;
        auto c = fixtures::make_case(t);
        InvestmentPlan plan(2, 1, 1);
        plan.set_gen(1, 0, true);
        plan.set_gen(1, 1, true);
        plan.set_line_count(1, 0, 1, 1);
        out.push_back({c, plan, UncertaintyBox::from_factors(c, 1.0, 1.4),
                       TargetMask::Family::generation});
    }
    return out;
}

std::vector<std::pair<Scenario, UncertaintyBox>> g_vertex_checks;  // for criterion 8

void criterion2_adversary_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    RobustOptions opt;
    bool pass = true;
    std::ostringstream detail;

    int idx = 0;
    for (const auto& fx : adversary_fixtures()) {
        auto vx = oracle::enumerate_vertex_adversary(fx.c, fx.plan, fx.box, fx.family, opt.tol);
        auto sweep = adversary_sweep(fx.c, fx.plan, fx.box, opt);

        for (const auto& ps : sweep) g_vertex_checks.emplace_back(ps.scenario, fx.box);

        // The sweep de-duplicates scenarios across the two adversary families;
        // this fixture's family residual of a returned scenario is re-derived
        // through the matching corrective problem.
        std::vector<std::pair<uint64_t, double>> fam;
        for (const auto& ps : sweep) {
            const double r = fx.family == TargetMask::Family::generation
                                 ? corrective_generation(fx.c, fx.plan, ps.scenario, opt)
                                 : corrective_thermal(fx.c, fx.plan, ps.scenario, opt);
            if (r > opt.tol) fam.emplace_back(ps.scenario.fingerprint(), r);
        }

        bool ok = vx.problematic.empty() == fam.empty();
        double sweep_worst = 0.0;
        std::set<uint64_t> oracle_prints;
        for (const auto& v : vx.problematic) oracle_prints.insert(v.scenario.fingerprint());
        for (const auto& [print, r] : fam) {
            sweep_worst = std::max(sweep_worst, r);
            ok = ok && oracle_prints.count(print) == 1;
            for (const auto& v : vx.problematic)
                if (v.scenario.fingerprint() == print) {
                    const bool both_inf = std::isinf(v.residual) && std::isinf(r);
                    ok = ok && (both_inf || std::abs(v.residual - r) <=
                                                1e-6 * (1.0 + std::abs(v.residual)));
                }
        }
        const bool both_inf = std::isinf(vx.worst_residual) && std::isinf(sweep_worst);
        ok = ok && (both_inf || std::abs(sweep_worst - vx.worst_residual) <=
                                    1e-6 * (1.0 + std::abs(vx.worst_residual)));
        if (!ok) {
            pass = false;
            detail << " fixture" << idx << ": sweep_worst=" << sweep_worst
                   << " oracle_worst=" << vx.worst_residual << " (" << vx.vertices << " vertices)";
        }
        ++idx;
    }
    const double dt = now_minus(t0);
    if (dt >= 120.0) pass = false;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d fixtures, residuals within 1e-6, %.1fs (< 120s)", idx, dt);
    criterion(2, "oracle equivalence, adversary", pass, buf + detail.str());
}

std::vector<std::pair<NetworkCase, UncertaintyBox>> robust_fixtures() {
    std::vector<std::pair<NetworkCase, UncertaintyBox>> out;
    {
        fixtures::ToySpec t;
        t.n = 2;
        t.p = {{4.0}, {3.0}};
        t.p_max = 8.0;
        auto c = fixtures::make_case(t);
        out.emplace_back(c, UncertaintyBox::from_factors(c, 1.0, 1.5));
    }
    {
        auto c = fixtures::three_node(4.0, 2.0, 1.5);
        out.emplace_back(c, UncertaintyBox::from_factors(c, 1.0, 1.5));
    }
    {
        fixtures::ToySpec t;  // small box: deterministic plan may already be robust
        t.n = 2;
        t.p = {{4.0}, {3.0}};
        t.p_max = 8.0;
        auto c = fixtures::make_case(t);
        out.emplace_back(c, UncertaintyBox::from_factors(c, 1.0, 1.02));
    }
    {
        fixtures::ToySpec t;  // degenerate box
        t.n = 2;
        t.p = {{4.0}, {3.0}};
        t.p_max = 8.0;
        auto c = fixtures::make_case(t);
        out.emplace_back(c, UncertaintyBox::from_factors(c, 1.0, 1.0));
    }
    return out;
}

std::vector<std::pair<int, RobustResult>> g_robust_runs;
std::vector<NetworkCase> g_robust_cases;

void criterion3_robust_dominance() {
    ConeApproxConfig cfg;
    RobustOptions opt;
    bool pass = true;
    std::ostringstream detail;

    int idx = 0;
    for (const auto& [c, box] : robust_fixtures()) {
        MilpSolution det = solve(build_deterministic(c, cfg), opt.solve);
        auto detx = extract(build_deterministic(c, cfg), det, c, 1, opt.solve);
        RobustResult res = robust_plan(c, box, opt);
        g_robust_runs.emplace_back(idx, res);
        g_robust_cases.push_back(c);
        for (const auto& s : res.scenarios) g_vertex_checks.emplace_back(s, box);

        bool ok = res.converged && res.money.npv >= det.objective - 1e-9 * std::abs(det.objective);

        // strictness exactly when the oracle certifies the deterministic plan
        // is not robust-feasible for this box
        const double cert = std::max(
            oracle::enumerate_vertex_adversary(c, detx.plan, box, TargetMask::Family::generation,
                                               opt.tol)
                .worst_residual,
            oracle::enumerate_vertex_adversary(c, detx.plan, box, TargetMask::Family::thermal,
                                               opt.tol)
                .worst_residual);
        if (cert > opt.tol) ok = ok && res.money.npv > det.objective + opt.tol;

        if (!ok) {
            pass = false;
            detail << " fixture" << idx << ": det=" << det.objective << " robust=" << res.money.npv
                   << " cert=" << cert;
        }
        ++idx;
    }
    criterion(3, "robust-cost dominance", pass,
              std::to_string(idx) + " boxes, strict when certified infeasible" + detail.str());
}

void criterion4_convergence_audit() {
    RobustOptions opt;
    bool pass = true;
    std::ostringstream detail;
    for (const auto& [idx, res] : g_robust_runs) {
        bool ok = res.converged && res.iterations <= opt.max_iterations;
        for (size_t k = 1; k < res.audit.size(); ++k)
            ok = ok && res.audit[k].main_objective >= res.audit[k - 1].main_objective;
        ok = ok && res.audit.back().scenarios_added == 0;  // final clean sweep
        if (!ok) {
            pass = false;
            detail << " fixture" << idx << " failed";
        }
    }
    criterion(4, "convergence audit", pass,
              std::to_string(g_robust_runs.size()) +
                  " runs converged, objectives non-decreasing (exact)" + detail.str());
}

// Evaluates the generated tower rows at the minimal fold assignment of a
// sample point; returns true when every row is satisfied.
struct ConeProbe {
    MilpInstance inst;
    int x, y, z, t;
    bool three;
    ConeApproxConfig cfg;

    explicit ConeProbe(double eps, bool three_arg) : three(three_arg) {
        cfg.accuracy_eps = eps;
        x = inst.add_var("x", VarKind::continuous, -2, 2);
        y = inst.add_var("y", VarKind::continuous, -2, 2);
        z = three ? inst.add_var("z", VarKind::continuous, -2, 2) : -1;
        t = inst.add_var("t", VarKind::continuous, 0, 2);
        if (three)
            approximate_cone3(inst, LinExpr(x), LinExpr(y), LinExpr(z), LinExpr(t), 2.0, cfg, "c");
        else
            approximate_cone(inst, LinExpr(x), LinExpr(y), LinExpr(t), 2.0, cfg, "c");
    }

    static void fold(double ax, double ay, int levels, const std::string& tag,
                     const MilpInstance& inst, std::vector<double>& vals) {
        double xi = ax, eta = ay;
        vals[inst.var_id(tag + ".xi0")] = xi;
        vals[inst.var_id(tag + ".eta0")] = eta;
        for (int j = 1; j <= levels; ++j) {
            const double theta = 3.14159265358979323846 / std::pow(2.0, j + 1);
            const double nx = std::cos(theta) * xi + std::sin(theta) * eta;
            const double ne = std::abs(std::cos(theta) * eta - std::sin(theta) * xi);
            xi = nx;
            eta = ne;
            vals[inst.var_id(tag + ".xi" + std::to_string(j))] = xi;
            vals[inst.var_id(tag + ".eta" + std::to_string(j))] = eta;
        }
    }

    bool admits(double px, double py, double pz, double pt) {
        std::vector<double> vals(inst.num_vars(), 0.0);
        vals[x] = px;
        vals[y] = py;
        if (three) vals[z] = pz;
        vals[t] = pt;
        if (three) {
            const int levels = cfg.levels_for(std::sqrt(1.0 + cfg.accuracy_eps) - 1.0);
            fold(std::abs(px), std::abs(py), levels, "c.a", inst, vals);
            const double u = std::hypot(px, py);
            vals[inst.var_id("c.norm2")] = u;
            fold(u, std::abs(pz), levels, "c.b", inst, vals);
        } else {
            fold(std::abs(px), std::abs(py), cfg.levels(), "c", inst, vals);
        }
        for (int r = 0; r < inst.num_rows(); ++r) {
            const double act = inst.eval_row(r, vals);
            if (act < inst.row(r).lo - 1e-9 || act > inst.row(r).hi + 1e-9) return false;
        }
        return true;
    }
};

double admitted_radius_lp(double ang, const ConeApproxConfig& cfg) {
    MilpInstance m;
    const int rho = m.add_var("rho", VarKind::continuous, 0.0, 10.0, -1.0);
    const int t = m.add_var("t", VarKind::continuous, 1.0, 1.0);
    approximate_cone(m, LinExpr(rho, std::cos(ang)), LinExpr(rho, std::sin(ang)), LinExpr(t), 1.0,
                     cfg, "p");
    auto sol = solve(m);
    return sol.status == SolveStatus::optimal ? sol.values[rho] : -1.0;
}

void criterion5_cone_containment() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::ostringstream detail;
    std::mt19937_64 rng(20240808);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    long total = 0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        ConeProbe p2(eps, false), p3(eps, true);
        const long n2 = 170000, n3 = 170000;  // ~1.02e6 points over the three accuracies
        for (long k = 0; k < n2; ++k) {
            const double ang = 6.283185307179586 * u(rng);
            const double tv = 0.05 + 1.9 * u(rng);
            const double r = tv * u(rng);
            if (!p2.admits(r * std::cos(ang), r * std::sin(ang), 0.0, tv)) {
                pass = false;
                detail << " 2d point rejected at eps=" << eps;
                break;
            }
            ++total;
        }
        for (long k = 0; k < n3; ++k) {
            const double a = 6.283185307179586 * u(rng), b = std::acos(2.0 * u(rng) - 1.0);
            const double tv = 0.05 + 1.9 * u(rng);
            const double r = tv * u(rng);
            if (!p3.admits(r * std::cos(a) * std::sin(b), r * std::sin(a) * std::sin(b),
                           r * std::cos(b), tv)) {
                pass = false;
                detail << " 3d point rejected at eps=" << eps;
                break;
            }
            ++total;
        }
        // admitted excess radius over the exact polyhedron (LP over all aux)
        double worst = 0.0;
        for (int k = 0; k < 96; ++k) {
            ConeApproxConfig cfg;
            cfg.accuracy_eps = eps;
            worst = std::max(worst, admitted_radius_lp(6.283185307179586 * k / 96.0 + 0.007, cfg));
        }
        if (worst > 1.0 + eps + 1e-9) {
            pass = false;
            detail << " radius " << worst << " at eps=" << eps;
        }
    }
    const double dt = now_minus(t0);
    if (dt >= 30.0) pass = false;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%ld sampled points contained, radius <= 1+eps, %.1fs (< 30s)",
                  total, dt);
    criterion(5, "cone approximation", pass, buf + detail.str());
}

bool fictitious_flow_feasible(const NetworkCase& c, const InvestmentPlan& plan, int y) {
    if (c.n() == 1) return true;
    MilpInstance m;
    const int n = c.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                m.add_var(key("f", {i, j}), VarKind::continuous, 0.0,
                          plan.line_built(y, i, j) ? n : 0.0);
    std::vector<std::pair<int, double>> src;
    for (int j = 1; j < n; ++j) src.emplace_back(m.var_id(key("f", {0, j})), 1.0);
    m.add_eq("source", std::move(src), n - 1);
    for (int i = 1; i < n; ++i) {
        std::vector<std::pair<int, double>> bal;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            bal.emplace_back(m.var_id(key("f", {j, i})), 1.0);
            bal.emplace_back(m.var_id(key("f", {i, j})), -1.0);
        }
        m.add_eq(key("sink", {i}), std::move(bal), 1.0);
    }
    return solve(m).status == SolveStatus::optimal;
}

void criterion6_physical_invariants() {
    bool pass = true;
    std::ostringstream detail;
    ConeApproxConfig cfg;
    CheckTolerances tol;
    tol.cone_allowance = cfg.accuracy_eps;

    long solves = 0;
    auto audit = [&](const NetworkCase& c, const InvestmentPlan& plan,
                     const std::vector<OperationalState>& states,
                     const std::vector<Scenario>& scenarios) {
        auto rep = check_plan(c, plan, states, scenarios, tol);
        if (!rep.feasible()) {
            pass = false;
            detail << " violation:" << rep.violations.front().family << "@"
                   << rep.violations.front().where;
        }
        // graph search must agree with fictitious-flow feasibility
        for (int y = 1; y <= c.years(); ++y) {
            bool bfs = true;
            {
                std::vector<int> seen(c.n(), 0), stack{0};
                seen[0] = 1;
                while (!stack.empty()) {
                    int i = stack.back();
                    stack.pop_back();
                    for (int j = 0; j < c.n(); ++j)
                        if (j != i && !seen[j] && plan.line_built(y, i, j)) {
                            seen[j] = 1;
                            stack.push_back(j);
                        }
                }
                bfs = std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; });
            }
            if (bfs != fictitious_flow_feasible(c, plan, y)) {
                pass = false;
                detail << " flow/graph disagree";
            }
        }
        ++solves;
    };

    for (const auto& sf : g_solved) audit(sf.c, sf.plan, sf.states, sf.scenarios);
    for (size_t k = 0; k < g_robust_runs.size(); ++k) {
        const auto& res = g_robust_runs[k].second;
        audit(g_robust_cases[k], res.plan, res.states, res.scenarios);
    }

    // a doctored disconnected plan must fail both routes
    {
        auto c = fixtures::three_node();
        InvestmentPlan lonely(3, 1, 1);
        lonely.set_gen(1, 0, true);
        lonely.set_line_count(1, 0, 1, 1);  // node 2 isolated
        bool flow = fictitious_flow_feasible(c, lonely, 1);
        auto rep = check_plan(c, lonely, {OperationalState(3, 1)}, {},
                              CheckTolerances{1e30, 1e30});  // only structure checked
        bool flagged = false;
        for (const auto& v : rep.violations) flagged |= v.family == "connectivity";
        if (flow || !flagged) {
            pass = false;
            detail << " disconnected plan not caught";
        }
    }
    criterion(6, "physical invariants on every solve", pass,
              std::to_string(solves) + " solutions audited" + detail.str());
}

void criterion7_chance_box() {
    bool pass = true;
    std::ostringstream detail;

    LoadDistribution d;
    d.family = UncertaintySpec::Family::normal;
    d.n = 1;
    d.total_periods = 1;
    d.p_mean = {100.0};
    d.p_disp = {10.0};
    d.q_mean = {0.0};
    d.q_disp = {0.0};
    auto box = chance_box(d, 0.05);
    const double cov = verify_coverage(d, box, 100000, 987654321);
    if (std::abs(cov - 0.95) > 0.005) {
        pass = false;
        detail << " coverage=" << cov;
    }

    UncertaintyBox prev;
    bool first = true;
    for (double eps : {0.2, 0.1, 0.05, 0.01}) {
        auto b = chance_box(d, eps);
        if (!first) {
            if (!(b.p_lo(0, 0) <= prev.p_lo(0, 0) && b.p_hi(0, 0) >= prev.p_hi(0, 0))) {
                pass = false;
                detail << " nesting broken at eps=" << eps;
            }
        }
        prev = b;
        first = false;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "coverage %.4f in 0.95±0.005, nesting exact", cov);
    criterion(7, "chance box", pass, buf + detail.str());
}

void criterion8_vertex_property() {
    bool pass = true;
    long checked = 0;
    std::ostringstream detail;
    for (const auto& [s, box] : g_vertex_checks) {
        for (int i = 0; i < s.n(); ++i)
            for (int g = 0; g < s.total_periods(); ++g) {
                const bool p_ok = std::min(std::abs(s.p(i, g) - box.p_lo(i, g)),
                                           std::abs(s.p(i, g) - box.p_hi(i, g))) <= 1e-6;
                const bool q_ok = std::min(std::abs(s.q(i, g) - box.q_lo(i, g)),
                                           std::abs(s.q(i, g) - box.q_hi(i, g))) <= 1e-6;
                if (!p_ok || !q_ok) {
                    pass = false;
                    detail << " interior coordinate at node " << i;
                }
            }
        ++checked;
    }
    criterion(8, "vertex property", pass,
              std::to_string(checked) + " scenarios, all coordinates on box bounds" + detail.str());
}

void criterion9_degenerate_box_identity() {
    // Programmatic equivalent of `robust --load-lb 1 --load-ub 1` vs `plan`:
    // identical machine artifacts (the CLI-level byte comparison is a separate
    // ctest on the actual binaries).
    auto c = fixtures::three_node(4.0, 2.0, 1.5);
    ConeApproxConfig cfg;
    SolveOptions sopts;
    MilpInstance inst = build_deterministic(c, cfg);
    MilpSolution det = solve(inst, sopts);
    auto detx = extract(inst, det, c, 1, sopts);

    RobustOptions ropt;
    auto res = robust_plan(c, UncertaintyBox::from_factors(c, 1.0, 1.0), ropt);

    std::ostringstream a, b;
    write_plan_document(a, c, detx.plan, detx.states, detx.money);
    write_plan_document(b, c, res.plan, res.states, res.money);
    const bool pass = res.converged && res.iterations == 1 && a.str() == b.str();
    criterion(9, "degenerate-box identity", pass,
              pass ? "byte-identical plan documents, 1 iteration"
                   : "plan documents differ");
}

}  // namespace

int main() {
    std::printf("microplan acceptance suite\n");
    criterion1_planning_equivalence();
    criterion2_adversary_equivalence();
    criterion3_robust_dominance();
    criterion4_convergence_audit();
    criterion5_cone_containment();
    criterion6_physical_invariants();
    criterion7_chance_box();
    criterion8_vertex_property();
    criterion9_degenerate_box_identity();
    std::printf("%s (%d criterion failures)\n", g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
