// microplan: minimum-NPV expansion planning for isolated microgrids.
// Subcommands: plan (deterministic), robust (load-uncertain), check (audit).

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "microplan/case_io.hpp"
#include "microplan/chance.hpp"
#include "microplan/check_plan.hpp"
#include "microplan/formulation.hpp"
#include "microplan/oracle.hpp"
#include "microplan/robust.hpp"

namespace {

using namespace microplan;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitBackend = 4;

struct CommonOpts {
    std::string out_dir = ".";
    double btn_accuracy = 1e-3;
    double mip_gap = 1e-6;
    double time_limit = 300.0;
    double tol = 1e-6;
    std::string backend = "builtin";
    std::string dump_lp;  // plan only: write the model in LP text form
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out-dir", o.out_dir, "Directory for result artifacts")
        ->capture_default_str();
    cmd->add_option("--btn-accuracy", o.btn_accuracy,
                    "Relative accuracy of the polyhedral cone approximation")
        ->capture_default_str();
    cmd->add_option("--mip-gap", o.mip_gap, "Relative MIP optimality gap")->capture_default_str();
    cmd->add_option("--time-limit", o.time_limit, "Solver time limit per solve, seconds")
        ->capture_default_str();
    cmd->add_option("--tol", o.tol, "Feasibility / problematic-scenario tolerance")
        ->capture_default_str();
    cmd->add_option("--backend", o.backend, "MILP backend key")->capture_default_str();
}

RobustOptions robust_options(const CommonOpts& o) {
    RobustOptions r;
    r.cone.accuracy_eps = o.btn_accuracy;
    r.solve.backend = o.backend;
    r.solve.mip_gap = o.mip_gap;
    r.solve.time_limit = o.time_limit;
    r.tol = o.tol;
    return r;
}

void write_summary(std::ostream& os, const std::string& name, const MoneyBreakdown& money,
                   double ra, long scenarios, long iterations, double wall_seconds) {
    auto row = [&os](const std::string& label, const std::string& value) {
        os << label;
        for (size_t k = label.size(); k < 28; ++k) os << ' ';
        os << value << "\n";
    };
    char buf[64];
    os << "Planning summary: " << name << "\n";
    std::snprintf(buf, sizeof(buf), "%.2f", money.discounted_opex(ra));
    row("OPEX [$]", buf);
    std::snprintf(buf, sizeof(buf), "%.2f", money.discounted_capex(ra));
    row("CAPEX [$]", buf);
    std::snprintf(buf, sizeof(buf), "%.2f", money.npv);
    row("Total cost [$]", buf);
    row("Total amount of scenarios", scenarios >= 0 ? std::to_string(scenarios) : "/");
    row("Number of iterations", iterations >= 0 ? std::to_string(iterations) : "/");
    std::snprintf(buf, sizeof(buf), "%.2f", wall_seconds);
    row("Computation time [s]", buf);
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw CaseFormatError(dir, "cannot create output directory: " + ec.message());
}

std::ofstream open_out(const std::string& dir, const char* file) {
    const fs::path p = fs::path(dir) / file;
    std::ofstream out(p);
    if (!out) throw CaseFormatError(p.string(), "cannot open for writing");
    return out;
}

int cmd_plan(const std::string& case_path, const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    NetworkCase c = load_case_file(case_path);
    ConeApproxConfig cone;
    cone.accuracy_eps = o.btn_accuracy;
    SolveOptions sopts;
    sopts.backend = o.backend;
    sopts.mip_gap = o.mip_gap;
    sopts.time_limit = o.time_limit;

    MilpInstance inst = build_deterministic(c, cone);
    if (!o.dump_lp.empty()) {
        std::ofstream lp(o.dump_lp);
        if (!lp) throw CaseFormatError(o.dump_lp, "cannot open for writing");
        inst.write_lp(lp);
    }
    MilpSolution sol = solve(inst, sopts);
    if (!sol.usable()) {
        std::cerr << "plan: no solution (" << to_string(sol.status) << ")\n";
        return sol.status == SolveStatus::time_limit ? kExitNoConvergence : kExitViolation;
    }
    ExtractedSolution ex = extract(inst, sol, c, 1, sopts);

    CheckTolerances ctol;
    ctol.hard_abs = o.tol;
    ctol.cone_allowance = o.btn_accuracy;
    auto report = check_plan(c, ex.plan, ex.states, {}, ctol);
    if (!report.feasible())
        std::cerr << "warning: solution failed self-check (" << report.violations.size()
                  << " violations)\n";

    ensure_dir(o.out_dir);
    {
        auto out = open_out(o.out_dir, "plan.json");
        write_plan_document(out, c, ex.plan, ex.states, ex.money);
    }
    {
        auto out = open_out(o.out_dir, "solver.log");
        out << sol.log;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    {
        auto out = open_out(o.out_dir, "summary.txt");
        write_summary(out, c.name, ex.money, c.discount_rate, -1, -1, wall);
    }
    write_summary(std::cout, c.name, ex.money, c.discount_rate, -1, -1, wall);
    return report.feasible() ? kExitOk : kExitViolation;
}

int run_robust_loop(const NetworkCase& c, const UncertaintyBox& box, const RobustOptions& ropt,
                    RobustResult& res) {
    // Same loop as robust_plan, but resumable from a pre-seeded protection set.
    for (int it = 1; it <= ropt.max_iterations; ++it) {
        MilpInstance inst = build_main_problem(c, res.scenarios, ropt.cone);
        MilpSolution sol = solve(inst, ropt.solve);
        if (!sol.usable())
            throw SolveError("robust: main problem " + std::string(to_string(sol.status)));
        ExtractedSolution ex =
            extract(inst, sol, c, static_cast<int>(res.scenarios.size()), ropt.solve);
        auto problematic = adversary_sweep(c, ex.plan, box, ropt);
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
            return it;
        }
        for (auto& ps : problematic) {
            res.scenarios.push_back(std::move(ps.scenario));
            res.residuals.push_back(ps.residual);
        }
    }
    res.converged = false;
    return ropt.max_iterations;
}

int cmd_robust(const std::string& case_path, double lb, double ub, double epsilon, uint64_t seed,
               int max_iterations, const std::string& scenarios_in, const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    NetworkCase c = load_case_file(case_path);

    UncertaintyBox box;
    std::string coverage_note;
    if (epsilon > 0.0) {
        LoadDistribution dist = LoadDistribution::from_case(c);
        box = chance_box(dist, epsilon);
        const double cov = verify_coverage(dist, box, 100000, seed);
        char buf[112];
        std::snprintf(buf, sizeof(buf),
                      "Chance box: epsilon=%g, Monte Carlo coverage %.4f (1e5 samples, seed %llu)",
                      epsilon, cov, static_cast<unsigned long long>(seed));
        coverage_note = buf;
    } else {
        if (!(lb <= 1.0 && 1.0 <= ub))
            throw CaseFormatError("--load-lb/--load-ub",
                                  "must satisfy lb <= 1 <= ub (box contains the forecast)");
        box = UncertaintyBox::from_factors(c, lb, ub);
    }

    RobustOptions ropt = robust_options(o);
    ropt.max_iterations = max_iterations;

    RobustResult res;
    res.scenarios.push_back(deterministic_scenario(c));
    res.residuals.push_back(0.0);
    if (!scenarios_in.empty()) {
        for (auto& s : read_scenario_file(scenarios_in)) {
            if (s.fingerprint() == res.scenarios[0].fingerprint()) continue;
            if (!box.contains(s, 1e-6))
                throw CaseFormatError(scenarios_in, "scenario outside the uncertainty box");
            res.scenarios.push_back(std::move(s));
            res.residuals.push_back(0.0);
        }
    }
    run_robust_loop(c, box, ropt, res);

    ensure_dir(o.out_dir);
    {
        auto out = open_out(o.out_dir, "plan.json");
        write_plan_document(out, c, res.plan, res.states, res.money);
    }
    {
        auto out = open_out(o.out_dir, "scenarios.jsonl");
        for (size_t k = 0; k < res.scenarios.size(); ++k)
            write_scenario_record(out, res.scenarios[k], res.residuals[k]);
    }
    {
        auto out = open_out(o.out_dir, "robust.json");
        nlohmann::ordered_json j;
        j["schema_version"] = 1;
        j["case"] = c.name;
        j["converged"] = res.converged;
        j["iterations"] = res.iterations;
        j["objective"] = res.money.npv;
        j["scenario_count"] = res.scenarios.size();
        nlohmann::ordered_json audit = nlohmann::ordered_json::array();
        for (const auto& a : res.audit)
            audit.push_back({{"iteration", a.iteration},
                             {"main_objective", a.main_objective},
                             {"scenarios_total", a.scenarios_total},
                             {"scenarios_added", a.scenarios_added},
                             {"worst_residual",
                              std::isfinite(a.worst_residual) ? a.worst_residual : 1e99}});
        j["audit"] = std::move(audit);
        out << j.dump(1) << "\n";
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    {
        auto out = open_out(o.out_dir, "summary.txt");
        write_summary(out, c.name, res.money, c.discount_rate,
                      static_cast<long>(res.scenarios.size()), res.iterations, wall);
        if (!coverage_note.empty()) out << coverage_note << "\n";
    }
    write_summary(std::cout, c.name, res.money, c.discount_rate,
                  static_cast<long>(res.scenarios.size()), res.iterations, wall);
    if (!coverage_note.empty()) std::cout << coverage_note << "\n";

    if (!res.converged) {
        std::cerr << "robust: iteration cap reached without a clean sweep\n";
        return kExitNoConvergence;
    }
    return kExitOk;
}

int cmd_check(const std::string& case_path, const std::string& plan_path,
              const std::string& scenario_path, const CommonOpts& o) {
    NetworkCase c = load_case_file(case_path);
    PlanDocument doc = read_plan_document_file(plan_path);
    if (doc.plan.n() != c.n() || doc.plan.years() != c.years()) {
        std::cerr << "check: plan dimensions do not match the case\n";
        return kExitInput;
    }

    bool ok = true;
    if (!scenario_path.empty()) {
        RobustOptions ropt = robust_options(o);
        auto scenarios = read_scenario_file(scenario_path);
        if (scenarios.empty()) {
            std::cerr << "check: no scenarios in " << scenario_path << "\n";
            return kExitInput;
        }
        std::cout << "scenario residuals under the stored plan:\n";
        for (size_t k = 0; k < scenarios.size(); ++k) {
            if (scenarios[k].n() != c.n() || scenarios[k].total_periods() != c.total_periods()) {
                std::cerr << "check: scenario " << k << " shape mismatch\n";
                return kExitInput;
            }
            const double gen = corrective_generation(c, doc.plan, scenarios[k], ropt);
            const double thermal = corrective_thermal(c, doc.plan, scenarios[k], ropt);
            std::printf("  [%zu] generation %.9g   thermal %.9g\n", k, gen, thermal);
            ok = ok && gen <= o.tol && thermal <= o.tol;
        }
    } else {
        if (doc.dispatches.empty()) {
            std::cerr << "check: plan document carries no dispatch\n";
            return kExitInput;
        }
        CheckTolerances ctol;
        ctol.hard_abs = o.tol;
        ctol.cone_allowance = o.btn_accuracy;
        auto report = check_plan(c, doc.plan, {doc.dispatches[0]}, {}, ctol);
        auto table = oracle::evaluate_constraints(c, doc.plan, {doc.dispatches[0]});
        std::cout << "constraint family residuals:\n";
        for (const auto& e : table)
            std::printf("  %-22s max %.3e  violations %ld\n", e.family.c_str(), e.max_residual,
                        e.violations);
        if (!report.feasible()) {
            std::cout << "hard violations:\n";
            for (const auto& v : report.violations)
                std::printf("  %-16s %-24s magnitude %.3e\n", v.family.c_str(), v.where.c_str(),
                            v.magnitude);
            ok = false;
        }
        std::printf("max power-current cone relaxation gap: %.3e\n", report.max_soc_gap());
    }
    std::cout << (ok ? "CHECK OK\n" : "CHECK FAILED\n");
    return ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"microplan: isolated microgrid expansion planning"};
    app.require_subcommand(1);

    CommonOpts plan_o, robust_o, check_o;
    std::string plan_case, robust_case, check_case, check_plan_path, check_scenario;
    double lb = 1.0, ub = 1.0, epsilon = 0.0;
    uint64_t seed = 12345;
    int max_iterations = 20;
    std::string scenarios_in;

    auto* plan_cmd = app.add_subcommand("plan", "Deterministic minimum-NPV plan");
    plan_cmd->add_option("case", plan_case, "Case document (JSON)")->required();
    plan_cmd->add_option("--dump-lp", plan_o.dump_lp,
                         "Also write the model in LP text form for inspection");
    add_common(plan_cmd, plan_o);

    auto* robust_cmd =
        app.add_subcommand("robust", "Robust plan under rectangular load uncertainty");
    robust_cmd->add_option("case", robust_case, "Case document (JSON)")->required();
    auto* lb_opt = robust_cmd
                       ->add_option("--load-lb", lb, "Lower load factor (box = [lb*P, ub*P])")
                       ->capture_default_str();
    robust_cmd->add_option("--load-ub", ub, "Upper load factor")->capture_default_str();
    robust_cmd
        ->add_option("--epsilon", epsilon,
                     "Chance level: box from the case's uncertainty section with joint mass "
                     "1-epsilon")
        ->excludes(lb_opt);
    robust_cmd->add_option("--seed", seed, "Monte Carlo seed (coverage audit only)")
        ->capture_default_str();
    robust_cmd->add_option("--max-iterations", max_iterations, "Outer loop cap")
        ->capture_default_str();
    robust_cmd->add_option("--scenarios-in", scenarios_in,
                           "Seed the protection set from a scenario dump (resume)");
    add_common(robust_cmd, robust_o);

    auto* check_cmd = app.add_subcommand("check", "Re-evaluate a stored plan");
    check_cmd->add_option("case", check_case, "Case document (JSON)")->required();
    check_cmd->add_option("plan", check_plan_path, "Plan document from a previous run")->required();
    check_cmd->add_option("scenario", check_scenario,
                          "Optional scenario file (.json or .jsonl) to test the plan against");
    add_common(check_cmd, check_o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan_cmd->parsed()) return cmd_plan(plan_case, plan_o);
        if (robust_cmd->parsed())
            return cmd_robust(robust_case, lb, ub, epsilon, seed, max_iterations, scenarios_in,
                              robust_o);
        if (check_cmd->parsed())
            return cmd_check(check_case, check_plan_path, check_scenario, check_o);
    } catch (const CaseFormatError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const SolveError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return kExitViolation;
    }
    return kExitInput;
}
