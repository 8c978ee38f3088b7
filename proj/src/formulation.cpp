#include "microplan/formulation.hpp"

#include <algorithm>
#include <cmath>

namespace microplan {

namespace vars {
std::string line_count(int i, int j, int y) { return key("line_count", {i, j, y}); }
std::string line_built(int i, int j, int y) { return key("line_built", {i, j, y}); }
std::string line_level(int i, int j, int k, int y) { return key("line_level", {i, j, k, y}); }
std::string gen_built(int i, int y) { return key("gen_built", {i, y}); }
std::string gen_p(int s, int i, int g) { return key("gen_p", {s, i, g}); }
std::string gen_q(int s, int i, int g) { return key("gen_q", {s, i, g}); }
std::string volt2(int s, int i, int g) { return key("volt2", {s, i, g}); }
std::string cur2(int s, int i, int j, int g) { return key("cur2", {s, i, j, g}); }
std::string flow_p(int s, int i, int j, int g) { return key("flow_p", {s, i, j, g}); }
std::string flow_q(int s, int i, int j, int g) { return key("flow_q", {s, i, j, g}); }
std::string shed_p(int s, int i, int g) { return key("shed_p", {s, i, g}); }
std::string shed_q(int s, int i, int g) { return key("shed_q", {s, i, g}); }
std::string load_p(int s, int i, int g) { return key("load_p", {s, i, g}); }
std::string load_q(int s, int i, int g) { return key("load_q", {s, i, g}); }
std::string thermal_slack(int s, int i, int j, int g) { return key("thermal_slack", {s, i, j, g}); }
}  // namespace vars

BigMSet compute_big_m(const NetworkCase& c) {
    const auto& e = c.electrical;
    BigMSet m;
    const double cap = e.max_parallel * e.s_rating;
    m.psi_max = cap * cap / (e.v_min * e.v_min);
    const double dmax = c.n() > 1 ? c.max_distance() : 0.0;
    m.m1 = 2.0 * cap + std::max(e.r, e.x) * dmax * m.psi_max;
    m.m2 = (e.v_max * e.v_max - e.v_min * e.v_min) + 2.0 * dmax * (e.r + e.x) * cap +
           dmax * dmax * (e.r * e.r + e.x * e.x) * m.psi_max;
    return m;
}

namespace {

enum class ThermalMode { enforced, slack, omitted };

struct BlockOptions {
    int scenario = 0;
    const Scenario* loads = nullptr;         // fixed loads; nullptr => box variables
    const UncertaintyBox* box = nullptr;
    bool shedding = false;
    ThermalMode thermal = ThermalMode::enforced;
    double opex_weight = 0.0;                // scenario weight for b * gen_p (1/|S|)
    int only_period = -1;
    double load_bias = 0.0;
    // When the rating rows are relaxed or removed, flows may legitimately
    // exceed the rating; bounds must then come from the loads, not the
    // rating (0 keeps the rating-derived default).
    double flow_bound = 0.0;
};

class ModelBuilder {
  public:
    ModelBuilder(const NetworkCase& c, const ConeApproxConfig& cfg, const InvestmentPlan* fixed)
        : c_(c), cfg_(cfg), fixed_(fixed), m_(compute_big_m(c)) {
        cfg_.validate();
        for (int i = 0; i < c.n(); ++i)
            for (int j = i + 1; j < c.n(); ++j) edges_.emplace_back(i, j);
        flow_cap_ = c.electrical.max_parallel * c.electrical.s_rating;
        if (!fixed_) add_investment_block();
    }

    MilpInstance take() && {
        inst_.check_consistency();
        return std::move(inst_);
    }

    void add_block(const BlockOptions& opt);

  private:
    const NetworkCase& c_;
    ConeApproxConfig cfg_;
    const InvestmentPlan* fixed_;
    BigMSet m_;
    MilpInstance inst_;
    std::vector<std::pair<int, int>> edges_;
    double flow_cap_ = 0.0;

    double disc(int y) const {
        if (y > c_.years()) return 0.0;
        return std::pow(1.0 + c_.discount_rate, -y);
    }
    int xi() const { return c_.electrical.max_parallel; }
    int gamma_id(int i, int j, int y) const { return inst_.var_id(vars::line_count(i, j, y)); }
    int omega_id(int i, int j, int y) const { return inst_.var_id(vars::line_built(i, j, y)); }
    int loi_id(int i, int j, int k, int y) const {
        return inst_.var_id(vars::line_level(i, j, k, y));
    }
    int sigma_id(int i, int y) const { return inst_.var_id(vars::gen_built(i, y)); }

    void add_investment_block();
};

void ModelBuilder::add_investment_block() {
    const int n = c_.n();
    const double yearly_hours = [this] {
        double h = 0.0;
        for (int g = 0; g < c_.periods_per_year(); ++g) h += c_.period_weight(g);
        return h;
    }();

    for (int y = 1; y <= c_.years(); ++y) {
        const double dd = disc(y) - disc(y + 1);
        for (auto [i, j] : edges_) {
            const double d = c_.distance(i, j);
            inst_.add_var(vars::line_count(i, j, y), VarKind::integer, 0.0, xi(),
                          d * c_.cost.conductor_per_km * dd);
            inst_.add_var(vars::line_built(i, j, y), VarKind::binary, 0.0, 1.0,
                          d * c_.cost.pole_per_km * dd);
            for (int k = 1; k <= xi(); ++k)
                inst_.add_var(vars::line_level(i, j, k, y), VarKind::binary, 0.0, 1.0);
        }
        for (int i = 0; i < n; ++i)
            inst_.add_var(vars::gen_built(i, y), VarKind::binary, 0.0, 1.0,
                          c_.cost.generator * dd + c_.cost.gen_hourly_a * yearly_hours * disc(y));
        if (n > 1)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j)
                        inst_.add_var(key("conn_flow", {i, j, y}), VarKind::continuous, 0.0, n);
    }

    for (int y = 1; y <= c_.years(); ++y) {
        for (auto [i, j] : edges_) {
            // investments are permanent; levels tie the count to its indicator ladder
            if (y >= 2) {
                inst_.add_ge(key("line_monotone", {i, j, y}),
                             {{gamma_id(i, j, y), 1.0}, {gamma_id(i, j, y - 1), -1.0}}, 0.0);
            }
            std::vector<std::pair<int, double>> sum{{gamma_id(i, j, y), -1.0}};
            for (int k = 1; k <= xi(); ++k) sum.emplace_back(loi_id(i, j, k, y), 1.0);
            inst_.add_eq(key("level_sum", {i, j, y}), std::move(sum), 0.0);
            inst_.add_eq(key("level_first", {i, j, y}),
                         {{loi_id(i, j, 1, y), 1.0}, {omega_id(i, j, y), -1.0}}, 0.0);
            for (int k = 1; k < xi(); ++k)
                inst_.add_le(key("level_order", {i, j, k, y}),
                             {{loi_id(i, j, k + 1, y), 1.0}, {loi_id(i, j, k, y), -1.0}}, 0.0);
        }
        for (int i = 0; i < n; ++i)
            if (y >= 2)
                inst_.add_ge(key("gen_monotone", {i, y}),
                             {{sigma_id(i, y), 1.0}, {sigma_id(i, y - 1), -1.0}}, 0.0);

        if (n > 1) {
            // radiality-or-better: corridor count plus a single-commodity
            // fictitious flow rooted at the first node
            std::vector<std::pair<int, double>> omega_sum;
            for (auto [i, j] : edges_) omega_sum.emplace_back(omega_id(i, j, y), 1.0);
            inst_.add_ge(key("corridor_min", {y}), std::move(omega_sum), n - 1);

            for (auto [i, j] : edges_)
                for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}})
                    inst_.add_le(key("conn_cap", {a, b, y}),
                                 {{inst_.var_id(key("conn_flow", {a, b, y})), 1.0},
                                  {omega_id(i, j, y), -static_cast<double>(n)}},
                                 0.0);
            std::vector<std::pair<int, double>> src;
            for (int j = 1; j < n; ++j)
                src.emplace_back(inst_.var_id(key("conn_flow", {0, j, y})), 1.0);
            inst_.add_eq(key("conn_source", {y}), std::move(src), n - 1);
            for (int i = 1; i < n; ++i) {
                std::vector<std::pair<int, double>> bal;
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    bal.emplace_back(inst_.var_id(key("conn_flow", {j, i, y})), 1.0);
                    bal.emplace_back(inst_.var_id(key("conn_flow", {i, j, y})), -1.0);
                }
                inst_.add_eq(key("conn_balance", {i, y}), std::move(bal), 1.0);
            }
        }
    }
}

void ModelBuilder::add_block(const BlockOptions& opt) {
    const int n = c_.n();
    const int s = opt.scenario;
    const auto& el = c_.electrical;
    const double tanphi = el.tan_phi();
    const double vlo2 = el.v_min * el.v_min, vhi2 = el.v_max * el.v_max;
    const int G = c_.total_periods();
    const int g_first = opt.only_period >= 0 ? opt.only_period : 0;
    const int g_last = opt.only_period >= 0 ? opt.only_period + 1 : G;
    const double flow_cap = opt.flow_bound > 0.0 ? opt.flow_bound : flow_cap_;
    const double psi_cap = opt.flow_bound > 0.0 ? flow_cap * flow_cap / vlo2 : m_.psi_max;
    const double tau_cap = std::sqrt(2.0) * flow_cap;

    auto load_p_of = [&](int i, int g) { return opt.loads->p(i, g); };
    auto load_q_of = [&](int i, int g) { return opt.loads->q(i, g); };

    for (int g = g_first; g < g_last; ++g) {
        const int y = c_.year_of(g);

        // --- variables ---
        for (int i = 0; i < n; ++i) {
            double pg_lo = 0.0, pg_hi = el.p_gen_max;
            if (fixed_) {
                pg_lo = fixed_->gen_built(y, i) ? el.p_gen_min : 0.0;
                pg_hi = fixed_->gen_built(y, i) ? el.p_gen_max : 0.0;
            }
            const double opex_coeff = disc(y) * c_.period_weight(g) * c_.cost.gen_marginal_b *
                                      opt.opex_weight;
            inst_.add_var(vars::gen_p(s, i, g), VarKind::continuous, pg_lo, pg_hi, opex_coeff);
            const double qcap = tanphi * el.p_gen_max;
            inst_.add_var(vars::gen_q(s, i, g), VarKind::continuous, -qcap, qcap);
            inst_.add_var(vars::volt2(s, i, g), VarKind::continuous, vlo2, vhi2);
            if (opt.shedding) {
                const double ph = opt.box ? opt.box->p_hi(i, g) : load_p_of(i, g);
                const double qh = opt.box ? opt.box->q_hi(i, g) : load_q_of(i, g);
                const double import_cap = (n - 1) * flow_cap;
                inst_.add_var(vars::shed_p(s, i, g), VarKind::continuous, 0.0,
                              ph + import_cap + 1.0);
                inst_.add_var(vars::shed_q(s, i, g), VarKind::continuous, 0.0,
                              qh + import_cap + qcap + 1.0);
            }
            if (opt.box) {
                inst_.add_var(vars::load_p(s, i, g), VarKind::continuous, opt.box->p_lo(i, g),
                              opt.box->p_hi(i, g), -opt.load_bias);
                inst_.add_var(vars::load_q(s, i, g), VarKind::continuous, opt.box->q_lo(i, g),
                              opt.box->q_hi(i, g), -opt.load_bias);
            }
        }
        for (auto [i, j] : edges_) {
            const bool built = fixed_ && fixed_->line_built(y, i, j);
            const bool dead = fixed_ && !built;  // fixed plan without this corridor
            const double fc = dead ? 0.0 : flow_cap;
            inst_.add_var(vars::cur2(s, i, j, g), VarKind::continuous, 0.0, dead ? 0.0 : psi_cap);
            for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                inst_.add_var(vars::flow_p(s, a, b, g), VarKind::continuous, -fc, fc);
                inst_.add_var(vars::flow_q(s, a, b, g), VarKind::continuous, -fc, fc);
                if (opt.thermal != ThermalMode::omitted && !dead)
                    inst_.add_var(key("flow_norm", {s, a, b, g}), VarKind::continuous, 0.0, tau_cap);
            }
            if (opt.thermal == ThermalMode::slack && !dead)
                inst_.add_var(vars::thermal_slack(s, i, j, g), VarKind::continuous, 0.0,
                              tau_cap + 1.0, 1.0);
        }

        // --- generator capability and reactive envelope ---
        for (int i = 0; i < n; ++i) {
            const int pg = inst_.var_id(vars::gen_p(s, i, g));
            const int qg = inst_.var_id(vars::gen_q(s, i, g));
            if (!fixed_) {
                inst_.add_le(key("gen_cap_hi", {s, i, g}),
                             {{pg, 1.0}, {sigma_id(i, y), -el.p_gen_max}}, 0.0);
                inst_.add_ge(key("gen_cap_lo", {s, i, g}),
                             {{pg, 1.0}, {sigma_id(i, y), -el.p_gen_min}}, 0.0);
            }
            inst_.add_le(key("gen_q_hi", {s, i, g}), {{qg, 1.0}, {pg, -tanphi}}, 0.0);
            inst_.add_ge(key("gen_q_lo", {s, i, g}), {{qg, 1.0}, {pg, tanphi}}, 0.0);
        }

        // --- nodal balance, with shedding and load variables when asked ---
        for (int i = 0; i < n; ++i) {
            std::vector<std::pair<int, double>> bp{{inst_.var_id(vars::gen_p(s, i, g)), 1.0}};
            std::vector<std::pair<int, double>> bq{{inst_.var_id(vars::gen_q(s, i, g)), 1.0}};
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                bp.emplace_back(inst_.var_id(vars::flow_p(s, i, j, g)), -1.0);
                bq.emplace_back(inst_.var_id(vars::flow_q(s, i, j, g)), -1.0);
            }
            if (opt.shedding) {
                bp.emplace_back(inst_.var_id(vars::shed_p(s, i, g)), 1.0);
                bq.emplace_back(inst_.var_id(vars::shed_q(s, i, g)), 1.0);
            }
            double rp = 0.0, rq = 0.0;
            if (opt.box) {
                bp.emplace_back(inst_.var_id(vars::load_p(s, i, g)), -1.0);
                bq.emplace_back(inst_.var_id(vars::load_q(s, i, g)), -1.0);
            } else {
                rp = load_p_of(i, g);
                rq = load_q_of(i, g);
            }
            inst_.add_eq(key("balance_p", {s, i, g}), std::move(bp), rp);
            inst_.add_eq(key("balance_q", {s, i, g}), std::move(bq), rq);
        }

        // capacity cover: total committed capacity carries the total load
        // (valid because losses are nonnegative; only for shed-free models
        // with free investments — it sharpens the LP bound considerably)
        if (!fixed_ && !opt.shedding) {
            std::vector<std::pair<int, double>> cap;
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                cap.emplace_back(sigma_id(i, y), el.p_gen_max);
                total += load_p_of(i, g);
            }
            inst_.add_ge(key("capacity_cover", {s, g}), std::move(cap), total);
        }

        // --- per-line physics ---
        for (auto [i, j] : edges_) {
            const bool dead = fixed_ && !fixed_->line_built(y, i, j);
            if (dead) continue;
            const double d = c_.distance(i, j);
            const int psi = inst_.var_id(vars::cur2(s, i, j, g));
            const int pij = inst_.var_id(vars::flow_p(s, i, j, g));
            const int pji = inst_.var_id(vars::flow_p(s, j, i, g));
            const int qij = inst_.var_id(vars::flow_q(s, i, j, g));
            const int qji = inst_.var_id(vars::flow_q(s, j, i, g));
            const int nui = inst_.var_id(vars::volt2(s, i, g));
            const int nuj = inst_.var_id(vars::volt2(s, j, g));

            // loss and voltage-drop identities, one big-M window per level
            auto window = [&](const char* fam, std::vector<std::pair<int, double>> body, int k,
                              double bigm) {
                if (fixed_) {
                    if (fixed_->line_count(y, i, j) == k)
                        inst_.add_eq(key(fam, {s, i, j, k, g}), std::move(body), 0.0);
                    return;
                }
                auto lo_terms = body;
                body.emplace_back(loi_id(i, j, k, y), bigm);
                lo_terms.emplace_back(loi_id(i, j, k, y), -bigm);
                if (k + 1 <= xi()) {
                    body.emplace_back(loi_id(i, j, k + 1, y), -bigm);
                    lo_terms.emplace_back(loi_id(i, j, k + 1, y), bigm);
                }
                inst_.add_le(key(std::string(std::string(fam) + "_hi").c_str(), {s, i, j, k, g}),
                             std::move(body), bigm);
                inst_.add_ge(key(std::string(std::string(fam) + "_lo").c_str(), {s, i, j, k, g}),
                             std::move(lo_terms), -bigm);
            };
            const int kmax = fixed_ ? fixed_->line_count(y, i, j) : xi();
            for (int k = 1; k <= (fixed_ ? kmax : xi()); ++k) {
                window("loss_p", {{pij, 1.0}, {pji, 1.0}, {psi, -el.r * d / k}}, k, m_.m1);
                window("loss_q", {{qij, 1.0}, {qji, 1.0}, {psi, -el.x * d / k}}, k, m_.m1);
                window("vdrop",
                       {{nuj, 1.0},
                        {nui, -1.0},
                        {pij, 2.0 * d * el.r / k},
                        {qij, 2.0 * d * el.x / k},
                        {psi, -d * d * (el.r * el.r + el.x * el.x) / (k * k)}},
                       k, m_.m2);
            }

            // losses cannot be negative
            inst_.add_ge(key("loss_pos_p", {s, i, j, g}), {{pij, 1.0}, {pji, 1.0}}, 0.0);
            inst_.add_ge(key("loss_pos_q", {s, i, j, g}), {{qij, 1.0}, {qji, 1.0}}, 0.0);

            // current-voltage-power cone, both orientations
            const double u_max = 0.5 * (psi_cap + vhi2);
            approximate_rotated_cone(inst_, LinExpr(pij), LinExpr(qij), LinExpr(psi),
                                     LinExpr(nui), u_max, cfg_, key("soc", {s, i, j, g}));
            approximate_rotated_cone(inst_, LinExpr(pji), LinExpr(qji), LinExpr(psi),
                                     LinExpr(nuj), u_max, cfg_, key("soc", {s, j, i, g}));

            // thermal rating through a shared norm epigraph per orientation
            if (opt.thermal != ThermalMode::omitted) {
                for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                    const int tau = inst_.var_id(key("flow_norm", {s, a, b, g}));
                    const int pa = inst_.var_id(vars::flow_p(s, a, b, g));
                    const int qa = inst_.var_id(vars::flow_q(s, a, b, g));
                    approximate_cone(inst_, LinExpr(pa), LinExpr(qa), LinExpr(tau), tau_cap, cfg_,
                                     key("thermal_cone", {s, a, b, g}));
                    if (fixed_) {
                        const double cap = fixed_->line_count(y, i, j) * el.s_rating;
                        if (opt.thermal == ThermalMode::slack) {
                            inst_.add_le(key("thermal_cap", {s, a, b, g}),
                                         {{tau, 1.0},
                                          {inst_.var_id(vars::thermal_slack(s, i, j, g)), -1.0}},
                                         cap);
                        } else {
                            inst_.add_le(key("thermal_cap", {s, a, b, g}), {{tau, 1.0}}, cap);
                        }
                    } else {
                        inst_.add_le(key("thermal_cap0", {s, a, b, g}),
                                     {{tau, 1.0}, {omega_id(i, j, y), -xi() * el.s_rating}}, 0.0);
                        for (int k = 1; k < xi(); ++k) {
                            std::vector<std::pair<int, double>> row{{tau, 1.0},
                                                                    {loi_id(i, j, k, y), tau_cap}};
                            row.emplace_back(loi_id(i, j, k + 1, y), -tau_cap);
                            inst_.add_le(key("thermal_cap", {s, a, b, k, g}), std::move(row),
                                         k * el.s_rating + tau_cap);
                        }
                    }
                }
            }

            // angle-difference tightening; the bilinear volt2*count goes
            // through McCormick when the plan is free, constants otherwise
            const double tant = std::tan(el.theta_delta);
            for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                const int pa = inst_.var_id(vars::flow_p(s, a, b, g));
                const int qa = inst_.var_id(vars::flow_q(s, a, b, g));
                const int nua = inst_.var_id(vars::volt2(s, a, g));
                std::vector<std::pair<int, double>> row_a{
                    {qa, el.r * d + el.x * d * tant}, {pa, el.r * d * tant - el.x * d}};
                std::vector<std::pair<int, double>> row_b{
                    {pa, el.x * d + el.r * d * tant}, {qa, el.x * d * tant - el.r * d}};
                if (fixed_) {
                    const double gcoef = tant * fixed_->line_count(y, i, j);
                    row_a.emplace_back(nua, -gcoef);
                    row_b.emplace_back(nua, -gcoef);
                    inst_.add_le(key("angle_a", {s, a, b, g}), std::move(row_a), 0.0);
                    inst_.add_le(key("angle_b", {s, a, b, g}), std::move(row_b), 0.0);
                } else {
                    const int w = inst_.add_var(key("volt_count_mc", {s, a, b, g}),
                                                VarKind::continuous, 0.0, xi() * vhi2);
                    const int gam = gamma_id(i, j, y);
                    inst_.add_ge(key("mc_lo1", {s, a, b, g}), {{w, 1.0}, {gam, -vlo2}}, 0.0);
                    inst_.add_ge(key("mc_lo2", {s, a, b, g}),
                                 {{w, 1.0}, {gam, -vhi2}, {nua, -static_cast<double>(xi())}},
                                 -vhi2 * xi());
                    inst_.add_le(key("mc_hi1", {s, a, b, g}), {{w, 1.0}, {gam, -vhi2}}, 0.0);
                    inst_.add_le(key("mc_hi2", {s, a, b, g}),
                                 {{w, 1.0}, {gam, -vlo2}, {nua, -static_cast<double>(xi())}},
                                 -vlo2 * xi());
                    row_a.emplace_back(w, -tant);
                    row_b.emplace_back(w, -tant);
                    inst_.add_le(key("angle_a", {s, a, b, g}), std::move(row_a), 0.0);
                    inst_.add_le(key("angle_b", {s, a, b, g}), std::move(row_b), 0.0);
                }
            }
        }
    }
}

void check_scenario_shape(const NetworkCase& c, const Scenario& s) {
    if (s.n() != c.n() || s.total_periods() != c.total_periods())
        throw ModelError("scenario shape does not match the case (nodes x total periods)");
}

}  // namespace

MilpInstance build_main_problem(const NetworkCase& c, const std::vector<Scenario>& scenarios,
                                const ConeApproxConfig& cfg) {
    if (scenarios.empty()) throw ModelError("main problem: scenario list must be non-empty");
    for (const auto& s : scenarios) check_scenario_shape(c, s);
    ModelBuilder b(c, cfg, nullptr);
    for (size_t s = 0; s < scenarios.size(); ++s) {
        BlockOptions opt;
        opt.scenario = static_cast<int>(s);
        opt.loads = &scenarios[s];
        opt.opex_weight = 1.0 / static_cast<double>(scenarios.size());
        b.add_block(opt);
    }
    return std::move(b).take();
}

MilpInstance build_deterministic(const NetworkCase& c, const ConeApproxConfig& cfg) {
    return build_main_problem(c, {deterministic_scenario(c)}, cfg);
}

MilpInstance build_generation_adversarial(const NetworkCase& c, const InvestmentPlan& plan,
                                          const UncertaintyBox& box, const TargetMask& mask,
                                          const ConeApproxConfig& cfg, double load_bias) {
    if (mask.family != TargetMask::Family::generation || mask.empty())
        throw ModelError("generation adversarial: requires a non-empty generation mask");
    ModelBuilder b(c, cfg, &plan);
    BlockOptions opt;
    opt.box = &box;
    opt.shedding = true;
    opt.load_bias = load_bias;
    Scenario det = deterministic_scenario(c);
    opt.loads = &det;  // unused for balance (box set) but keeps bounds sane
    b.add_block(opt);
    MilpInstance inst = std::move(b).take();
    for (const auto& e : mask.entries) {
        inst.add_obj(inst.var_id(vars::shed_p(0, e[0], e[1])), -1.0);
        inst.add_obj(inst.var_id(vars::shed_q(0, e[0], e[1])), -1.0);
    }
    return inst;
}

MilpInstance build_generation_corrective(const NetworkCase& c, const InvestmentPlan& plan,
                                         const Scenario& s, const ConeApproxConfig& cfg) {
    check_scenario_shape(c, s);
    ModelBuilder b(c, cfg, &plan);
    BlockOptions opt;
    opt.loads = &s;
    opt.shedding = true;
    b.add_block(opt);
    MilpInstance inst = std::move(b).take();
    for (int i = 0; i < c.n(); ++i)
        for (int g = 0; g < c.total_periods(); ++g) {
            inst.add_obj(inst.var_id(vars::shed_p(0, i, g)), 1.0);
            inst.add_obj(inst.var_id(vars::shed_q(0, i, g)), 1.0);
        }
    return inst;
}

namespace {

// Flows in rating-relaxed problems are bounded by what the loads (plus the
// rating, for circulation headroom) can push, not by the rating itself.
double relaxed_flow_bound(const NetworkCase& c, const Scenario& s) {
    double worst = 0.0;
    for (int g = 0; g < c.total_periods(); ++g) {
        double tot = 0.0;
        for (int i = 0; i < c.n(); ++i) tot += std::abs(s.p(i, g)) + std::abs(s.q(i, g));
        worst = std::max(worst, tot);
    }
    return worst + c.electrical.max_parallel * c.electrical.s_rating + 1.0;
}

}  // namespace

MilpInstance build_thermal_corrective(const NetworkCase& c, const InvestmentPlan& plan,
                                      const Scenario& s, const ConeApproxConfig& cfg) {
    check_scenario_shape(c, s);
    ModelBuilder b(c, cfg, &plan);
    BlockOptions opt;
    opt.loads = &s;
    opt.thermal = ThermalMode::slack;
    opt.flow_bound = relaxed_flow_bound(c, s);
    b.add_block(opt);
    return std::move(b).take();  // slack variables already carry cost 1
}

MilpInstance build_thermal_probe(const NetworkCase& c, const InvestmentPlan& plan,
                                 const Scenario& s, int period, const ConeApproxConfig& cfg) {
    check_scenario_shape(c, s);
    ModelBuilder b(c, cfg, &plan);
    BlockOptions opt;
    opt.loads = &s;
    opt.thermal = ThermalMode::omitted;
    opt.only_period = period;
    opt.flow_bound = relaxed_flow_bound(c, s);
    b.add_block(opt);
    return std::move(b).take();
}

}  // namespace microplan
