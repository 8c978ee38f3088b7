#include "microplan/types.hpp"

#include <algorithm>
#include <cmath>

namespace microplan {

double ElectricalSpec::tan_phi() const {
    return std::tan(std::acos(cos_phi_min));
}

double NetworkCase::growth_factor(int g) const {
    return std::pow(1.0 + growth_rate, year_of(g) - 1);
}

double NetworkCase::max_distance() const {
    double d = 0.0;
    for (int i = 0; i < n(); ++i)
        for (int j = i + 1; j < n(); ++j) d = std::max(d, distances[i][j]);
    return d;
}

double NetworkCase::peak_total_load() const {
    double peak = 0.0;
    for (int g = 0; g < total_periods(); ++g) {
        double total = 0.0;
        for (int i = 0; i < n(); ++i) total += p_load(i, g);
        peak = std::max(peak, total);
    }
    return peak;
}

void NetworkCase::validate() const {
    auto fail = [](const std::string& path, const std::string& msg) {
        throw CaseFormatError(path, msg);
    };
    if (nodes.empty()) fail("nodes", "at least one node is required");
    if (horizon_years < 1) fail("horizon.years", "must be >= 1");
    if (periods_per_day < 1) fail("horizon.periods_per_day", "must be >= 1");
    if (days.empty()) fail("horizon.representative_days", "at least one representative day");
    for (size_t d = 0; d < days.size(); ++d) {
        const std::string p = "horizon.representative_days[" + std::to_string(d) + "]";
        if (days[d].hours != periods_per_day) fail(p + ".hours", "must equal periods_per_day");
        if (!(days[d].h_share > 0.0)) fail(p + ".h_share", "must be > 0");
    }
    if (!(growth_rate > -1.0)) fail("growth_rate", "must be > -1");
    if (discount_rate < 0.0 || discount_rate >= 1.0) fail("discount_rate", "must be in [0, 1)");

    const int ppy = periods_per_year();
    for (size_t i = 0; i < nodes.size(); ++i) {
        const std::string p = "nodes[" + std::to_string(i) + "]";
        if (nodes[i].id.empty()) fail(p + ".id", "must be non-empty");
        for (size_t j = 0; j < i; ++j)
            if (nodes[j].id == nodes[i].id) fail(p + ".id", "duplicate node id '" + nodes[i].id + "'");
        if (static_cast<int>(nodes[i].p_load.size()) != ppy)
            fail(p + ".p_load", "expected " + std::to_string(ppy) + " values, got " +
                                    std::to_string(nodes[i].p_load.size()));
        if (static_cast<int>(nodes[i].q_load.size()) != ppy)
            fail(p + ".q_load", "expected " + std::to_string(ppy) + " values, got " +
                                    std::to_string(nodes[i].q_load.size()));
        for (int t = 0; t < ppy; ++t) {
            if (!(nodes[i].p_load[t] >= 0.0))
                fail(p + ".p_load[" + std::to_string(t) + "]", "must be >= 0");
            if (!(nodes[i].q_load[t] >= 0.0))
                fail(p + ".q_load[" + std::to_string(t) + "]", "must be >= 0");
        }
    }

    if (static_cast<int>(distances.size()) != n()) fail("distances", "must be an n x n matrix");
    for (int i = 0; i < n(); ++i) {
        const std::string p = "distances[" + std::to_string(i) + "]";
        if (static_cast<int>(distances[i].size()) != n()) fail(p, "must have n entries");
        if (distances[i][i] != 0.0) fail(p + "[" + std::to_string(i) + "]", "diagonal must be 0");
        for (int j = 0; j < n(); ++j) {
            if (distances[i][j] != distances[j][i])
                fail(p + "[" + std::to_string(j) + "]", "matrix must be symmetric");
            if (i != j && !(distances[i][j] > 0.0))
                fail(p + "[" + std::to_string(j) + "]", "off-diagonal distances must be > 0");
        }
    }

    const auto& e = electrical;
    if (!(e.v_min > 0.0)) fail("electrical.v_min", "must be > 0");
    if (!(e.v_max > e.v_min)) fail("electrical.v_max", "must be > v_min");
    if (!(e.r > 0.0)) fail("electrical.r", "must be > 0");
    if (!(e.x > 0.0)) fail("electrical.x", "must be > 0");
    if (e.s_rating < 0.0) fail("electrical.s_rating", "must be >= 0");
    if (e.p_gen_min < 0.0) fail("electrical.p_gen_min", "must be >= 0");
    if (e.p_gen_max < e.p_gen_min) fail("electrical.p_gen_max", "must be >= p_gen_min");
    if (!(e.cos_phi_min > 0.0 && e.cos_phi_min <= 1.0))
        fail("electrical.cos_phi_min", "must be in (0, 1]");
    if (e.max_parallel < 1) fail("electrical.max_parallel", "must be >= 1");
    if (!(e.theta_delta > 0.0 && e.theta_delta < 1.5707963267948966))
        fail("electrical.theta_delta", "must be in (0, pi/2)");

    const auto& c = cost;
    if (c.conductor_per_km < 0 || c.pole_per_km < 0 || c.generator < 0 || c.gen_hourly_a < 0 ||
        c.gen_marginal_b < 0)
        fail("costs", "all cost parameters must be >= 0");
    if (uncertainty.family != UncertaintySpec::Family::none && uncertainty.dispersion < 0.0)
        fail("uncertainty.dispersion", "must be >= 0");
}

InvestmentPlan::InvestmentPlan(int n, int years, int max_parallel)
    : n_(n), years_(years), xi_(max_parallel),
      lines_(static_cast<size_t>(n) * n * years, 0),
      gens_(static_cast<size_t>(n) * years, 0) {}

int InvestmentPlan::line_count(int y, int i, int j) const {
    if (y < 1) return 0;
    return lines_[lidx(y, i, j)];
}

bool InvestmentPlan::line_built(int y, int i, int j) const { return line_count(y, i, j) >= 1; }

bool InvestmentPlan::level_active(int y, int i, int j, int k) const {
    return line_count(y, i, j) >= k;
}

bool InvestmentPlan::gen_built(int y, int i) const {
    if (y < 1) return false;
    return gens_[(y - 1) * n_ + i] != 0;
}

void InvestmentPlan::set_line_count(int y, int i, int j, int count) {
    lines_[lidx(y, i, j)] = count;
    lines_[lidx(y, j, i)] = count;
}

void InvestmentPlan::set_gen(int y, int i, bool built) {
    gens_[(y - 1) * n_ + i] = built ? 1 : 0;
}

bool InvestmentPlan::empty() const {
    return std::all_of(lines_.begin(), lines_.end(), [](int v) { return v == 0; }) &&
           std::all_of(gens_.begin(), gens_.end(), [](uint8_t v) { return v == 0; });
}

std::vector<std::string> InvestmentPlan::invariant_violations() const {
    std::vector<std::string> out;
    auto tag = [](int y, int i, int j) {
        return "(" + std::to_string(i) + "," + std::to_string(j) + ",y" + std::to_string(y) + ")";
    };
    for (int y = 1; y <= years_; ++y) {
        for (int i = 0; i < n_; ++i) {
            if (gen_built(y - 1, i) && !gen_built(y, i))
                out.push_back("generator removed at node " + std::to_string(i) + " year " +
                              std::to_string(y));
            for (int j = 0; j < n_; ++j) {
                if (i == j) {
                    if (line_count(y, i, i) != 0) out.push_back("self-loop at " + tag(y, i, i));
                    continue;
                }
                if (line_count(y, i, j) != line_count(y, j, i))
                    out.push_back("asymmetric line count at " + tag(y, i, j));
                if (line_count(y, i, j) < line_count(y - 1, i, j))
                    out.push_back("line count decreased at " + tag(y, i, j));
                if (line_count(y, i, j) < 0 || line_count(y, i, j) > xi_)
                    out.push_back("line count outside [0, max_parallel] at " + tag(y, i, j));
            }
        }
    }
    return out;
}

OperationalState::OperationalState(int n, int total_periods)
    : n_(n), periods_(total_periods),
      pg_(static_cast<size_t>(n) * total_periods, 0.0), qg_(pg_), nu_(pg_), shp_(pg_), shq_(pg_),
      pf_(static_cast<size_t>(n) * n * total_periods, 0.0), qf_(pf_), psi_(pf_) {}

double& OperationalState::psi(int i, int j, int g) {
    return psi_[aidx(std::min(i, j), std::max(i, j), g)];
}

double OperationalState::psi(int i, int j, int g) const {
    return psi_[aidx(std::min(i, j), std::max(i, j), g)];
}

double MoneyBreakdown::discounted_capex(double ra) const {
    double total = 0.0;
    for (size_t y = 0; y < capex_dist.size(); ++y)
        total += (capex_dist[y] + capex_gen[y]) / std::pow(1.0 + ra, static_cast<double>(y + 1));
    return total;
}

double MoneyBreakdown::discounted_opex(double ra) const {
    double total = 0.0;
    for (size_t y = 0; y < opex.size(); ++y)
        total += opex[y] / std::pow(1.0 + ra, static_cast<double>(y + 1));
    return total;
}

const char* to_string(ScenarioOrigin origin) {
    switch (origin) {
        case ScenarioOrigin::deterministic: return "deterministic";
        case ScenarioOrigin::generation_adversary: return "generation_adversary";
        case ScenarioOrigin::thermal_adversary: return "thermal_adversary";
    }
    return "unknown";
}

ScenarioOrigin scenario_origin_from_string(const std::string& s) {
    if (s == "deterministic") return ScenarioOrigin::deterministic;
    if (s == "generation_adversary") return ScenarioOrigin::generation_adversary;
    if (s == "thermal_adversary") return ScenarioOrigin::thermal_adversary;
    throw CaseFormatError("origin", "unknown scenario origin '" + s + "'");
}

Scenario::Scenario(int n, int total_periods, ScenarioOrigin origin)
    : n_(n), periods_(total_periods), origin_(origin),
      p_(static_cast<size_t>(n) * total_periods, 0.0), q_(p_) {}

uint64_t Scenario::fingerprint() const {
    // FNV-1a over the loads rounded to 1e-9, plus the dimensions.
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<uint64_t>(n_));
    mix(static_cast<uint64_t>(periods_));
    for (double v : p_) mix(static_cast<uint64_t>(std::llround(v * 1e9)));
    for (double v : q_) mix(static_cast<uint64_t>(std::llround(v * 1e9)));
    return h;
}

Scenario deterministic_scenario(const NetworkCase& c) {
    Scenario s(c.n(), c.total_periods(), ScenarioOrigin::deterministic);
    for (int i = 0; i < c.n(); ++i)
        for (int g = 0; g < c.total_periods(); ++g) {
            s.p(i, g) = c.p_load(i, g);
            s.q(i, g) = c.q_load(i, g);
        }
    return s;
}

UncertaintyBox::UncertaintyBox(int n, int total_periods)
    : n_(n), periods_(total_periods),
      plo_(static_cast<size_t>(n) * total_periods, 0.0), phi_(plo_), qlo_(plo_), qhi_(plo_) {}

UncertaintyBox UncertaintyBox::from_factors(const NetworkCase& c, double lb, double ub) {
    if (!(lb <= ub)) throw ModelError("uncertainty box: lb must be <= ub");
    UncertaintyBox box(c.n(), c.total_periods());
    for (int i = 0; i < c.n(); ++i)
        for (int g = 0; g < c.total_periods(); ++g) {
            box.p_lo(i, g) = lb * c.p_load(i, g);
            box.p_hi(i, g) = ub * c.p_load(i, g);
            box.q_lo(i, g) = lb * c.q_load(i, g);
            box.q_hi(i, g) = ub * c.q_load(i, g);
        }
    return box;
}

bool UncertaintyBox::contains(const Scenario& s, double tol) const {
    if (s.n() != n_ || s.total_periods() != periods_) return false;
    for (int i = 0; i < n_; ++i)
        for (int g = 0; g < periods_; ++g) {
            if (s.p(i, g) < p_lo(i, g) - tol || s.p(i, g) > p_hi(i, g) + tol) return false;
            if (s.q(i, g) < q_lo(i, g) - tol || s.q(i, g) > q_hi(i, g) + tol) return false;
        }
    return true;
}

bool UncertaintyBox::degenerate(double tol) const { return uncertain_coordinates(tol) == 0; }

int UncertaintyBox::uncertain_coordinates(double tol) const {
    int count = 0;
    for (size_t k = 0; k < plo_.size(); ++k) {
        if (phi_[k] - plo_[k] > tol) ++count;
        if (qhi_[k] - qlo_[k] > tol) ++count;
    }
    return count;
}

TargetMask TargetMask::gen_singleton(int i, int g) {
    TargetMask m;
    m.family = Family::generation;
    m.entries.push_back({i, g, -1});
    return m;
}

TargetMask TargetMask::thermal_singleton(int i, int j, int g) {
    TargetMask m;
    m.family = Family::thermal;
    m.entries.push_back({std::min(i, j), std::max(i, j), g});
    return m;
}

}  // namespace microplan
