#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace microplan {

/// Raised when a case document (or another input file) violates the schema.
/// `path` points at the offending field, e.g. "nodes[3].p_load[2]".
class CaseFormatError : public std::runtime_error {
  public:
    CaseFormatError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

/// Raised on internal consistency failures (dimension mismatches, values that
/// a correct formulation could never produce).
class ModelError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

struct NodeSpec {
    std::string id;
    double x = 0.0;  // km
    double y = 0.0;  // km
    bool has_coords = false;
    std::vector<double> p_load;  // kW, one value per period of the representative day(s)
    std::vector<double> q_load;  // kvar
};

struct CostSpec {
    double conductor_per_km = 0.0;  // $/km per conductor
    double pole_per_km = 0.0;       // $/km, paid once per corridor
    double generator = 0.0;         // $ fixed install
    double gen_hourly_a = 0.0;      // $/h while committed
    double gen_marginal_b = 0.0;    // $/kWh
};

struct ElectricalSpec {
    double r = 0.0;            // kOhm/km (consistent with kV voltages and kW powers)
    double x = 0.0;            // kOhm/km
    double v_min = 0.0;        // kV
    double v_max = 0.0;        // kV
    double s_rating = 0.0;     // kVA per conductor
    double p_gen_max = 0.0;    // kW
    double p_gen_min = 0.0;    // kW
    double cos_phi_min = 1.0;  // minimal power factor of generators
    int max_parallel = 1;      // max conductors per corridor
    double theta_delta = 0.0;  // rad, max voltage angle difference

    double tan_phi() const;
};

/// One representative day: `hours` consecutive load values weighted by
/// `h_share` yearly hours when accumulating operating cost.
struct RepresentativeDay {
    int hours = 0;
    double h_share = 0.0;
};

/// Per-coordinate marginal distribution of the random loads, relative to the
/// deterministic forecast. Used by the chance module.
struct UncertaintySpec {
    enum class Family { none, normal, uniform };
    Family family = Family::none;
    // normal: sigma = dispersion * |mean|; uniform: halfwidth = dispersion * |mean|.
    double dispersion = 0.0;
};

/// Immutable problem instance. Construct via load_case() or make_validated().
class NetworkCase {
  public:
    std::vector<NodeSpec> nodes;
    std::vector<std::vector<double>> distances;  // km, symmetric, zero diagonal
    std::vector<RepresentativeDay> days;         // at least one
    int horizon_years = 1;
    int periods_per_day = 1;
    double growth_rate = 0.0;
    double discount_rate = 0.0;
    CostSpec cost;
    ElectricalSpec electrical;
    UncertaintySpec uncertainty;
    std::string name;

    int n() const { return static_cast<int>(nodes.size()); }
    int years() const { return horizon_years; }
    int periods_per_year() const { return periods_per_day * static_cast<int>(days.size()); }
    int total_periods() const { return periods_per_year() * horizon_years; }

    /// Year (1-based) containing global period g (0-based).
    int year_of(int g) const { return g / periods_per_year() + 1; }
    /// Yearly-hours weight of global period g (the day's H share).
    double period_weight(int g) const {
        return days[(g % periods_per_year()) / periods_per_day].h_share;
    }

    /// Deterministic active load of node i at global period g, with growth applied.
    double p_load(int i, int g) const { return base_p(i, g) * growth_factor(g); }
    double q_load(int i, int g) const { return base_q(i, g) * growth_factor(g); }

    double distance(int i, int j) const { return distances[i][j]; }
    double max_distance() const;

    /// Highest single-period total active demand over the horizon, kW.
    double peak_total_load() const;

    /// Validates every invariant; throws CaseFormatError naming the field.
    void validate() const;

  private:
    double base_p(int i, int g) const { return nodes[i].p_load[g % periods_per_year()]; }
    double base_q(int i, int g) const { return nodes[i].q_load[g % periods_per_year()]; }
    double growth_factor(int g) const;
};

/// Investment decisions over the horizon. Line counts are stored symmetrically
/// (both orientations always equal); year index y is 1-based, year 0 is the
/// empty pre-existing stock.
class InvestmentPlan {
  public:
    InvestmentPlan() = default;
    InvestmentPlan(int n, int years, int max_parallel);

    int n() const { return n_; }
    int years() const { return years_; }
    int max_parallel() const { return xi_; }

    int line_count(int y, int i, int j) const;      // gamma
    bool line_built(int y, int i, int j) const;     // omega
    bool level_active(int y, int i, int j, int k) const;  // loi, k >= 1
    bool gen_built(int y, int i) const;             // sigma

    void set_line_count(int y, int i, int j, int count);  // sets both orientations
    void set_gen(int y, int i, bool built);

    /// Empty-plan check (no lines, no generators, any year).
    bool empty() const;

    /// Validates symmetry, monotonicity in y, and the parallel-line cap;
    /// returns human-readable violations (empty when valid).
    std::vector<std::string> invariant_violations() const;

    bool operator==(const InvestmentPlan& other) const = default;

  private:
    int n_ = 0, years_ = 0, xi_ = 1;
    std::vector<int> lines_;      // [y-1][i][j]
    std::vector<uint8_t> gens_;   // [y-1][i]
    int lidx(int y, int i, int j) const { return ((y - 1) * n_ + i) * n_ + j; }
};

/// Dispatch for all periods of one scenario (or of the deterministic case).
/// Flows are directed: p_flow(i,j,g) is the power leaving node i into line
/// (i,j); psi is per unordered pair; shed is zero outside robust subproblems.
class OperationalState {
  public:
    OperationalState() = default;
    OperationalState(int n, int total_periods);

    int n() const { return n_; }
    int total_periods() const { return periods_; }

    double& p_gen(int i, int g) { return pg_[nidx(i, g)]; }
    double& q_gen(int i, int g) { return qg_[nidx(i, g)]; }
    double& nu(int i, int g) { return nu_[nidx(i, g)]; }
    double& p_shed(int i, int g) { return shp_[nidx(i, g)]; }
    double& q_shed(int i, int g) { return shq_[nidx(i, g)]; }
    double& p_flow(int i, int j, int g) { return pf_[aidx(i, j, g)]; }
    double& q_flow(int i, int j, int g) { return qf_[aidx(i, j, g)]; }
    double& psi(int i, int j, int g);  // symmetric storage

    double p_gen(int i, int g) const { return pg_[nidx(i, g)]; }
    double q_gen(int i, int g) const { return qg_[nidx(i, g)]; }
    double nu(int i, int g) const { return nu_[nidx(i, g)]; }
    double p_shed(int i, int g) const { return shp_[nidx(i, g)]; }
    double q_shed(int i, int g) const { return shq_[nidx(i, g)]; }
    double p_flow(int i, int j, int g) const { return pf_[aidx(i, j, g)]; }
    double q_flow(int i, int j, int g) const { return qf_[aidx(i, j, g)]; }
    double psi(int i, int j, int g) const;

  private:
    int n_ = 0, periods_ = 0;
    std::vector<double> pg_, qg_, nu_, shp_, shq_, pf_, qf_, psi_;
    int nidx(int i, int g) const { return i * periods_ + g; }
    int aidx(int i, int j, int g) const { return (i * n_ + j) * periods_ + g; }
};

/// Yearly cash-flow components plus their discounted total.
struct MoneyBreakdown {
    std::vector<double> capex_dist;  // $ per year, 1-based stored at [y-1]
    std::vector<double> capex_gen;
    std::vector<double> opex;
    double npv = 0.0;

    double discounted_capex(double discount_rate) const;
    double discounted_opex(double discount_rate) const;
};

enum class ScenarioOrigin { deterministic, generation_adversary, thermal_adversary };

const char* to_string(ScenarioOrigin origin);
ScenarioOrigin scenario_origin_from_string(const std::string& s);

/// One realization of the random loads: full matrices over nodes x total periods.
class Scenario {
  public:
    Scenario() = default;
    Scenario(int n, int total_periods, ScenarioOrigin origin = ScenarioOrigin::deterministic);

    int n() const { return n_; }
    int total_periods() const { return periods_; }
    ScenarioOrigin origin() const { return origin_; }
    void set_origin(ScenarioOrigin o) { origin_ = o; }

    double& p(int i, int g) { return p_[i * periods_ + g]; }
    double& q(int i, int g) { return q_[i * periods_ + g]; }
    double p(int i, int g) const { return p_[i * periods_ + g]; }
    double q(int i, int g) const { return q_[i * periods_ + g]; }

    /// Canonical hash over loads rounded to 1e-9; used for de-duplication.
    uint64_t fingerprint() const;

  private:
    int n_ = 0, periods_ = 0;
    ScenarioOrigin origin_ = ScenarioOrigin::deterministic;
    std::vector<double> p_, q_;
};

/// Deterministic loads of `c` packed as a Scenario.
Scenario deterministic_scenario(const NetworkCase& c);

/// Rectangular uncertainty set: coordinatewise intervals for P and Q loads.
class UncertaintyBox {
  public:
    UncertaintyBox() = default;
    UncertaintyBox(int n, int total_periods);

    /// Box [lb*load, ub*load] around the deterministic loads.
    static UncertaintyBox from_factors(const NetworkCase& c, double lb, double ub);

    int n() const { return n_; }
    int total_periods() const { return periods_; }

    double& p_lo(int i, int g) { return plo_[idx(i, g)]; }
    double& p_hi(int i, int g) { return phi_[idx(i, g)]; }
    double& q_lo(int i, int g) { return qlo_[idx(i, g)]; }
    double& q_hi(int i, int g) { return qhi_[idx(i, g)]; }
    double p_lo(int i, int g) const { return plo_[idx(i, g)]; }
    double p_hi(int i, int g) const { return phi_[idx(i, g)]; }
    double q_lo(int i, int g) const { return qlo_[idx(i, g)]; }
    double q_hi(int i, int g) const { return qhi_[idx(i, g)]; }

    bool contains(const Scenario& s, double tol = 1e-9) const;
    bool degenerate(double tol = 1e-12) const;

    /// Count of coordinates with lo < hi (P and Q counted separately).
    int uncertain_coordinates(double tol = 1e-12) const;

  private:
    int n_ = 0, periods_ = 0;
    std::vector<double> plo_, phi_, qlo_, qhi_;
    int idx(int i, int g) const { return i * periods_ + g; }
};

/// Selects the balance entries (i,g) or line entries (i,j,g) whose
/// infeasibility an adversarial problem maximizes.
struct TargetMask {
    enum class Family { generation, thermal };
    Family family = Family::generation;
    // generation: {i, g, -1}; thermal: {i, j, g} with i < j.
    std::vector<std::array<int, 3>> entries;

    static TargetMask gen_singleton(int i, int g);
    static TargetMask thermal_singleton(int i, int j, int g);
    bool empty() const { return entries.empty(); }
};

}  // namespace microplan
