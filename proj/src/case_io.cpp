#include "microplan/case_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "microplan/milp.hpp"

namespace microplan {

namespace {

using nlohmann::ordered_json;

ordered_json parse(std::istream& in, const char* what) {
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw CaseFormatError(what, std::string("not valid JSON: ") + e.what());
    }
    return j;
}

const ordered_json& require(const ordered_json& j, const std::string& path, const char* field) {
    auto it = j.find(field);
    if (it == j.end()) throw CaseFormatError(path + field, "missing required field");
    return *it;
}

double number_at(const ordered_json& j, const std::string& path) {
    if (!j.is_number()) throw CaseFormatError(path, "expected a number");
    return j.get<double>();
}

double req_number(const ordered_json& j, const std::string& prefix, const char* field) {
    return number_at(require(j, prefix, field), prefix + field);
}

int req_int(const ordered_json& j, const std::string& prefix, const char* field) {
    const auto& v = require(j, prefix, field);
    if (!v.is_number_integer()) throw CaseFormatError(prefix + field, "expected an integer");
    return v.get<int>();
}

std::vector<double> number_array(const ordered_json& j, const std::string& path) {
    if (!j.is_array()) throw CaseFormatError(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (size_t k = 0; k < j.size(); ++k)
        out.push_back(number_at(j[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

}  // namespace

NetworkCase load_case(std::istream& in) {
    const ordered_json j = parse(in, "case");
    if (!j.is_object()) throw CaseFormatError("case", "top level must be an object");
    NetworkCase c;
    c.name = j.value("name", std::string{});

    const auto& nodes = require(j, "", "nodes");
    if (!nodes.is_array() || nodes.empty()) throw CaseFormatError("nodes", "expected a non-empty array");

    const auto& horizon = require(j, "", "horizon");
    const std::string hp = "horizon.";
    c.horizon_years = req_int(horizon, hp, "years");
    c.periods_per_day = req_int(horizon, hp, "periods_per_day");
    if (horizon.contains("representative_days")) {
        const auto& days = horizon["representative_days"];
        if (!days.is_array() || days.empty())
            throw CaseFormatError(hp + "representative_days", "expected a non-empty array");
        for (size_t d = 0; d < days.size(); ++d) {
            const std::string dp = hp + "representative_days[" + std::to_string(d) + "].";
            RepresentativeDay day;
            day.hours = c.periods_per_day;
            day.h_share = req_number(days[d], dp, "h_share");
            c.days.push_back(day);
        }
        if (j.contains("scale_factor_H"))
            throw CaseFormatError("scale_factor_H",
                                  "mutually exclusive with horizon.representative_days");
    } else {
        RepresentativeDay day;
        day.hours = c.periods_per_day;
        day.h_share = req_number(j, "", "scale_factor_H");
        c.days.push_back(day);
    }
    c.growth_rate = req_number(j, "", "growth_rate");
    c.discount_rate = req_number(j, "", "discount_rate");

    const int ppy = c.periods_per_day * static_cast<int>(c.days.size());
    bool all_coords = true;
    for (size_t i = 0; i < nodes.size(); ++i) {
        const std::string np = "nodes[" + std::to_string(i) + "].";
        const auto& nj = nodes[i];
        NodeSpec node;
        const auto& id = require(nj, np, "id");
        if (!id.is_string()) throw CaseFormatError(np + "id", "expected a string");
        node.id = id.get<std::string>();
        if (nj.contains("x") || nj.contains("y")) {
            node.x = req_number(nj, np, "x");
            node.y = req_number(nj, np, "y");
            node.has_coords = true;
        } else {
            all_coords = false;
        }
        node.p_load = number_array(require(nj, np, "p_load"), np + "p_load");
        node.q_load = number_array(require(nj, np, "q_load"), np + "q_load");
        if (static_cast<int>(node.p_load.size()) != ppy)
            throw CaseFormatError(np + "p_load", "expected " + std::to_string(ppy) + " values");
        c.nodes.push_back(std::move(node));
    }

    if (j.contains("distances")) {
        const auto& dm = j["distances"];
        if (!dm.is_array()) throw CaseFormatError("distances", "expected a matrix");
        for (size_t i = 0; i < dm.size(); ++i)
            c.distances.push_back(number_array(dm[i], "distances[" + std::to_string(i) + "]"));
        if (c.distances.size() != c.nodes.size())
            throw CaseFormatError("distances", "matrix size must match the node count");
    } else {
        if (!all_coords)
            throw CaseFormatError("distances",
                                  "required when any node lacks x/y coordinates");
        const int n = static_cast<int>(c.nodes.size());
        c.distances.assign(n, std::vector<double>(n, 0.0));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                c.distances[a][b] = std::hypot(c.nodes[a].x - c.nodes[b].x,
                                               c.nodes[a].y - c.nodes[b].y);
    }

    const auto& costs = require(j, "", "costs");
    const std::string cp = "costs.";
    c.cost.conductor_per_km = req_number(costs, cp, "conductor_per_km");
    c.cost.pole_per_km = req_number(costs, cp, "pole_per_km");
    c.cost.generator = req_number(costs, cp, "generator");
    c.cost.gen_hourly_a = req_number(costs, cp, "gen_hourly_a");
    c.cost.gen_marginal_b = req_number(costs, cp, "gen_marginal_b");

    const auto& el = require(j, "", "electrical");
    const std::string ep = "electrical.";
    c.electrical.r = req_number(el, ep, "r");
    c.electrical.x = req_number(el, ep, "x");
    c.electrical.v_min = req_number(el, ep, "v_min");
    c.electrical.v_max = req_number(el, ep, "v_max");
    c.electrical.s_rating = req_number(el, ep, "s_rating");
    c.electrical.p_gen_max = req_number(el, ep, "p_gen_max");
    c.electrical.p_gen_min = req_number(el, ep, "p_gen_min");
    c.electrical.cos_phi_min = req_number(el, ep, "cos_phi_min");
    c.electrical.max_parallel = req_int(el, ep, "max_parallel");
    c.electrical.theta_delta = req_number(el, ep, "theta_delta");

    if (j.contains("uncertainty")) {
        const auto& u = j["uncertainty"];
        const std::string up = "uncertainty.";
        const auto& fam = require(u, up, "family");
        if (!fam.is_string()) throw CaseFormatError(up + "family", "expected a string");
        const std::string f = fam.get<std::string>();
        if (f == "normal")
            c.uncertainty.family = UncertaintySpec::Family::normal;
        else if (f == "uniform")
            c.uncertainty.family = UncertaintySpec::Family::uniform;
        else
            throw CaseFormatError(up + "family", "expected 'normal' or 'uniform'");
        c.uncertainty.dispersion = req_number(u, up, "dispersion");
    }

    c.validate();
    return c;
}

NetworkCase load_case_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CaseFormatError(path, "cannot open file");
    return load_case(in);
}

namespace {

ordered_json matrix_json(const NetworkCase& c, const OperationalState& st, int what) {
    ordered_json m = ordered_json::array();
    for (int i = 0; i < st.n(); ++i) {
        ordered_json row = ordered_json::array();
        for (int g = 0; g < st.total_periods(); ++g) {
            switch (what) {
                case 0: row.push_back(st.p_gen(i, g)); break;
                case 1: row.push_back(st.q_gen(i, g)); break;
                case 2: row.push_back(st.nu(i, g)); break;
                case 3: row.push_back(st.p_shed(i, g)); break;
                default: row.push_back(st.q_shed(i, g)); break;
            }
        }
        m.push_back(std::move(row));
    }
    (void)c;
    return m;
}

}  // namespace

void write_plan_document(std::ostream& out, const NetworkCase& c, const InvestmentPlan& plan,
                         const std::vector<OperationalState>& dispatches,
                         const MoneyBreakdown& money) {
    ordered_json j;
    j["schema_version"] = 1;
    j["case"] = c.name;
    j["years"] = plan.years();
    j["nodes"] = plan.n();
    j["max_parallel"] = plan.max_parallel();

    ordered_json lines = ordered_json::array();
    for (int y = 1; y <= plan.years(); ++y) {
        ordered_json ly = ordered_json::array();
        for (int i = 0; i < plan.n(); ++i) {
            ordered_json row = ordered_json::array();
            for (int k = 0; k < plan.n(); ++k) row.push_back(plan.line_count(y, i, k));
            ly.push_back(std::move(row));
        }
        lines.push_back(std::move(ly));
    }
    j["line_counts"] = std::move(lines);

    ordered_json gens = ordered_json::array();
    for (int y = 1; y <= plan.years(); ++y) {
        ordered_json gy = ordered_json::array();
        for (int i = 0; i < plan.n(); ++i) gy.push_back(plan.gen_built(y, i) ? 1 : 0);
        gens.push_back(std::move(gy));
    }
    j["generators"] = std::move(gens);

    j["money"] = {{"capex_dist", money.capex_dist},
                  {"capex_gen", money.capex_gen},
                  {"opex", money.opex},
                  {"npv", money.npv}};

    ordered_json ds = ordered_json::array();
    for (const auto& st : dispatches) {
        ordered_json d;
        d["p_gen"] = matrix_json(c, st, 0);
        d["q_gen"] = matrix_json(c, st, 1);
        d["nu"] = matrix_json(c, st, 2);
        d["p_shed"] = matrix_json(c, st, 3);
        d["q_shed"] = matrix_json(c, st, 4);
        ordered_json flows = ordered_json::array();
        for (int i = 0; i < st.n(); ++i)
            for (int k = 0; k < st.n(); ++k) {
                if (i == k) continue;
                bool any = false;
                for (int g = 0; g < st.total_periods(); ++g)
                    any |= st.p_flow(i, k, g) != 0.0 || st.q_flow(i, k, g) != 0.0 ||
                           st.psi(i, k, g) != 0.0;
                if (!any) continue;
                ordered_json f;
                f["from"] = i;
                f["to"] = k;
                ordered_json p = ordered_json::array(), q = ordered_json::array(),
                             psi = ordered_json::array();
                for (int g = 0; g < st.total_periods(); ++g) {
                    p.push_back(st.p_flow(i, k, g));
                    q.push_back(st.q_flow(i, k, g));
                    psi.push_back(st.psi(i, k, g));
                }
                f["p"] = std::move(p);
                f["q"] = std::move(q);
                f["psi"] = std::move(psi);
                flows.push_back(std::move(f));
            }
        d["flows"] = std::move(flows);
        ds.push_back(std::move(d));
    }
    j["dispatch"] = std::move(ds);
    out << j.dump(1) << "\n";
}

PlanDocument read_plan_document(std::istream& in) {
    const ordered_json j = parse(in, "plan");
    PlanDocument doc;
    const int years = req_int(j, "", "years");
    const int n = req_int(j, "", "nodes");
    const int xi = req_int(j, "", "max_parallel");
    if (years < 1 || n < 1 || xi < 1) throw CaseFormatError("plan", "bad dimensions");
    doc.plan = InvestmentPlan(n, years, xi);

    const auto& lines = require(j, "", "line_counts");
    if (static_cast<int>(lines.size()) != years) throw CaseFormatError("line_counts", "bad year count");
    for (int y = 1; y <= years; ++y)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const auto& v = lines[y - 1][i][k];
                if (!v.is_number_integer())
                    throw CaseFormatError(key("line_counts", {y, i, k}), "expected an integer");
                if (i < k) doc.plan.set_line_count(y, i, k, v.get<int>());
                else if (i > k && v.get<int>() != doc.plan.line_count(y, i, k))
                    throw CaseFormatError(key("line_counts", {y, i, k}), "asymmetric line counts");
            }

    const auto& gens = require(j, "", "generators");
    for (int y = 1; y <= years; ++y)
        for (int i = 0; i < n; ++i) doc.plan.set_gen(y, i, gens[y - 1][i].get<int>() != 0);

    const auto& money = require(j, "", "money");
    doc.money.capex_dist = money["capex_dist"].get<std::vector<double>>();
    doc.money.capex_gen = money["capex_gen"].get<std::vector<double>>();
    doc.money.opex = money["opex"].get<std::vector<double>>();
    doc.money.npv = money["npv"].get<double>();

    if (j.contains("dispatch")) {
        for (const auto& d : j["dispatch"]) {
            const auto& pg = d["p_gen"];
            const int periods = pg.empty() ? 0 : static_cast<int>(pg[0].size());
            OperationalState st(n, periods);
            for (int i = 0; i < n; ++i)
                for (int g = 0; g < periods; ++g) {
                    st.p_gen(i, g) = d["p_gen"][i][g].get<double>();
                    st.q_gen(i, g) = d["q_gen"][i][g].get<double>();
                    st.nu(i, g) = d["nu"][i][g].get<double>();
                    st.p_shed(i, g) = d["p_shed"][i][g].get<double>();
                    st.q_shed(i, g) = d["q_shed"][i][g].get<double>();
                }
            for (const auto& f : d["flows"]) {
                const int a = f["from"].get<int>(), b = f["to"].get<int>();
                for (int g = 0; g < periods; ++g) {
                    st.p_flow(a, b, g) = f["p"][g].get<double>();
                    st.q_flow(a, b, g) = f["q"][g].get<double>();
                    st.psi(a, b, g) = f["psi"][g].get<double>();
                }
            }
            doc.dispatches.push_back(std::move(st));
        }
    }
    return doc;
}

PlanDocument read_plan_document_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CaseFormatError(path, "cannot open file");
    try {
        return read_plan_document(in);
    } catch (const nlohmann::json::exception& e) {
        throw CaseFormatError(path, std::string("malformed plan document: ") + e.what());
    }
}

void write_scenario_record(std::ostream& out, const Scenario& s, double corrective_residual) {
    ordered_json j;
    // JSON has no infinity; a scenario with no corrective at all dumps a
    // recognizable sentinel instead of null.
    if (!std::isfinite(corrective_residual)) corrective_residual = 1e99;
    j["origin"] = to_string(s.origin());
    char fp[24];
    std::snprintf(fp, sizeof(fp), "%016llx", static_cast<unsigned long long>(s.fingerprint()));
    j["fingerprint"] = fp;
    j["corrective_residual"] = corrective_residual;
    ordered_json p = ordered_json::array(), q = ordered_json::array();
    for (int i = 0; i < s.n(); ++i) {
        ordered_json pr = ordered_json::array(), qr = ordered_json::array();
        for (int g = 0; g < s.total_periods(); ++g) {
            pr.push_back(s.p(i, g));
            qr.push_back(s.q(i, g));
        }
        p.push_back(std::move(pr));
        q.push_back(std::move(qr));
    }
    j["p_load"] = std::move(p);
    j["q_load"] = std::move(q);
    out << j.dump() << "\n";
}

std::vector<Scenario> read_scenario_records(std::istream& in) {
    std::vector<Scenario> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        const ordered_json j = parse(ls, "scenario");
        const auto& p = require(j, "", "p_load");
        const auto& q = require(j, "", "q_load");
        const int n = static_cast<int>(p.size());
        if (n == 0) throw CaseFormatError("p_load", "empty scenario record");
        const int periods = static_cast<int>(p[0].size());
        Scenario s(n, periods);
        if (j.contains("origin")) s.set_origin(scenario_origin_from_string(j["origin"]));
        for (int i = 0; i < n; ++i)
            for (int g = 0; g < periods; ++g) {
                s.p(i, g) = number_at(p[i][g], key("p_load", {i, g}));
                s.q(i, g) = number_at(q[i][g], key("q_load", {i, g}));
            }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Scenario> read_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CaseFormatError(path, "cannot open file");
    try {
        return read_scenario_records(in);
    } catch (const nlohmann::json::exception& e) {
        throw CaseFormatError(path, std::string("malformed scenario file: ") + e.what());
    }
}

}  // namespace microplan
