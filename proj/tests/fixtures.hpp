#pragma once

// Shared toy-case builders for tests. Loads are kW/kvar, voltages kV,
// impedances kOhm/km (consistent with kW powers), distances km.

#include <string>
#include <vector>

#include "microplan/types.hpp"

namespace fixtures {

struct ToySpec {
    int n = 2;
    int periods = 1;
    int years = 1;
    std::vector<std::vector<double>> p;  // [node][period per year]
    std::vector<std::vector<double>> q;  // defaults to 0.3 * p
    double dist = 2.0;
    double r = 1e-4, x = 1e-4;
    double v_min = 0.95, v_max = 1.05;
    double s_rating = 10.0;
    double p_max = 8.0, p_min = 0.0;
    double cos_phi = 0.9;
    int max_parallel = 1;
    double theta_delta = 0.3;
    double c_cond = 100.0, c_pole = 50.0, c_gen = 1000.0;
    double a = 2.0, b = 0.1;
    double H = 365.0;
    double ra = 0.05;
    double growth = 0.0;
};

inline microplan::NetworkCase make_case(const ToySpec& t) {
    microplan::NetworkCase c;
    c.name = "toy" + std::to_string(t.n);
    c.horizon_years = t.years;
    c.periods_per_day = t.periods;
    c.days.push_back({t.periods, t.H});
    c.growth_rate = t.growth;
    c.discount_rate = t.ra;
    for (int i = 0; i < t.n; ++i) {
        microplan::NodeSpec node;
        node.id = "n" + std::to_string(i);
        node.p_load = t.p.at(i);
        if (!t.q.empty())
            node.q_load = t.q.at(i);
        else
            for (double v : t.p.at(i)) node.q_load.push_back(0.3 * v);
        c.nodes.push_back(std::move(node));
    }
    c.distances.assign(t.n, std::vector<double>(t.n, t.dist));
    for (int i = 0; i < t.n; ++i) c.distances[i][i] = 0.0;
    c.cost = {t.c_cond, t.c_pole, t.c_gen, t.a, t.b};
    c.electrical.r = t.r;
    c.electrical.x = t.x;
    c.electrical.v_min = t.v_min;
    c.electrical.v_max = t.v_max;
    c.electrical.s_rating = t.s_rating;
    c.electrical.p_gen_max = t.p_max;
    c.electrical.p_gen_min = t.p_min;
    c.electrical.cos_phi_min = t.cos_phi;
    c.electrical.max_parallel = t.max_parallel;
    c.electrical.theta_delta = t.theta_delta;
    c.validate();
    return c;
}

inline microplan::NetworkCase one_node(double load = 1.0) {
    ToySpec t;
    t.n = 1;
    t.p = {{load}};
    return make_case(t);
}

inline microplan::NetworkCase two_node(double load0 = 4.0, double load1 = 3.0) {
    ToySpec t;
    t.n = 2;
    t.p = {{load0}, {load1}};
    return make_case(t);
}

/// Triangle with distinct pair distances; node 0 carries most load.
inline microplan::NetworkCase three_node(double l0 = 4.0, double l1 = 2.0, double l2 = 1.5) {
    ToySpec t;
    t.n = 3;
    t.p = {{l0}, {l1}, {l2}};
    microplan::NetworkCase c = make_case(t);
    c.distances = {{0.0, 1.0, 2.0}, {1.0, 0.0, 1.5}, {2.0, 1.5, 0.0}};
    c.validate();
    return c;
}

}  // namespace fixtures
