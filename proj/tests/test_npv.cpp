#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "microplan/npv.hpp"
#include "microplan/oracle.hpp"

using namespace microplan;

TEST_CASE("empty plan with zero dispatch costs nothing") {
    auto c = fixtures::two_node();
    InvestmentPlan plan(2, 1, 1);
    OperationalState st(2, 1);
    auto m = npv(c, plan, st);
    CHECK(m.npv == 0.0);
    CHECK(m.capex_dist[0] == 0.0);
    CHECK(m.capex_gen[0] == 0.0);
    CHECK(m.opex[0] == 0.0);
}

TEST_CASE("hand-computed single-year case") {
    // one generator (1000), one 2 km line (conductor 100, pole 50), H = 365,
    // a = 2, b = 0.1, one period with P_G = 5, ra = 5%
    fixtures::ToySpec t;
    t.n = 2;
    t.p = {{4.0}, {1.0}};
    auto c = fixtures::make_case(t);
    InvestmentPlan plan(2, 1, 1);
    plan.set_gen(1, 0, true);
    plan.set_line_count(1, 0, 1, 1);
    OperationalState st(2, 1);
    st.p_gen(0, 0) = 5.0;

    auto m = npv(c, plan, st);
    CHECK(m.capex_dist[0] == doctest::Approx(2.0 * 150.0));
    CHECK(m.capex_gen[0] == doctest::Approx(1000.0));
    CHECK(m.opex[0] == doctest::Approx(365.0 * (2.0 + 0.5)));
    CHECK(m.npv == doctest::Approx((1300.0 + 912.5) / 1.05).epsilon(1e-12));
    // year components add up to the discounted total
    CHECK(m.npv ==
          doctest::Approx(m.discounted_capex(c.discount_rate) + m.discounted_opex(c.discount_rate))
              .epsilon(1e-9));
}

namespace {

struct RandomSetup {
    NetworkCase c;
    InvestmentPlan plan;
    OperationalState st;
};

RandomSetup random_setup(uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    fixtures::ToySpec t;
    t.n = 3;
    t.years = 3;
    t.periods = 2;
    t.growth = 0.05;
    for (int i = 0; i < 3; ++i) t.p.push_back({1.0 + u(rng), 2.0 + u(rng)});
    RandomSetup out{fixtures::make_case(t), InvestmentPlan(3, 3, 1), OperationalState(3, 6)};
    // random monotone plan
    for (int i = 0; i < 3; ++i) {
        const int from = 1 + static_cast<int>(u(rng) * 3);
        for (int y = from; y <= 3; ++y) out.plan.set_gen(y, i, true);
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const int from = 1 + static_cast<int>(u(rng) * 3);
            for (int y = from; y <= 3; ++y) out.plan.set_line_count(y, i, j, 1);
        }
    for (int i = 0; i < 3; ++i)
        for (int g = 0; g < 6; ++g) out.st.p_gen(i, g) = 3.0 * u(rng);
    return out;
}

}  // namespace

TEST_CASE("npv matches the oracle accumulation on random plans") {
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        auto s = random_setup(seed);
        const double mine = npv(s.c, s.plan, s.st).npv;
        const double ref = oracle::reference_npv(s.c, s.plan, {s.st});
        CHECK(std::abs(mine - ref) <= 1e-9 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("npv is monotone in every cost parameter and antitone in the discount rate") {
    auto s = random_setup(99);
    const double base = npv(s.c, s.plan, s.st).npv;
    auto bump = [&](auto setter) {
        NetworkCase mod = s.c;
        setter(mod);
        return npv(mod, s.plan, s.st).npv;
    };
    CHECK(bump([](NetworkCase& c) { c.cost.conductor_per_km *= 1.1; }) >= base);
    CHECK(bump([](NetworkCase& c) { c.cost.pole_per_km *= 1.1; }) >= base);
    CHECK(bump([](NetworkCase& c) { c.cost.generator *= 1.1; }) >= base);
    CHECK(bump([](NetworkCase& c) { c.cost.gen_hourly_a *= 1.1; }) >= base);
    CHECK(bump([](NetworkCase& c) { c.cost.gen_marginal_b *= 1.1; }) >= base);
    CHECK(bump([](NetworkCase& c) { c.days[0].h_share *= 1.1; }) >= base);
    CHECK(bump([](NetworkCase& c) { c.discount_rate += 0.03; }) < base);
}

TEST_CASE("dimension mismatches are rejected") {
    auto c = fixtures::two_node();
    InvestmentPlan small(1, 1, 1);
    OperationalState st(2, 1);
    CHECK_THROWS_AS(npv(c, small, st), ModelError);
    OperationalState wrong(2, 3);
    InvestmentPlan plan(2, 1, 1);
    CHECK_THROWS_AS(npv(c, plan, wrong), ModelError);
}
