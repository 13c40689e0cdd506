#include <doctest.h>

#include <cmath>
#include <random>

#include "bess/model.hpp"
#include "test_support.hpp"

using namespace bess;

TEST_CASE("soc propagation: direct substitution") {
    auto battery = test::reference_battery();

    // unit-efficiency step: full charge power for one minute from half full
    DispatchSchedule sched;
    sched.charge_kw = {1500.0};
    sched.discharge_kw = {0.0};
    const auto profile = soc_from_dispatch(battery, 1.0 / 60.0, 0.5, sched);
    CHECK(profile.x[0] == doctest::Approx(0.6));

    // identity case
    DispatchSchedule zeros;
    zeros.charge_kw.assign(5, 0.0);
    zeros.discharge_kw.assign(5, 0.0);
    const auto idle = soc_from_dispatch(battery, 1.0 / 60.0, 0.3, zeros);
    for (double x : idle.x) CHECK(x == 0.3);

    // efficiency-weighted charge
    battery.eta_c = 0.95;
    battery.eta_d = 1.0 / 0.95;
    DispatchSchedule charge;
    charge.charge_kw = {100.0};
    charge.discharge_kw = {0.0};
    const auto eff = soc_from_dispatch(battery, 1.0, 0.5, charge);
    CHECK(eff.x[0] == doctest::Approx(0.5 + 0.95 * 100.0 / 250.0));
}

TEST_CASE("soc propagation is linear in the dispatch") {
    const auto battery = test::reference_battery();
    const double tau = 1.0 / 60.0;
    std::mt19937_64 rng(41);
    const auto s1 = test::random_schedule(rng, 20, 500.0);
    const auto s2 = test::random_schedule(rng, 20, 500.0);

    DispatchSchedule mix;
    for (std::size_t t = 0; t < 20; ++t) {
        mix.charge_kw.push_back(0.3 * s1.charge_kw[t] + 0.7 * s2.charge_kw[t]);
        mix.discharge_kw.push_back(0.3 * s1.discharge_kw[t] + 0.7 * s2.discharge_kw[t]);
    }
    const auto p1 = soc_from_dispatch(battery, tau, 0.5, s1);
    const auto p2 = soc_from_dispatch(battery, tau, 0.5, s2);
    const auto pm = soc_from_dispatch(battery, tau, 0.5, mix);
    for (std::size_t t = 0; t < 20; ++t) {
        const double expected = 0.5 + 0.3 * (p1.x[t] - 0.5) + 0.7 * (p2.x[t] - 0.5);
        CHECK(pm.x[t] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("feasibility report") {
    const auto battery = test::reference_battery();
    const double tau = 1.0 / 60.0;

    DispatchSchedule ok;
    ok.charge_kw = {100.0, 0.0};
    ok.discharge_kw = {0.0, 100.0};
    CHECK(check_feasible(battery, tau, 0.5, ok).ok());

    // drive the SoC past the ceiling: first offending step reported
    DispatchSchedule high;
    high.charge_kw.assign(10, 1000.0);
    high.discharge_kw.assign(10, 0.0);
    const auto rep = check_feasible(battery, tau, 0.9, high);
    REQUIRE(!rep.ok());
    CHECK(rep.violations.front().kind == Violation::Kind::soc_high);
    CHECK(rep.violations.front().step == 2);

    DispatchSchedule both;
    both.charge_kw = {10.0};
    both.discharge_kw = {10.0};
    const auto rep2 = check_feasible(battery, tau, 0.5, both);
    REQUIRE(!rep2.ok());
    CHECK(rep2.violations.front().kind == Violation::Kind::simultaneous);

    DispatchSchedule over;
    over.charge_kw = {1200.0};
    over.discharge_kw = {0.0};
    CHECK(!check_feasible(battery, tau, 0.5, over).ok());
}

TEST_CASE("mismatch penalty: hand values") {
    const auto battery = test::reference_battery();

    RegulationTrace trace;
    trace.r = {0.5};
    trace.scale_kw = 1000.0;

    // ignoring a 500 kW charge request for one hour at 100 $/MWh
    DispatchSchedule idle;
    idle.charge_kw = {0.0};
    idle.discharge_kw = {0.0};
    const auto market = test::reference_market(0.0, 100.0, 1.0);
    CHECK(mismatch_penalty(idle, trace, market, battery) == doctest::Approx(50.0));

    // perfect following costs nothing
    DispatchSchedule follow;
    follow.charge_kw = {500.0};
    follow.discharge_kw = {0.0};
    CHECK(mismatch_penalty(follow, trace, market, battery) == doctest::Approx(0.0));

    // discharge request met exactly at unit efficiency
    RegulationTrace down;
    down.r = {-0.5};
    down.scale_kw = 1000.0;
    DispatchSchedule discharge;
    discharge.charge_kw = {0.0};
    discharge.discharge_kw = {500.0};
    CHECK(mismatch_penalty(discharge, down, test::reference_market(100.0, 100.0, 1.0), battery) ==
          doctest::Approx(0.0));

    DispatchSchedule wrong_len;
    wrong_len.charge_kw = {0.0, 0.0};
    wrong_len.discharge_kw = {0.0, 0.0};
    CHECK_THROWS_AS(mismatch_penalty(wrong_len, trace, market, battery), std::invalid_argument);
}

TEST_CASE("mismatch penalty: piecewise-linear convexity in the dispatch") {
    const auto battery = test::reference_battery();
    const auto market = test::reference_market(70.0, 110.0);
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    RegulationTrace trace;
    for (int t = 0; t < 16; ++t) trace.r.push_back(unit(rng));

    for (int trial = 0; trial < 50; ++trial) {
        const auto s1 = test::random_schedule(rng, 16, 900.0);
        const auto s2 = test::random_schedule(rng, 16, 900.0);
        const double lam = 0.5 * (1.0 + unit(rng));
        DispatchSchedule mix;
        for (std::size_t t = 0; t < 16; ++t) {
            mix.charge_kw.push_back(lam * s1.charge_kw[t] + (1 - lam) * s2.charge_kw[t]);
            mix.discharge_kw.push_back(lam * s1.discharge_kw[t] + (1 - lam) * s2.discharge_kw[t]);
        }
        const double lhs = mismatch_penalty(mix, trace, market, battery);
        const double rhs = lam * mismatch_penalty(s1, trace, market, battery) +
                           (1 - lam) * mismatch_penalty(s2, trace, market, battery);
        CHECK(lhs <= rhs + 1e-9);
    }
}

TEST_CASE("total objective: breakdown and degenerate cases") {
    const auto battery = test::reference_battery();
    const auto market = test::reference_market(100.0, 100.0);
    const double tau = 1.0 / 60.0;

    RegulationTrace zeros;
    zeros.r.assign(10, 0.0);
    DispatchSchedule idle;
    idle.charge_kw.assign(10, 0.0);
    idle.discharge_kw.assign(10, 0.0);
    const auto none = total_objective(idle, zeros, market, battery, tau, 0.5);
    CHECK(none.total_usd == 0.0);

    RegulationTrace sig;
    sig.r.assign(10, 0.4);
    const auto pen_only = total_objective(idle, sig, market, battery, tau, 0.5);
    CHECK(pen_only.degradation_usd == 0.0);
    CHECK(pen_only.total_usd == doctest::Approx(pen_only.penalty_usd));
    CHECK(pen_only.penalty_usd > 0.0);

    // one full 0.8-deep cycle that follows its own signal perfectly
    const double tau1 = 1.0;
    const double step_kw = 0.2 * battery.energy_capacity_kwh;  // 0.2 SoC per hour-long step
    DispatchSchedule cycle;
    RegulationTrace cycle_sig;
    cycle_sig.scale_kw = battery.power_rating_kw;
    for (int leg = 0; leg < 2; ++leg) {
        for (int i = 0; i < 4; ++i) {
            cycle.charge_kw.push_back(leg == 0 ? step_kw : 0.0);
            cycle.discharge_kw.push_back(leg == 0 ? 0.0 : step_kw);
            cycle_sig.r.push_back((leg == 0 ? step_kw : -step_kw) / battery.power_rating_kw);
        }
    }
    const auto full = total_objective(cycle, cycle_sig, market, battery, tau1, 0.1);
    CHECK(full.penalty_usd == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(full.degradation_usd == doctest::Approx(24.98).epsilon(1e-3));

    // infeasible schedules are rejected
    DispatchSchedule bad;
    bad.charge_kw.assign(10, 1000.0);
    bad.discharge_kw.assign(10, 0.0);
    CHECK_THROWS_AS(total_objective(bad, sig, market, battery, tau, 0.9), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    auto battery = test::reference_battery();
    battery.eta_d = 0.9;
    CHECK_THROWS_AS(battery.validate(), std::invalid_argument);

    auto market = test::reference_market(50.0, 50.0);
    market.tau_hours = 0.0;
    CHECK_THROWS_AS(market.validate(), std::invalid_argument);

    RegulationTrace trace;
    trace.r = {0.5, 1.2};
    CHECK_THROWS_AS(trace.validate(), std::invalid_argument);
}
