#include <doctest.h>

#include <cmath>
#include <random>

#include "bess/degradation.hpp"
#include "bess/online_policy.hpp"
#include "bess/rainflow.hpp"
#include "bess/signal.hpp"
#include "test_support.hpp"

using namespace bess;

namespace {

// Battery tuned so u_hat = 0.2 and a full-power instruction moves SoC by 0.1
// per step; keeps the hand traces short.
BatteryParams band_battery() {
    auto b = test::reference_battery();
    return b;
}

MarketParams band_market(const BatteryParams& battery, double u_hat_target) {
    // pick theta = pi so that u_hat comes out at the requested band width
    const double y = stress_derivative(battery.stress, u_hat_target);
    const double price_kwh = y * battery.cell_price_per_kwh / 2.0;
    return test::reference_market(price_kwh * 1000.0, price_kwh * 1000.0, 1.0 / 60.0);
}

}  // namespace

TEST_CASE("controller init: band anchored at the starting SoC") {
    const auto battery = band_battery();
    const auto market = band_market(battery, 0.2);

    const auto state = init_controller(battery, market, 0.5);
    CHECK(state.u_hat == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(state.x_max_watermark == 0.5);
    CHECK(state.x_min_watermark == 0.5);
    CHECK(state.upper_bound == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(state.lower_bound == doctest::Approx(0.3).epsilon(1e-9));

    CHECK_THROWS_AS(init_controller(battery, market, 1.2), std::invalid_argument);
}

TEST_CASE("controller init: wide band clamps to the physical range") {
    const auto battery = band_battery();
    // enormous prices push u_hat to the clamp at 1
    const auto market = test::reference_market(1e6, 1e6);
    const auto state = init_controller(battery, market, 0.5);
    CHECK(state.u_hat == 1.0);
    CHECK(state.upper_bound == battery.soc_max);
    CHECK(state.lower_bound == battery.soc_min);
}

TEST_CASE("controller: zero prices freeze the battery") {
    const auto battery = band_battery();
    const auto market = test::reference_market(0.0, 0.0);
    const auto run = run_policy(battery, market, 1.0 / 60.0, 0.5, generate_signal(64, 5));
    CHECK(run.total_usd == 0.0);
    for (double x : run.soc.x) CHECK(x == 0.5);
}

TEST_CASE("policy step: persistent charge signal caps at the band edge") {
    const auto battery = band_battery();
    const auto market = band_market(battery, 0.2);
    const double tau = 1.0 / 60.0;
    // 0.1 SoC per step at full power 1500 kW... power rating caps at 1000 kW,
    // so instruct the SoC-equivalent of 0.1 per step directly
    const double r_kw = 0.1 * battery.energy_capacity_kwh / (tau * battery.eta_c);  // 1500
    // power rating truncates the request; widen the battery for the hand trace
    auto big = battery;
    big.power_rating_kw = 2000.0;

    ControllerState state = init_controller(big, market, 0.5);
    double x = 0.5;
    std::vector<double> path;
    for (int t = 0; t < 5; ++t) {
        auto [act, next] = step(state, big, tau, x, r_kw);
        state = next;
        x += tau * big.eta_c / big.energy_capacity_kwh * act.charge_kw;
        path.push_back(x);
    }
    CHECK(path[0] == doctest::Approx(0.6));
    CHECK(path[1] == doctest::Approx(0.7));
    CHECK(path[2] == doctest::Approx(0.7));
    CHECK(path[3] == doctest::Approx(0.7));
}

TEST_CASE("policy step: zero instruction does nothing") {
    const auto battery = band_battery();
    const auto market = band_market(battery, 0.2);
    const auto state = init_controller(battery, market, 0.4);
    const auto [act, next] = step(state, battery, 1.0 / 60.0, 0.4, 0.0);
    CHECK(act.charge_kw == 0.0);
    CHECK(act.discharge_kw == 0.0);
}

TEST_CASE("policy: alternating signal inside the band follows perfectly") {
    const auto battery = band_battery();
    const auto market = band_market(battery, 0.2);
    const double tau = 1.0 / 60.0;

    RegulationTrace trace;
    trace.scale_kw = battery.power_rating_kw;
    for (int t = 0; t < 40; ++t) trace.r.push_back(t % 2 == 0 ? 0.5 : -0.5);

    const auto run = run_policy(battery, market, tau, 0.5, trace);
    CHECK(run.penalty_usd == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("policy: band bounds are monotone and contain the path") {
    const auto battery = band_battery();
    const auto market = band_market(battery, 0.15);
    const double tau = 1.0 / 60.0;
    const auto trace = generate_signal(300, 99);

    ControllerState state = init_controller(battery, market, 0.45);
    double x = 0.45;
    double prev_ub = state.upper_bound, prev_lb = state.lower_bound;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        auto [act, next] = step(state, battery, tau, x, trace.kw(t, battery));
        state = next;
        CHECK(state.upper_bound <= prev_ub + 1e-15);
        CHECK(state.lower_bound >= prev_lb - 1e-15);
        prev_ub = state.upper_bound;
        prev_lb = state.lower_bound;
        x += tau * battery.eta_c / battery.energy_capacity_kwh * act.charge_kw -
             tau / (battery.eta_d * battery.energy_capacity_kwh) * act.discharge_kw;
        CHECK(x <= state.upper_bound + 1e-12);
        CHECK(x >= state.lower_bound - 1e-12);
    }
}

TEST_CASE("policy: realized cycle depths never exceed the band width") {
    const auto battery = band_battery();
    const double tau = 1.0 / 60.0;
    for (const double target : {0.1, 0.22, 0.35}) {
        const auto market = band_market(battery, target);
        const double u_hat = thresholds(market, battery).u_hat;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto run = run_policy(battery, market, tau, 0.5, generate_signal(240, seed));
            const auto dec = rainflow_cycles(run.soc);
            for (const auto& c : dec.cycles) CHECK(c.depth <= u_hat + 1e-12);
        }
    }
}

TEST_CASE("policy: no anticipation, prefix replay matches") {
    const auto battery = band_battery();
    const auto market = band_market(battery, 0.2);
    const double tau = 1.0 / 60.0;
    const auto trace = generate_signal(120, 1234);

    RegulationTrace prefix;
    prefix.r.assign(trace.r.begin(), trace.r.begin() + 60);

    const auto full = run_policy(battery, market, tau, 0.5, trace);
    const auto head = run_policy(battery, market, tau, 0.5, prefix);
    for (std::size_t t = 0; t < 60; ++t) {
        CHECK(full.schedule.charge_kw[t] == head.schedule.charge_kw[t]);
        CHECK(full.schedule.discharge_kw[t] == head.schedule.discharge_kw[t]);
    }
}
