#include <doctest.h>

#include <cmath>

#include "bess/baselines.hpp"
#include "bess/degradation.hpp"
#include "bess/online_policy.hpp"
#include "bess/signal.hpp"
#include "test_support.hpp"

using namespace bess;

TEST_CASE("greedy: follows feasible signals with zero penalty") {
    const auto battery = test::reference_battery();
    const auto market = test::reference_market(80.0, 80.0);
    const double tau = 1.0 / 60.0;

    RegulationTrace trace;
    trace.scale_kw = battery.power_rating_kw;
    for (int t = 0; t < 30; ++t) trace.r.push_back(t % 2 == 0 ? 0.4 : -0.4);

    const auto run = run_greedy(battery, market, tau, 0.5, trace);
    CHECK(run.penalty_usd == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(check_feasible(battery, tau, 0.5, run.schedule).ok());
}

TEST_CASE("greedy: saturates at the SoC ceiling under persistent charging") {
    const auto battery = test::reference_battery();
    const auto market = test::reference_market(80.0, 80.0);
    RegulationTrace trace;
    trace.r.assign(60, 1.0);
    const auto run = run_greedy(battery, market, 1.0 / 60.0, 0.5, trace);
    CHECK(run.soc.x.back() == doctest::Approx(battery.soc_max));
    CHECK(check_feasible(battery, 1.0 / 60.0, 0.5, run.schedule).ok());
}

TEST_CASE("greedy: price-blind, identical actions across price settings") {
    const auto battery = test::reference_battery();
    const auto trace = generate_signal(100, 77);
    const auto low = run_greedy(battery, test::reference_market(10.0, 10.0), 1.0 / 60.0, 0.5, trace);
    const auto high =
        run_greedy(battery, test::reference_market(900.0, 900.0), 1.0 / 60.0, 0.5, trace);
    CHECK(low.schedule.charge_kw == high.schedule.charge_kw);
    CHECK(low.schedule.discharge_kw == high.schedule.discharge_kw);
}

TEST_CASE("throughput cost: unit cases") {
    ThroughputModel model;  // 62.5 $/MWh default
    DispatchSchedule sched;
    sched.charge_kw = {500.0, 0.0};
    sched.discharge_kw = {0.0, 500.0};
    // 1 MWh moved in total over two one-hour steps
    CHECK(throughput_cost(sched, model, 1.0) == doctest::Approx(62.5));

    DispatchSchedule idle;
    idle.charge_kw.assign(4, 0.0);
    idle.discharge_kw.assign(4, 0.0);
    CHECK(throughput_cost(idle, model, 1.0) == 0.0);
}

TEST_CASE("throughput offline: follow when prices beat lambda_e, else idle") {
    auto battery = test::reference_battery();
    battery.eta_c = 0.95;
    battery.eta_d = 1.0 / 0.95;
    const double tau = 1.0 / 60.0;
    const ThroughputModel model;  // 62.5
    const auto trace = generate_signal(60, 21);

    const auto follow =
        solve_offline_throughput(battery, test::reference_market(100.0, 100.0), tau, 0.5, trace, model);
    double moved = 0.0;
    for (std::size_t t = 0; t < trace.size(); ++t)
        moved += follow.schedule.charge_kw[t] + follow.schedule.discharge_kw[t];
    CHECK(moved > 0.0);
    // every step matches the greedy follower exactly
    const auto greedy = run_greedy(battery, test::reference_market(100.0, 100.0), tau, 0.5, trace);
    CHECK(follow.schedule.charge_kw == greedy.schedule.charge_kw);
    CHECK(follow.schedule.discharge_kw == greedy.schedule.discharge_kw);

    const auto idle =
        solve_offline_throughput(battery, test::reference_market(50.0, 50.0), tau, 0.5, trace, model);
    for (std::size_t t = 0; t < trace.size(); ++t) {
        CHECK(idle.schedule.charge_kw[t] == 0.0);
        CHECK(idle.schedule.discharge_kw[t] == 0.0);
    }
    CHECK(idle.objective_usd == doctest::Approx(mismatch_penalty(
                                    idle.schedule, trace, test::reference_market(50.0, 50.0, tau),
                                    battery, tau)));

    // exact tie breaks toward idling
    auto tie_battery = test::reference_battery();  // unit efficiencies
    MarketParams tie = test::reference_market(62.5, 62.5, tau);
    const auto tied = solve_offline_throughput(tie_battery, tie, tau, 0.5, trace, model);
    for (std::size_t t = 0; t < trace.size(); ++t)
        CHECK(tied.schedule.charge_kw[t] + tied.schedule.discharge_kw[t] == 0.0);
}

TEST_CASE("mpc: full-horizon window reduces to the offline solve") {
    const auto battery = test::reference_battery();
    const auto market = test::reference_market(90.0, 90.0, 0.25);
    const double tau = 0.25;
    RegulationTrace trace;
    trace.r = {0.3, -0.2, 0.25, -0.35, 0.15, -0.1};

    SolverConfig cfg;
    cfg.max_iters_per_stage = 4000;

    const auto mpc = run_mpc(battery, market, tau, 0.5, trace, 6, cfg);
    const auto offline = solve_offline(battery, market, tau, 0.5, trace, cfg);
    CHECK(mpc.total_usd <= offline.objective_usd + 0.02 * std::abs(offline.objective_usd) + 1e-3);
    CHECK(mpc.total_usd >= offline.objective_usd - 0.02 * std::abs(offline.objective_usd) - 1e-3);
}

TEST_CASE("mpc: one-step window with flat marginal degradation stays near idle") {
    // exponential stress has a strictly positive marginal cost at zero depth;
    // set prices below it so a one-step lookahead never pays to move
    auto battery = test::reference_battery();
    battery.stress = {StressKind::exponential, 5e-3, 2.0};
    const double marginal_price_kwh =
        0.5 * battery.cell_price_per_kwh * stress_derivative(battery.stress, 0.0);
    const double price = 0.4 * marginal_price_kwh * 1000.0;
    const auto market = test::reference_market(price, price);

    const auto trace = generate_signal(20, 3);
    const auto run = run_mpc(battery, market, 1.0 / 60.0, 0.5, trace, 1, mpc_solver_defaults());
    double moved = 0.0;
    for (std::size_t t = 0; t < trace.size(); ++t)
        moved += run.schedule.charge_kw[t] + run.schedule.discharge_kw[t];
    // in SoC terms the total motion is negligible
    CHECK(moved * (1.0 / 60.0) / battery.energy_capacity_kwh < 1e-3);
}

TEST_CASE("mpc vs greedy vs threshold: low-price cost ordering") {
    auto battery = test::reference_battery();
    battery.eta_c = 0.95;
    battery.eta_d = 1.0 / 0.95;
    const auto market = test::reference_market(50.0, 50.0);
    const double tau = 1.0 / 60.0;
    const auto trace = generate_signal(120, 11);

    const auto threshold = run_policy(battery, market, tau, 0.5, trace);
    const auto greedy = run_greedy(battery, market, tau, 0.5, trace);
    const auto mpc = run_mpc(battery, market, tau, 0.5, trace, 20, mpc_solver_defaults());

    CHECK(threshold.total_usd <= mpc.total_usd + 1e-6);
    CHECK(mpc.total_usd <= greedy.total_usd + 1e-6);
}
