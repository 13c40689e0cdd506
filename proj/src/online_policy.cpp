#include "bess/online_policy.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "bess/degradation.hpp"
#include "bess/rainflow.hpp"

namespace bess {

ControllerState init_controller(const BatteryParams& battery, const MarketParams& market,
                                double x0) {
    if (!(x0 >= battery.soc_min && x0 <= battery.soc_max))
        throw std::invalid_argument("init_controller: x0 outside SoC bounds");
    ControllerState s;
    s.u_hat = thresholds(market, battery).u_hat;
    s.x_max_watermark = x0;
    s.x_min_watermark = x0;
    s.upper_bound = std::min(battery.soc_max, s.x_min_watermark + s.u_hat);
    s.lower_bound = std::max(battery.soc_min, s.x_max_watermark - s.u_hat);
    return s;
}

std::pair<StepAction, ControllerState> step(const ControllerState& state,
                                            const BatteryParams& battery, double tau_hours,
                                            double soc, double r_kw) {
    ControllerState next = state;
    next.x_max_watermark = std::max(state.x_max_watermark, soc);
    next.x_min_watermark = std::min(state.x_min_watermark, soc);
    next.upper_bound = std::min(battery.soc_max, next.x_min_watermark + next.u_hat);
    next.lower_bound = std::max(battery.soc_min, next.x_max_watermark - next.u_hat);

    StepAction act;
    const double E = battery.energy_capacity_kwh;
    if (r_kw >= 0.0) {
        const double headroom_kw =
            E / (tau_hours * battery.eta_c) * std::max(next.upper_bound - soc, 0.0);
        act.charge_kw = std::min(headroom_kw, r_kw);
    } else {
        const double headroom_kw =
            E * battery.eta_d / tau_hours * std::max(soc - next.lower_bound, 0.0);
        act.discharge_kw = std::min(headroom_kw, -r_kw);
    }
    return {act, next};
}

RunResult run_policy(const BatteryParams& battery, const MarketParams& market, double tau_hours,
                     double x0, const RegulationTrace& trace) {
    trace.validate();
    const auto start = std::chrono::steady_clock::now();

    ControllerState state = init_controller(battery, market, x0);
    RunResult result;
    result.schedule.charge_kw.reserve(trace.size());
    result.schedule.discharge_kw.reserve(trace.size());
    result.soc.x0 = x0;
    result.soc.x.reserve(trace.size());

    const double cc = tau_hours * battery.eta_c / battery.energy_capacity_kwh;
    const double cd = tau_hours / (battery.eta_d * battery.energy_capacity_kwh);
    double x = x0;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        auto [act, next] = step(state, battery, tau_hours, x, trace.kw(t, battery));
        state = next;
        result.schedule.charge_kw.push_back(act.charge_kw);
        result.schedule.discharge_kw.push_back(act.discharge_kw);
        x += cc * act.charge_kw - cd * act.discharge_kw;
        result.soc.x.push_back(x);
    }

    const CostBreakdown cost =
        total_objective(result.schedule, trace, market, battery, tau_hours, x0);
    result.penalty_usd = cost.penalty_usd;
    result.degradation_usd = cost.degradation_usd;
    result.total_usd = cost.total_usd;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace bess
