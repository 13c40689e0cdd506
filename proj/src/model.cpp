#include "bess/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bess/degradation.hpp"
#include "bess/rainflow.hpp"

namespace bess {

SoCProfile soc_from_dispatch(const BatteryParams& battery, double tau_hours, double x0,
                             const DispatchSchedule& sched) {
    if (sched.charge_kw.size() != sched.discharge_kw.size())
        throw std::invalid_argument("dispatch schedule: charge/discharge length mismatch");
    SoCProfile profile;
    profile.x0 = x0;
    profile.x.reserve(sched.size());
    const double cc = tau_hours * battery.eta_c / battery.energy_capacity_kwh;
    const double cd = tau_hours / (battery.eta_d * battery.energy_capacity_kwh);
    double x = x0;
    for (std::size_t t = 0; t < sched.size(); ++t) {
        x += cc * sched.charge_kw[t] - cd * sched.discharge_kw[t];
        profile.x.push_back(x);
    }
    return profile;
}

std::string Violation::describe() const {
    const std::string at = " at step " + std::to_string(step);
    switch (kind) {
        case Kind::soc_low: return "SoC below minimum" + at;
        case Kind::soc_high: return "SoC above maximum" + at;
        case Kind::charge_bounds: return "charge power out of [0, P]" + at;
        case Kind::discharge_bounds: return "discharge power out of [0, P]" + at;
        case Kind::simultaneous: return "simultaneous charge and discharge" + at;
    }
    return "unknown violation";
}

std::string FeasibilityReport::summary() const {
    if (ok()) return "feasible";
    std::string s = violations.front().describe();
    if (violations.size() > 1)
        s += " (+" + std::to_string(violations.size() - 1) + " more)";
    return s;
}

FeasibilityReport check_feasible(const BatteryParams& battery, double tau_hours, double x0,
                                 const DispatchSchedule& sched, double tol) {
    FeasibilityReport report;
    const double ptol = tol * battery.power_rating_kw;
    for (std::size_t t = 0; t < sched.size(); ++t) {
        const double c = sched.charge_kw[t], d = sched.discharge_kw[t];
        if (c < -ptol || c > battery.power_rating_kw + ptol)
            report.violations.push_back({Violation::Kind::charge_bounds, t + 1, c});
        if (d < -ptol || d > battery.power_rating_kw + ptol)
            report.violations.push_back({Violation::Kind::discharge_bounds, t + 1, d});
        if (std::min(c, d) > ptol)
            report.violations.push_back({Violation::Kind::simultaneous, t + 1, std::min(c, d)});
    }
    const SoCProfile profile = soc_from_dispatch(battery, tau_hours, x0, sched);
    for (std::size_t t = 0; t < profile.x.size(); ++t) {
        if (profile.x[t] < battery.soc_min - tol)
            report.violations.push_back({Violation::Kind::soc_low, t + 1, profile.x[t]});
        if (profile.x[t] > battery.soc_max + tol)
            report.violations.push_back({Violation::Kind::soc_high, t + 1, profile.x[t]});
    }
    return report;
}

namespace {

double penalty_with_tau(const DispatchSchedule& sched, const RegulationTrace& trace,
                        const MarketParams& market, const BatteryParams& battery,
                        double tau_hours) {
    if (sched.size() != trace.size())
        throw std::invalid_argument("mismatch_penalty: schedule and trace length differ");
    const double theta = per_kwh(market.theta_per_mwh);
    const double pi = per_kwh(market.pi_per_mwh);
    double over = 0.0, under = 0.0;
    for (std::size_t t = 0; t < sched.size(); ++t) {
        const double net = battery.eta_c * sched.charge_kw[t] - sched.discharge_kw[t] / battery.eta_d;
        const double r = trace.kw(t, battery);
        over += std::max(net - r, 0.0);
        under += std::max(r - net, 0.0);
    }
    return tau_hours * (theta * over + pi * under);
}

}  // namespace

double mismatch_penalty(const DispatchSchedule& sched, const RegulationTrace& trace,
                        const MarketParams& market, const BatteryParams& battery) {
    return penalty_with_tau(sched, trace, market, battery, market.tau_hours);
}

double mismatch_penalty(const DispatchSchedule& sched, const RegulationTrace& trace,
                        const MarketParams& market, const BatteryParams& battery,
                        double tau_hours) {
    return penalty_with_tau(sched, trace, market, battery, tau_hours);
}

CostBreakdown total_objective(const DispatchSchedule& sched, const RegulationTrace& trace,
                              const MarketParams& market, const BatteryParams& battery,
                              double tau_hours, double x0) {
    const FeasibilityReport report = check_feasible(battery, tau_hours, x0, sched);
    if (!report.ok())
        throw std::invalid_argument("total_objective: infeasible schedule: " + report.summary());

    CostBreakdown cost;
    cost.penalty_usd = penalty_with_tau(sched, trace, market, battery, tau_hours);
    const SoCProfile profile = soc_from_dispatch(battery, tau_hours, x0, sched);
    cost.degradation_usd = degradation_cost(rainflow_cycles(profile), battery.stress,
                                            battery.energy_capacity_kwh, battery.cell_price_per_kwh);
    cost.total_usd = cost.penalty_usd + cost.degradation_usd;
    return cost;
}

}  // namespace bess
