#include "bess/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bess {

void ThroughputModel::validate() const {
    if (!(lambda_e_per_mwh >= 0.0))
        throw std::invalid_argument("throughput model: lambda_e must be >= 0");
}

namespace {

RunResult finish_run(RunResult result, const RegulationTrace& trace, const MarketParams& market,
                     const BatteryParams& battery, double tau_hours, double x0,
                     std::chrono::steady_clock::time_point start) {
    const CostBreakdown cost =
        total_objective(result.schedule, trace, market, battery, tau_hours, x0);
    result.penalty_usd = cost.penalty_usd;
    result.degradation_usd = cost.degradation_usd;
    result.total_usd = cost.total_usd;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace

RunResult run_greedy(const BatteryParams& battery, const MarketParams& market, double tau_hours,
                     double x0, const RegulationTrace& trace) {
    trace.validate();
    const auto start = std::chrono::steady_clock::now();

    RunResult result;
    result.soc.x0 = x0;
    const double cc = tau_hours * battery.eta_c / battery.energy_capacity_kwh;
    const double cd = tau_hours / (battery.eta_d * battery.energy_capacity_kwh);
    double x = x0;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const double r = trace.kw(t, battery);
        double c = 0.0, d = 0.0;
        if (r >= 0.0) {
            const double headroom = std::max(battery.soc_max - x, 0.0) / cc;
            c = std::min({r, battery.power_rating_kw, headroom});
        } else {
            const double headroom = std::max(x - battery.soc_min, 0.0) / cd;
            d = std::min({-r, battery.power_rating_kw, headroom});
        }
        x += cc * c - cd * d;
        result.schedule.charge_kw.push_back(c);
        result.schedule.discharge_kw.push_back(d);
        result.soc.x.push_back(x);
    }
    return finish_run(std::move(result), trace, market, battery, tau_hours, x0, start);
}

SolverConfig mpc_solver_defaults() {
    SolverConfig cfg;
    cfg.barrier_weights = {1e2, 1e4, 1e6};
    cfg.max_iters_per_stage = 2000;
    return cfg;
}

RunResult run_mpc(const BatteryParams& battery, const MarketParams& market, double tau_hours,
                  double x0, const RegulationTrace& trace, int window,
                  const SolverConfig& solver_config) {
    trace.validate();
    if (window < 1) throw std::invalid_argument("run_mpc: window must be >= 1");
    const auto start = std::chrono::steady_clock::now();

    RunResult result;
    result.soc.x0 = x0;
    const double cc = tau_hours * battery.eta_c / battery.energy_capacity_kwh;
    const double cd = tau_hours / (battery.eta_d * battery.energy_capacity_kwh);
    const double scale = trace.effective_scale(battery);
    double x = x0;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const std::size_t w = std::min<std::size_t>(window, trace.size() - t);
        RegulationTrace sub;
        sub.scale_kw = scale;
        sub.r.assign(trace.r.begin() + static_cast<std::ptrdiff_t>(t),
                     trace.r.begin() + static_cast<std::ptrdiff_t>(t + w));
        SolveReport plan;
        try {
            plan = solve_offline(battery, market, tau_hours, x, sub, solver_config);
        } catch (const std::exception& e) {
            throw std::runtime_error("run_mpc: subproblem failed at step " + std::to_string(t + 1) +
                                     ": " + e.what());
        }
        const double c = plan.schedule.charge_kw[0];
        const double d = plan.schedule.discharge_kw[0];
        x += cc * c - cd * d;
        result.schedule.charge_kw.push_back(c);
        result.schedule.discharge_kw.push_back(d);
        result.soc.x.push_back(x);
    }
    return finish_run(std::move(result), trace, market, battery, tau_hours, x0, start);
}

double throughput_cost(const DispatchSchedule& sched, const ThroughputModel& model,
                       double tau_hours) {
    double moved = 0.0;
    for (std::size_t t = 0; t < sched.size(); ++t)
        moved += sched.charge_kw[t] + sched.discharge_kw[t];
    return per_kwh(model.lambda_e_per_mwh) * tau_hours * moved;
}

SolveReport solve_offline_throughput(const BatteryParams& battery, const MarketParams& market,
                                     double tau_hours, double x0, const RegulationTrace& trace,
                                     const ThroughputModel& model) {
    trace.validate();
    model.validate();

    // Marginal value of following: pi' * eta_c per kW charged, theta' / eta_d
    // per kW discharged; marginal cost is lambda_e' either way.
    const double le = per_kwh(model.lambda_e_per_mwh);
    const bool follow_charge = per_kwh(market.pi_per_mwh) * battery.eta_c > le;
    const bool follow_discharge = per_kwh(market.theta_per_mwh) / battery.eta_d > le;

    SolveReport report;
    const double cc = tau_hours * battery.eta_c / battery.energy_capacity_kwh;
    const double cd = tau_hours / (battery.eta_d * battery.energy_capacity_kwh);
    double x = x0;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const double r = trace.kw(t, battery);
        double c = 0.0, d = 0.0;
        if (r > 0.0 && follow_charge) {
            const double headroom = std::max(battery.soc_max - x, 0.0) / cc;
            c = std::min({r, battery.power_rating_kw, headroom});
        } else if (r < 0.0 && follow_discharge) {
            const double headroom = std::max(x - battery.soc_min, 0.0) / cd;
            d = std::min({-r, battery.power_rating_kw, headroom});
        }
        x += cc * c - cd * d;
        report.schedule.charge_kw.push_back(c);
        report.schedule.discharge_kw.push_back(d);
    }
    report.cost.penalty_usd = mismatch_penalty(report.schedule, trace, market, battery, tau_hours);
    report.cost.degradation_usd = throughput_cost(report.schedule, model, tau_hours);
    report.cost.total_usd = report.cost.penalty_usd + report.cost.degradation_usd;
    report.objective_usd = report.cost.total_usd;
    report.converged = true;
    report.best_objective_history.push_back(report.objective_usd);
    return report;
}

}  // namespace bess
