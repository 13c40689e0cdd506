#ifndef BESS_BASELINES_HPP
#define BESS_BASELINES_HPP

#include "bess/model.hpp"
#include "bess/offline_solver.hpp"
#include "bess/types.hpp"

// Comparison controllers: the greedy signal follower, rolling-horizon MPC
// with oracle forecasts, and the linear energy-throughput cost model.

namespace bess {

/// Linear degradation proxy: a flat price per MWh of energy moved through
/// the battery, charge and discharge both counted.
struct ThroughputModel {
    double lambda_e_per_mwh = 62.5;

    void validate() const;
};

/// Follows the signal exactly up to power and physical SoC limits; ignores
/// prices entirely.
RunResult run_greedy(const BatteryParams& battery, const MarketParams& market, double tau_hours,
                     double x0, const RegulationTrace& trace);

/// Reduced-effort solver settings for the per-step MPC subproblems.
SolverConfig mpc_solver_defaults();

/// Rolling-horizon control: at each step solves the offline problem over
/// the next `window` steps of the true trace (cycles valued only within the
/// window, no terminal SoC value) and applies the first action.
RunResult run_mpc(const BatteryParams& battery, const MarketParams& market, double tau_hours,
                  double x0, const RegulationTrace& trace, int window,
                  const SolverConfig& solver_config = mpc_solver_defaults());

/// lambda_e * tau * sum(c + d), in dollars.
double throughput_cost(const DispatchSchedule& sched, const ThroughputModel& model,
                       double tau_hours);

/// Offline optimum under the throughput model. Linearity makes the problem
/// separable per step: follow the signal fully while the applicable penalty
/// price beats lambda_e, stay idle otherwise (ties idle).
SolveReport solve_offline_throughput(const BatteryParams& battery, const MarketParams& market,
                                     double tau_hours, double x0, const RegulationTrace& trace,
                                     const ThroughputModel& model);

}  // namespace bess

#endif
