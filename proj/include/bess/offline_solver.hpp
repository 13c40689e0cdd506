#ifndef BESS_OFFLINE_SOLVER_HPP
#define BESS_OFFLINE_SOLVER_HPP

#include <utility>
#include <vector>

#include "bess/model.hpp"
#include "bess/types.hpp"

// Full-information dispatch solver: log-barrier reformulation of the
// constrained problem, driven by diminishing-step subgradient descent with
// best-point tracking over an increasing barrier-weight schedule.
//
// The solver works on the clipped problem: the battery never dispatches
// against or beyond the instruction, so each step with r_t > 0 carries one
// charge variable in [0, min(P, r_t)], each step with r_t < 0 one discharge
// variable in [0, min(P, |r_t|)], and steps with r_t = 0 are fixed idle and
// carry no barrier terms. Within those boxes the mismatch penalty is linear
// and simultaneous charge/discharge is impossible by construction.

namespace bess {

struct SolverConfig {
    /// Increasing barrier weights; each stage warm-starts from the best
    /// point of the previous one.
    std::vector<double> barrier_weights = {1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
    /// Base step a of the diminishing rule a/sqrt(k), reset per stage.
    /// Zero selects the default 0.1 * P.
    double step_base_kw = 0.0;
    int max_iters_per_stage = 40000;
    /// A stage stops once the best objective improves by less than
    /// tol (relative) over stall_window consecutive iterations.
    double tol = 1e-6;
    int stall_window = 200;
    /// Strictly-feasible initialization magnitude. Zero selects 0.02 * P.
    double interior_margin_kw = 0.0;

    void validate(const BatteryParams& battery) const;
};

struct SolveReport {
    DispatchSchedule schedule;
    double objective_usd = 0.0;
    CostBreakdown cost;
    /// Running best true objective, one entry per iteration; nonincreasing.
    std::vector<double> best_objective_history;
    long long iterations = 0;
    bool converged = false;
};

SolveReport solve_offline(const BatteryParams& battery, const MarketParams& market,
                          double tau_hours, double x0, const RegulationTrace& trace,
                          const SolverConfig& config = {});

/// Subgradient of the barrier objective at a clipped-form schedule, as
/// (dJ/dc, dJ/dd) sequences; entries for steps without the corresponding
/// variable are zero. Pass barrier_weight = +infinity to drop the barrier
/// terms and get a subgradient of penalty + degradation alone. With a
/// finite weight, a schedule touching a box or SoC bound is an error.
///
/// The degradation part is the exact chain-rule subgradient through the
/// cycle structure: each step's SoC motion enters every extracted cycle
/// whose extrema bracket it plus its residue half, so the per-step
/// coefficient sums the signed marginal stress of all of those cycles.
std::pair<std::vector<double>, std::vector<double>> subgradient(
    const BatteryParams& battery, const MarketParams& market, double tau_hours, double x0,
    const DispatchSchedule& sched, const RegulationTrace& trace, double barrier_weight);

/// Exhaustive minimum over a per-step net-power grid (clipped boxes,
/// complementarity and SoC bounds respected). Only for tiny instances:
/// requires T <= 4 and grid_levels <= 41.
std::pair<double, DispatchSchedule> brute_force_oracle(const BatteryParams& battery,
                                                       const MarketParams& market,
                                                       double tau_hours, double x0,
                                                       const RegulationTrace& trace,
                                                       int grid_levels);

}  // namespace bess

#endif
