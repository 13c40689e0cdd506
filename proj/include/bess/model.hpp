#ifndef BESS_MODEL_HPP
#define BESS_MODEL_HPP

#include <string>
#include <vector>

#include "bess/types.hpp"

// SoC propagation, feasibility checking, and evaluation of the mismatch
// penalty and total operating objective (penalty + cycle aging cost).
// The capacity payment is decision-independent and never enters here.

namespace bess {

/// Pure SoC propagation; no feasibility enforcement.
SoCProfile soc_from_dispatch(const BatteryParams& battery, double tau_hours, double x0,
                             const DispatchSchedule& sched);

struct Violation {
    enum class Kind { soc_low, soc_high, charge_bounds, discharge_bounds, simultaneous };
    Kind kind;
    std::size_t step;  // 1-based control step
    double value;
    std::string describe() const;
};

struct FeasibilityReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

/// Reports every violated constraint: SoC bounds, power bounds, and
/// simultaneous charge/discharge. Comparisons carry a small absolute
/// tolerance so boundary-exact schedules pass.
FeasibilityReport check_feasible(const BatteryParams& battery, double tau_hours, double x0,
                                 const DispatchSchedule& sched, double tol = 1e-9);

/// Penalty ($) for deviating from the instruction signal, per-interval
/// prices applied to the positive parts of over- and under-response.
/// The four-argument form takes the interval length from the market.
double mismatch_penalty(const DispatchSchedule& sched, const RegulationTrace& trace,
                        const MarketParams& market, const BatteryParams& battery);
double mismatch_penalty(const DispatchSchedule& sched, const RegulationTrace& trace,
                        const MarketParams& market, const BatteryParams& battery,
                        double tau_hours);

struct CostBreakdown {
    double penalty_usd = 0.0;
    double degradation_usd = 0.0;
    double total_usd = 0.0;
};

/// Penalty plus rainflow degradation cost of the induced SoC profile.
/// Throws if the schedule is infeasible.
CostBreakdown total_objective(const DispatchSchedule& sched, const RegulationTrace& trace,
                              const MarketParams& market, const BatteryParams& battery,
                              double tau_hours, double x0);

/// Outcome of one closed-loop or offline run.
struct RunResult {
    DispatchSchedule schedule;
    SoCProfile soc;
    double penalty_usd = 0.0;
    double degradation_usd = 0.0;
    double total_usd = 0.0;
    double wall_time_s = 0.0;
};

}  // namespace bess

#endif
