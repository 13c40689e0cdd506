#ifndef BESS_ONLINE_POLICY_HPP
#define BESS_ONLINE_POLICY_HPP

#include <utility>

#include "bess/model.hpp"
#include "bess/types.hpp"

// Threshold controller: follows the instruction signal while confining the
// SoC to a moving band of width u_hat anchored at the running SoC
// watermarks. Needs no future information and no optimization at runtime.

namespace bess {

struct ControllerState {
    double u_hat = 0.0;        // band width, normalized SoC
    double x_max_watermark = 0.0;
    double x_min_watermark = 0.0;
    double upper_bound = 0.0;  // current admissible SoC ceiling
    double lower_bound = 0.0;  // current admissible SoC floor
};

/// Controller with u_hat from the market/battery thresholds and both
/// watermarks at the starting SoC. x0 outside the physical band is an error.
ControllerState init_controller(const BatteryParams& battery, const MarketParams& market,
                                double x0);

struct StepAction {
    double charge_kw = 0.0;
    double discharge_kw = 0.0;
};

/// One control step: reads the pre-dispatch SoC, updates watermarks and
/// band bounds, then dispatches toward the instruction within the band.
/// Pure: the returned state is the only carried information.
std::pair<StepAction, ControllerState> step(const ControllerState& state,
                                            const BatteryParams& battery, double tau_hours,
                                            double soc, double r_kw);

/// Closed-loop rollout over a trace.
RunResult run_policy(const BatteryParams& battery, const MarketParams& market, double tau_hours,
                     double x0, const RegulationTrace& trace);

}  // namespace bess

#endif
