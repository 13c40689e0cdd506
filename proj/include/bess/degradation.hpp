#ifndef BESS_DEGRADATION_HPP
#define BESS_DEGRADATION_HPP

#include "bess/rainflow.hpp"
#include "bess/types.hpp"

// Stress functions, cycle aging cost, per-cycle value functions and the
// threshold depths used by the online controller, plus the worst-case
// optimality gap constant of the threshold policy.

namespace bess {

/// Life fraction consumed by one full cycle of depth u in [0, 1].
double stress(const StressModel& model, double depth);

/// dPhi/du. Accepts depth in [0, 1].
double stress_derivative(const StressModel& model, double depth);

/// Inverse of the stress derivative, clamped into [0, 1]. Requires y > 0.
double stress_derivative_inverse(const StressModel& model, double y);

/// Total life fraction lost: full cycles count Phi(u), halves Phi(.)/2.
double life_loss(const CycleDecomposition& dec, const StressModel& model);

/// Cell-replacement dollars consumed: life_loss * E * B.
double degradation_cost(const CycleDecomposition& dec, const StressModel& model,
                        double energy_capacity_kwh, double cell_price_per_kwh);

/// Cost ($) attached to a single cycle of a given depth: degradation plus
/// the price-weighted depth term, with penalty prices taken per kWh.
struct CycleValueFunctions {
    double energy_capacity_kwh = 0.0;
    double cell_price_per_kwh = 0.0;
    StressModel stress_model;
    double charge_price_per_kwh = 0.0;     // theta' / eta_c
    double discharge_price_per_kwh = 0.0;  // pi' * eta_d

    double full(double u) const;            // J^u
    double charge_half(double v) const;     // J^v
    double discharge_half(double w) const;  // J^w
};

CycleValueFunctions cycle_value_functions(const MarketParams& market, const BatteryParams& battery);

/// Optimal cycle depths: u_hat bounds the online policy's SoC band; v_hat
/// and w_hat are the half-cycle counterparts. All clamped into [0, 1];
/// zero when the corresponding prices vanish.
struct Thresholds {
    double u_hat = 0.0;
    double v_hat = 0.0;
    double w_hat = 0.0;
};

Thresholds thresholds(const MarketParams& market, const BatteryParams& battery);

/// Worst-case optimality gap ($) of the threshold policy against the
/// full-information offline optimum. Zero when pi*eta_d == theta/eta_c.
double gap_bound(const MarketParams& market, const BatteryParams& battery);

}  // namespace bess

#endif
