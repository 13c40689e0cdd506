#ifndef BESS_TYPES_HPP
#define BESS_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

// Core value types for battery dispatch under a pay-for-performance market.
//
// Unit conventions used throughout the library:
//   power        kW
//   energy       kWh
//   time         hours (tau = control interval length)
//   SoC          normalized, dimensionless in [0, 1]
//   cell price   $/kWh
//   penalties    $/MWh at the interface; converted to $/kWh internally

namespace bess {

/// Cycle-depth stress curve: life fraction consumed by one full cycle of
/// depth u. power_law evaluates alpha * u^beta; exponential evaluates
/// alpha * (exp(beta * u) - 1) so that a zero-depth cycle costs nothing.
enum class StressKind { power_law, exponential };

struct StressModel {
    StressKind kind = StressKind::power_law;
    double alpha = 0.0;
    double beta = 0.0;

    void validate() const;  // alpha > 0, beta > 1
};

struct BatteryParams {
    double energy_capacity_kwh = 0.0;  // E
    double power_rating_kw = 0.0;      // P
    double eta_c = 1.0;                // charging efficiency, in (0, 1]
    double eta_d = 1.0;                // discharging efficiency, >= 1
    double soc_min = 0.0;
    double soc_max = 1.0;
    double cell_price_per_kwh = 0.0;   // B
    StressModel stress;

    void validate() const;
};

struct MarketParams {
    double theta_per_mwh = 0.0;     // over-response penalty price
    double pi_per_mwh = 0.0;        // under-response penalty price
    double capacity_payment = 0.0;  // $, decision-independent; never optimized
    double tau_hours = 0.0;         // control interval duration

    void validate() const;
};

/// Instruction signal, normalized to [-1, 1]. Positive values are charging
/// instructions. scale_kw maps the normalized signal to power; when unset
/// the battery power rating is used.
struct RegulationTrace {
    std::vector<double> r;
    std::optional<double> scale_kw;

    std::size_t size() const { return r.size(); }
    double effective_scale(const BatteryParams& battery) const {
        return scale_kw ? *scale_kw : battery.power_rating_kw;
    }
    double kw(std::size_t t, const BatteryParams& battery) const {
        return r[t] * effective_scale(battery);
    }

    void validate() const;  // every |r_t| <= 1, nonempty
};

/// Charge/discharge power decisions per control step. Valid schedules keep
/// both sequences in [0, P] and never charge and discharge simultaneously.
struct DispatchSchedule {
    std::vector<double> charge_kw;
    std::vector<double> discharge_kw;

    std::size_t size() const { return charge_kw.size(); }
};

/// State-of-charge trajectory: initial value plus one sample per step.
struct SoCProfile {
    double x0 = 0.0;
    std::vector<double> x;  // x_1 .. x_T

    std::size_t steps() const { return x.size(); }
    /// Full sequence [x0, x_1, ..., x_T].
    std::vector<double> path() const;
};

inline double per_kwh(double price_per_mwh) { return price_per_mwh / 1000.0; }

}  // namespace bess

#endif
