#ifndef BESS_RAINFLOW_HPP
#define BESS_RAINFLOW_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "bess/types.hpp"

// Rainflow cycle counting on SoC profiles via the four-point rule:
// given successive local extrema s1..s4 with ranges d1, d2, d3, the inner
// pair (s2, s3) is extracted as one full cycle whenever d2 <= d1 and
// d2 <= d3; the scan restarts from the head of the profile after every
// extraction. The alternating extrema left over form the residue, in which
// each consecutive pair is one half cycle.

namespace bess {

struct Extremum {
    std::size_t t;  // position in the full path [x0, x1, ..., xT], i.e. 0..T
    double value;
};

struct CycleDecomposition {
    struct Cycle {
        double depth = 0.0;   // normalized SoC swing
        bool full = false;    // four-point extraction (vs residue half)
        bool rising = false;  // residue: direction; full: direction of the extracted leg
        // Extrema positions bounding the cycle, as indices into the full
        // path. For a full cycle these are the two extracted turning points;
        // for a residue half the two residue extrema. Steps t_lo+1 .. t_hi
        // are the ones whose SoC motion the cycle's depth is made of.
        std::size_t t_lo = 0;
        std::size_t t_hi = 0;
    };

    /// Portion of one timestep's |SoC change| attributed to one cycle.
    struct Share {
        std::uint32_t cycle;  // index into cycles
        double depth_part;    // attributed |delta x|, > 0
    };

    std::vector<Cycle> cycles;

    /// step_shares[t-1] lists the attribution of step t (the move from
    /// x_{t-1} to x_t) across cycles. Steps with zero SoC change carry no
    /// shares. The per-cycle attributed parts sum to the cycle depth, so
    /// the charge/discharge throughput identities hold exactly.
    std::vector<std::vector<Share>> step_shares;

    /// Steps whose motion is split across two cycles.
    std::vector<std::size_t> junction_steps;

    // Depth views.
    std::vector<double> full_depths() const;            // u
    std::vector<double> charge_half_depths() const;     // v: residue rising halves
    std::vector<double> discharge_half_depths() const;  // w: residue falling halves

    /// The (v, w)-only view, where each full cycle contributes one charging
    /// and one discharging half of equal depth.
    std::pair<std::vector<double>, std::vector<double>> half_cycle_view() const;

    bool empty() const { return cycles.empty(); }
};

/// Strictly alternating local extrema of the path [x0, x1, ..., xT],
/// including the first and last points; plateaus collapse to their first
/// index. A constant profile yields a single point.
std::vector<Extremum> extract_extrema(const SoCProfile& profile);

/// Charging and discharging half-cycle depths (full cycles appear once in
/// each vector), in extraction order followed by residue order.
std::pair<std::vector<double>, std::vector<double>> rainflow_half_cycles(const SoCProfile& profile);

/// Full decomposition with timestep attribution maps.
CycleDecomposition rainflow_cycles(const SoCProfile& profile);

/// Decomposition of the cumulative profile induced by a dispatch schedule,
/// starting from 0. Depths depend only on SoC differences, so the result is
/// invariant to the actual initial SoC.
CycleDecomposition rainflow_from_dispatch(const BatteryParams& battery, double tau_hours,
                                          const DispatchSchedule& sched);

/// Depths at or below this threshold are dropped as zero-depth artifacts.
inline constexpr double kDepthTolerance = 1e-12;

}  // namespace bess

#endif
