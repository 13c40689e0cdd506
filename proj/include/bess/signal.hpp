#ifndef BESS_SIGNAL_HPP
#define BESS_SIGNAL_HPP

#include <cstdint>

#include "bess/types.hpp"

namespace bess {

/// Synthetic regulation trace: i.i.d. standard normal samples clipped to
/// [-1, 1]. Fully deterministic across platforms: the stream comes from
/// std::mt19937_64 (whose output is pinned by the standard) fed through an
/// explicit Box-Muller transform, one draw per step.
RegulationTrace generate_signal(std::size_t steps, std::uint64_t seed);

/// Per-trial seed derivation used by the experiment harness.
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) {
    return base_seed ^ trial_index;
}

}  // namespace bess

#endif
