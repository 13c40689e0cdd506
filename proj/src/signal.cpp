#include "bess/signal.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace bess {

RegulationTrace generate_signal(std::size_t steps, std::uint64_t seed) {
    if (steps < 1) throw std::invalid_argument("generate_signal: need at least one step");
    std::mt19937_64 rng(seed);
    const auto uniform01 = [&rng]() {
        // 53-bit mantissa shifted into (0, 1); never exactly 0 or 1.
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    };
    RegulationTrace trace;
    trace.r.reserve(steps);
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (std::size_t t = 0; t < steps; ++t) {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
        trace.r.push_back(std::clamp(z, -1.0, 1.0));
    }
    return trace;
}

}  // namespace bess
