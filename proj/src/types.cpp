#include "bess/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bess {

void StressModel::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("stress model: alpha must be > 0");
    if (!(beta > 1.0)) throw std::invalid_argument("stress model: beta must be > 1");
}

void BatteryParams::validate() const {
    if (!(energy_capacity_kwh > 0.0)) throw std::invalid_argument("battery: E must be > 0");
    if (!(power_rating_kw > 0.0)) throw std::invalid_argument("battery: P must be > 0");
    if (!(eta_c > 0.0 && eta_c <= 1.0)) throw std::invalid_argument("battery: eta_c must be in (0, 1]");
    if (!(eta_d >= 1.0)) throw std::invalid_argument("battery: eta_d must be >= 1");
    if (!(soc_min >= 0.0 && soc_min < soc_max && soc_max <= 1.0))
        throw std::invalid_argument("battery: need 0 <= soc_min < soc_max <= 1");
    if (!(cell_price_per_kwh >= 0.0)) throw std::invalid_argument("battery: B must be >= 0");
    stress.validate();
}

void MarketParams::validate() const {
    if (!(theta_per_mwh >= 0.0)) throw std::invalid_argument("market: theta must be >= 0");
    if (!(pi_per_mwh >= 0.0)) throw std::invalid_argument("market: pi must be >= 0");
    if (!(tau_hours > 0.0)) throw std::invalid_argument("market: tau must be > 0");
}

void RegulationTrace::validate() const {
    if (r.empty()) throw std::invalid_argument("trace: empty");
    for (std::size_t t = 0; t < r.size(); ++t) {
        if (!(std::abs(r[t]) <= 1.0))
            throw std::invalid_argument("trace: value out of [-1, 1] at step " + std::to_string(t));
    }
    if (scale_kw && !(*scale_kw > 0.0)) throw std::invalid_argument("trace: scale must be > 0");
}

std::vector<double> SoCProfile::path() const {
    std::vector<double> p;
    p.reserve(x.size() + 1);
    p.push_back(x0);
    p.insert(p.end(), x.begin(), x.end());
    return p;
}

}  // namespace bess
