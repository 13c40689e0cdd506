#ifndef BESS_TEST_SUPPORT_HPP
#define BESS_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "bess/types.hpp"

// Shared fixtures and independent reference implementations for tests.

namespace bess::test {

inline BatteryParams reference_battery() {
    BatteryParams b;
    b.energy_capacity_kwh = 250.0;
    b.power_rating_kw = 1000.0;
    b.eta_c = 1.0;
    b.eta_d = 1.0;
    b.soc_min = 0.0;
    b.soc_max = 1.0;
    b.cell_price_per_kwh = 300.0;
    b.stress = {StressKind::power_law, 5.24e-4, 2.03};
    return b;
}

inline MarketParams reference_market(double theta, double pi, double tau_hours = 1.0 / 60.0) {
    MarketParams m;
    m.theta_per_mwh = theta;
    m.pi_per_mwh = pi;
    m.tau_hours = tau_hours;
    return m;
}

// Brute-force rainflow reference: recursive four-point extraction on plain
// value arrays, no index maps. Each extraction emits one charging and one
// discharging half of equal depth; residue pairs emit one half each.
// Intentionally written as differently from the production engine as
// possible while following the same extraction rule.
inline void oracle_rainflow_values(std::vector<double> vals, std::vector<double>& v,
                                   std::vector<double>& w) {
    // compress plateaus
    std::vector<double> s;
    for (double x : vals)
        if (s.empty() || x != s.back()) s.push_back(x);
    // keep alternating extrema
    std::vector<double> e;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == 0 || i + 1 == s.size()) {
            e.push_back(s[i]);
            continue;
        }
        const bool peak = s[i] > s[i - 1] && s[i] > s[i + 1];
        const bool valley = s[i] < s[i - 1] && s[i] < s[i + 1];
        if (peak || valley) e.push_back(s[i]);
    }

    bool extracted = true;
    while (extracted && e.size() >= 4) {
        extracted = false;
        for (std::size_t i = 0; i + 3 < e.size(); ++i) {
            const double d1 = std::abs(e[i] - e[i + 1]);
            const double d2 = std::abs(e[i + 1] - e[i + 2]);
            const double d3 = std::abs(e[i + 2] - e[i + 3]);
            if (d2 <= d1 && d2 <= d3) {
                if (d2 > 1e-12) {
                    v.push_back(d2);
                    w.push_back(d2);
                }
                e.erase(e.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                        e.begin() + static_cast<std::ptrdiff_t>(i) + 3);
                extracted = true;
                break;  // restart from the head
            }
        }
    }
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
        const double depth = std::abs(e[i + 1] - e[i]);
        if (depth <= 1e-12) continue;
        if (e[i + 1] > e[i])
            v.push_back(depth);
        else
            w.push_back(depth);
    }
}

inline SoCProfile profile_from_values(const std::vector<double>& vals) {
    SoCProfile p;
    p.x0 = vals.at(0);
    p.x.assign(vals.begin() + 1, vals.end());
    return p;
}

/// Random profile with values on a 1/denom grid.
inline std::vector<double> random_grid_profile(std::mt19937_64& rng, std::size_t max_len,
                                               int denom) {
    std::uniform_int_distribution<std::size_t> len_dist(1, max_len);
    std::uniform_int_distribution<int> val_dist(0, denom);
    const std::size_t n = len_dist(rng);
    std::vector<double> vals(n + 1);
    for (auto& x : vals) x = static_cast<double>(val_dist(rng)) / denom;
    return vals;
}

/// Random complementarity-respecting dispatch schedule.
inline DispatchSchedule random_schedule(std::mt19937_64& rng, std::size_t steps, double p_max) {
    std::uniform_real_distribution<double> power(0.0, p_max);
    std::uniform_int_distribution<int> dir(0, 2);
    DispatchSchedule sched;
    sched.charge_kw.assign(steps, 0.0);
    sched.discharge_kw.assign(steps, 0.0);
    for (std::size_t t = 0; t < steps; ++t) {
        switch (dir(rng)) {
            case 0: sched.charge_kw[t] = power(rng); break;
            case 1: sched.discharge_kw[t] = power(rng); break;
            default: break;
        }
    }
    return sched;
}

inline std::vector<double> sorted(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return xs;
}

}  // namespace bess::test

#endif
