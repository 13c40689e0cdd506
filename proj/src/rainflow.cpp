#include "bess/rainflow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bess {

std::vector<double> CycleDecomposition::full_depths() const {
    std::vector<double> u;
    for (const auto& c : cycles)
        if (c.full) u.push_back(c.depth);
    return u;
}

std::vector<double> CycleDecomposition::charge_half_depths() const {
    std::vector<double> v;
    for (const auto& c : cycles)
        if (!c.full && c.rising) v.push_back(c.depth);
    return v;
}

std::vector<double> CycleDecomposition::discharge_half_depths() const {
    std::vector<double> w;
    for (const auto& c : cycles)
        if (!c.full && !c.rising) w.push_back(c.depth);
    return w;
}

std::pair<std::vector<double>, std::vector<double>> CycleDecomposition::half_cycle_view() const {
    std::vector<double> v, w;
    for (const auto& c : cycles) {
        if (c.full) {
            v.push_back(c.depth);
            w.push_back(c.depth);
        } else if (c.rising) {
            v.push_back(c.depth);
        } else {
            w.push_back(c.depth);
        }
    }
    return {std::move(v), std::move(w)};
}

std::vector<Extremum> extract_extrema(const SoCProfile& profile) {
    const std::vector<double> path = profile.path();

    // Collapse plateaus, keeping the first index of each run.
    std::vector<Extremum> pts;
    pts.push_back({0, path[0]});
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (path[i] != pts.back().value) pts.push_back({i, path[i]});
    }
    if (pts.size() <= 2) return pts;

    // Keep turning points plus both endpoints.
    std::vector<Extremum> out;
    out.push_back(pts.front());
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double prev = pts[i - 1].value, cur = pts[i].value, next = pts[i + 1].value;
        if ((cur > prev && cur > next) || (cur < prev && cur < next)) out.push_back(pts[i]);
    }
    out.push_back(pts.back());
    return out;
}

namespace {

// One monotone piece of a timestep's SoC motion.
struct Segment {
    std::size_t step;  // timestep t in 1..T
    double amount;     // attributed |delta x| portion, > 0
};

// Leg between two adjacent extrema in the working profile. Segments always
// sum to the distance between the leg's endpoints (up to fp roundoff).
struct Leg {
    std::vector<Segment> segs;
};

struct Engine {
    std::vector<Extremum> nodes;
    std::vector<Leg> legs;  // legs[i] connects nodes[i] -> nodes[i+1]
    CycleDecomposition out;

    void emit(CycleDecomposition::Cycle cyc, const std::vector<Segment>* a,
              const std::vector<Segment>* b) {
        if (cyc.depth <= kDepthTolerance) return;
        const auto id = static_cast<std::uint32_t>(out.cycles.size());
        out.cycles.push_back(cyc);
        for (const auto* list : {a, b}) {
            if (!list) continue;
            for (const auto& s : *list) {
                if (s.amount > 0.0) out.step_shares[s.step - 1].push_back({id, s.amount});
            }
        }
    }

    // Four-point scan, restarting from the head after each extraction.
    void run() {
        std::size_t i = 0;
        while (nodes.size() >= 4 && i + 3 < nodes.size()) {
            const double d1 = std::abs(nodes[i].value - nodes[i + 1].value);
            const double d2 = std::abs(nodes[i + 1].value - nodes[i + 2].value);
            const double d3 = std::abs(nodes[i + 2].value - nodes[i + 3].value);
            if (d2 <= d1 && d2 <= d3) {
                extract(i, d2);
                i = 0;
            } else {
                ++i;
            }
        }
        // Residue: every remaining leg is one half cycle.
        for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
            CycleDecomposition::Cycle cyc;
            cyc.depth = std::abs(nodes[j + 1].value - nodes[j].value);
            cyc.full = false;
            cyc.rising = nodes[j + 1].value > nodes[j].value;
            cyc.t_lo = nodes[j].t;
            cyc.t_hi = nodes[j + 1].t;
            emit(cyc, &legs[j].segs, nullptr);
        }
    }

    // Extract the full cycle (nodes[i+1], nodes[i+2]). Its first half is the
    // whole inner leg; its returning half is carved from the head of the
    // following leg, splitting the straddling step if needed.
    void extract(std::size_t i, double depth) {
        Leg& inner = legs[i + 1];
        Leg& ret = legs[i + 2];

        std::vector<Segment> return_half;
        double need = depth;
        std::size_t consumed = 0;
        for (auto& s : ret.segs) {
            if (need <= 0.0) break;
            if (s.amount <= need) {
                return_half.push_back(s);
                need -= s.amount;
                ++consumed;
            } else {
                return_half.push_back({s.step, need});
                s.amount -= need;
                need = 0.0;
            }
        }
        ret.segs.erase(ret.segs.begin(), ret.segs.begin() + static_cast<std::ptrdiff_t>(consumed));

        CycleDecomposition::Cycle cyc;
        cyc.depth = depth;
        cyc.full = true;
        cyc.rising = nodes[i + 2].value > nodes[i + 1].value;
        cyc.t_lo = nodes[i + 1].t;
        cyc.t_hi = nodes[i + 2].t;
        emit(cyc, &inner.segs, &return_half);

        // Reconnect: merge the leading leg with what is left of the
        // returning leg, drop the two inner nodes.
        Leg& lead = legs[i];
        lead.segs.insert(lead.segs.end(), ret.segs.begin(), ret.segs.end());
        nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                    nodes.begin() + static_cast<std::ptrdiff_t>(i) + 3);
        legs.erase(legs.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                   legs.begin() + static_cast<std::ptrdiff_t>(i) + 3);
    }
};

}  // namespace

CycleDecomposition rainflow_cycles(const SoCProfile& profile) {
    Engine eng;
    eng.nodes = extract_extrema(profile);
    eng.out.step_shares.assign(profile.steps(), {});

    const std::vector<double> path = profile.path();
    eng.legs.resize(eng.nodes.size() > 0 ? eng.nodes.size() - 1 : 0);
    for (std::size_t j = 0; j + 1 < eng.nodes.size(); ++j) {
        Leg& leg = eng.legs[j];
        for (std::size_t t = eng.nodes[j].t + 1; t <= eng.nodes[j + 1].t; ++t) {
            const double d = std::abs(path[t] - path[t - 1]);
            if (d > 0.0) leg.segs.push_back({t, d});
        }
    }

    eng.run();

    for (std::size_t t = 0; t < eng.out.step_shares.size(); ++t) {
        if (eng.out.step_shares[t].size() >= 2) eng.out.junction_steps.push_back(t + 1);
    }
    return eng.out;
}

std::pair<std::vector<double>, std::vector<double>> rainflow_half_cycles(const SoCProfile& profile) {
    return rainflow_cycles(profile).half_cycle_view();
}

CycleDecomposition rainflow_from_dispatch(const BatteryParams& battery, double tau_hours,
                                          const DispatchSchedule& sched) {
    if (sched.charge_kw.size() != sched.discharge_kw.size())
        throw std::invalid_argument("dispatch schedule: charge/discharge length mismatch");
    SoCProfile profile;
    profile.x0 = 0.0;
    profile.x.reserve(sched.size());
    const double cc = tau_hours * battery.eta_c / battery.energy_capacity_kwh;
    const double cd = tau_hours / (battery.eta_d * battery.energy_capacity_kwh);
    double x = 0.0;
    for (std::size_t t = 0; t < sched.size(); ++t) {
        x += cc * sched.charge_kw[t] - cd * sched.discharge_kw[t];
        profile.x.push_back(x);
    }
    return rainflow_cycles(profile);
}

}  // namespace bess
