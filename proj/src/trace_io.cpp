#include "bess/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bess/degradation.hpp"
#include "bess/rainflow.hpp"

namespace bess {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void row_error(const std::string& path, std::size_t row, const std::string& what) {
    throw std::runtime_error("load_trace: " + path + ": row " + std::to_string(row) + ": " + what);
}

}  // namespace

RegulationTrace load_trace(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("load_trace: cannot open " + path);

    RegulationTrace trace;
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    while (std::getline(file, line)) {
        ++row;
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("t,", 0) == 0 || line.rfind("t;", 0) == 0) continue;  // header row
        }
        std::istringstream ss(line);
        std::string t_field, r_field;
        if (!std::getline(ss, t_field, ',') || !std::getline(ss, r_field))
            row_error(path, row, "expected 't,r'");
        try {
            std::size_t pos = 0;
            const double r = std::stod(r_field, &pos);
            if (pos != r_field.size() && r_field.find_first_not_of(" \t\r", pos) != std::string::npos)
                row_error(path, row, "trailing characters in value");
            if (!(std::abs(r) <= 1.0))
                row_error(path, row, "value " + r_field + " outside [-1, 1]");
            trace.r.push_back(r);
        } catch (const std::invalid_argument&) {
            row_error(path, row, "malformed value '" + r_field + "'");
        } catch (const std::out_of_range&) {
            row_error(path, row, "value out of range '" + r_field + "'");
        }
    }
    if (trace.r.empty()) throw std::runtime_error("load_trace: " + path + ": empty trace");
    return trace;
}

void save_trace(const RegulationTrace& trace, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("save_trace: cannot open " + path);
    file << "t,r\n";
    for (std::size_t t = 0; t < trace.size(); ++t)
        file << t << ',' << fmt(trace.r[t]) << '\n';
    if (!file) throw std::runtime_error("save_trace: write failed for " + path);
}

void save_run_csv(const RunResult& result, const RegulationTrace& trace,
                  const MarketParams& market, const BatteryParams& battery, double tau_hours,
                  const std::string& path) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("save_run_csv: cannot open " + path);
    file << "t,r,c,d,x,cum_penalty,cum_degradation\n";

    const double theta = per_kwh(market.theta_per_mwh);
    const double pi = per_kwh(market.pi_per_mwh);
    double cum_penalty = 0.0;
    SoCProfile prefix;
    prefix.x0 = result.soc.x0;
    for (std::size_t t = 0; t < result.schedule.size(); ++t) {
        const double c = result.schedule.charge_kw[t];
        const double d = result.schedule.discharge_kw[t];
        const double net = battery.eta_c * c - d / battery.eta_d;
        const double r = trace.kw(t, battery);
        cum_penalty +=
            tau_hours * (theta * std::max(net - r, 0.0) + pi * std::max(r - net, 0.0));
        prefix.x.push_back(result.soc.x[t]);
        const double cum_deg =
            degradation_cost(rainflow_cycles(prefix), battery.stress,
                             battery.energy_capacity_kwh, battery.cell_price_per_kwh);
        file << (t + 1) << ',' << fmt(trace.r[t]) << ',' << fmt(c) << ',' << fmt(d) << ','
             << fmt(result.soc.x[t]) << ',' << fmt(cum_penalty) << ',' << fmt(cum_deg) << '\n';
    }
    if (!file) throw std::runtime_error("save_run_csv: write failed for " + path);
}

}  // namespace bess
