#include "bess/degradation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bess {

double stress(const StressModel& model, double depth) {
    if (!(depth >= 0.0 && depth <= 1.0)) throw std::domain_error("stress: depth must be in [0, 1]");
    switch (model.kind) {
        case StressKind::power_law:
            return model.alpha * std::pow(depth, model.beta);
        case StressKind::exponential:
            return model.alpha * std::expm1(model.beta * depth);
    }
    throw std::logic_error("stress: unknown model kind");
}

double stress_derivative(const StressModel& model, double depth) {
    if (!(depth >= 0.0 && depth <= 1.0))
        throw std::domain_error("stress_derivative: depth must be in [0, 1]");
    switch (model.kind) {
        case StressKind::power_law:
            return model.alpha * model.beta * std::pow(depth, model.beta - 1.0);
        case StressKind::exponential:
            return model.alpha * model.beta * std::exp(model.beta * depth);
    }
    throw std::logic_error("stress_derivative: unknown model kind");
}

double stress_derivative_inverse(const StressModel& model, double y) {
    if (!(y > 0.0)) throw std::domain_error("stress_derivative_inverse: y must be > 0");
    double u = 0.0;
    switch (model.kind) {
        case StressKind::power_law:
            u = std::pow(y / (model.alpha * model.beta), 1.0 / (model.beta - 1.0));
            break;
        case StressKind::exponential:
            u = std::log(y / (model.alpha * model.beta)) / model.beta;
            break;
    }
    return std::clamp(u, 0.0, 1.0);
}

double life_loss(const CycleDecomposition& dec, const StressModel& model) {
    double loss = 0.0;
    for (const auto& c : dec.cycles) {
        const double phi = stress(model, std::min(c.depth, 1.0));
        loss += c.full ? phi : 0.5 * phi;
    }
    return loss;
}

double degradation_cost(const CycleDecomposition& dec, const StressModel& model,
                        double energy_capacity_kwh, double cell_price_per_kwh) {
    return life_loss(dec, model) * energy_capacity_kwh * cell_price_per_kwh;
}

double CycleValueFunctions::full(double u) const {
    const double eb = energy_capacity_kwh * cell_price_per_kwh;
    return eb * stress(stress_model, u) +
           energy_capacity_kwh * (charge_price_per_kwh + discharge_price_per_kwh) * u;
}

double CycleValueFunctions::charge_half(double v) const {
    const double eb = energy_capacity_kwh * cell_price_per_kwh;
    return 0.5 * eb * stress(stress_model, v) + energy_capacity_kwh * charge_price_per_kwh * v;
}

double CycleValueFunctions::discharge_half(double w) const {
    const double eb = energy_capacity_kwh * cell_price_per_kwh;
    return 0.5 * eb * stress(stress_model, w) + energy_capacity_kwh * discharge_price_per_kwh * w;
}

CycleValueFunctions cycle_value_functions(const MarketParams& market, const BatteryParams& battery) {
    CycleValueFunctions j;
    j.energy_capacity_kwh = battery.energy_capacity_kwh;
    j.cell_price_per_kwh = battery.cell_price_per_kwh;
    j.stress_model = battery.stress;
    j.charge_price_per_kwh = per_kwh(market.theta_per_mwh) / battery.eta_c;
    j.discharge_price_per_kwh = per_kwh(market.pi_per_mwh) * battery.eta_d;
    return j;
}

Thresholds thresholds(const MarketParams& market, const BatteryParams& battery) {
    if (!(battery.cell_price_per_kwh > 0.0))
        throw std::invalid_argument("thresholds: cell price must be > 0");
    const double a = per_kwh(market.theta_per_mwh) / battery.eta_c;
    const double b = per_kwh(market.pi_per_mwh) * battery.eta_d;
    const double B = battery.cell_price_per_kwh;

    const auto inv = [&](double price) {
        return price > 0.0 ? stress_derivative_inverse(battery.stress, price / B) : 0.0;
    };
    Thresholds th;
    th.u_hat = inv(a + b);
    th.v_hat = inv(a);
    th.w_hat = inv(b);
    return th;
}

double gap_bound(const MarketParams& market, const BatteryParams& battery) {
    const double a = per_kwh(market.theta_per_mwh) / battery.eta_c;
    const double b = per_kwh(market.pi_per_mwh) * battery.eta_d;
    // balanced-price case; the comparison carries a tiny relative tolerance
    // so that consistent efficiency pairs land here despite fp roundoff
    if (std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b))) return 0.0;

    const CycleValueFunctions j = cycle_value_functions(market, battery);
    const Thresholds th = thresholds(market, battery);
    double eps;
    if (b > a) {
        eps = j.discharge_half(th.u_hat) + 2.0 * j.charge_half(th.u_hat) -
              j.discharge_half(th.w_hat) - 2.0 * j.charge_half(th.v_hat);
    } else {
        eps = 2.0 * j.discharge_half(th.u_hat) + j.charge_half(th.u_hat) -
              2.0 * j.discharge_half(th.w_hat) - j.charge_half(th.v_hat);
    }
    // nonnegative by construction; clear fp cancellation noise near balance
    return std::max(eps, 0.0);
}

}  // namespace bess
