#include "bess/offline_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bess/degradation.hpp"
#include "bess/rainflow.hpp"

namespace bess {

namespace {

constexpr double kBoxEps = 1e-12;  // relative clamp keeping iterates off the box walls

// Clipped problem data. One variable per step with a nonzero instruction;
// y_j is the dispatched power magnitude in [0, ub_j].
struct Instance {
    double tau = 0.0, E = 0.0, P = 0.0;
    double eta_c = 1.0, eta_d = 1.0;
    double soc_min = 0.0, soc_max = 1.0, x0 = 0.0;
    double cell_price = 0.0;
    StressModel stress;

    std::vector<std::size_t> var_step;  // variable -> 0-based step
    std::vector<double> ub;             // box upper bound, kW
    std::vector<char> charging;         // direction flag
    std::vector<double> soc_coef;       // d(delta x_t)/dy_j, signed
    std::vector<double> pen_coef;       // d(penalty)/dy_j, <= 0
    double pen_const = 0.0;
    std::size_t steps = 0;

    std::size_t vars() const { return var_step.size(); }
};

Instance build_instance(const BatteryParams& battery, const MarketParams& market,
                        double tau_hours, double x0, const RegulationTrace& trace) {
    Instance in;
    in.tau = tau_hours;
    in.E = battery.energy_capacity_kwh;
    in.P = battery.power_rating_kw;
    in.eta_c = battery.eta_c;
    in.eta_d = battery.eta_d;
    in.soc_min = battery.soc_min;
    in.soc_max = battery.soc_max;
    in.x0 = x0;
    in.cell_price = battery.cell_price_per_kwh;
    in.stress = battery.stress;
    in.steps = trace.size();

    const double theta = per_kwh(market.theta_per_mwh);
    const double pi = per_kwh(market.pi_per_mwh);
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const double r = trace.kw(t, battery);
        if (r == 0.0) continue;
        in.var_step.push_back(t);
        if (r > 0.0) {
            in.charging.push_back(1);
            in.ub.push_back(std::min(in.P, r));
            in.soc_coef.push_back(tau_hours * in.eta_c / in.E);
            in.pen_coef.push_back(-tau_hours * pi * in.eta_c);
            in.pen_const += tau_hours * pi * r;
        } else {
            in.charging.push_back(0);
            in.ub.push_back(std::min(in.P, -r));
            in.soc_coef.push_back(-tau_hours / (in.eta_d * in.E));
            in.pen_coef.push_back(-tau_hours * theta / in.eta_d);
            in.pen_const += tau_hours * theta * (-r);
        }
    }
    return in;
}

// Workspace reused across iterations to keep the inner loop allocation-light.
struct Eval {
    SoCProfile profile;
    CycleDecomposition dec;
    std::vector<double> grad_dx;  // d(degradation)/d(delta x_t), 1-based steps
    double true_objective = 0.0;
};

void evaluate(const Instance& in, const std::vector<double>& y, Eval& ev) {
    ev.profile.x0 = in.x0;
    ev.profile.x.assign(in.steps, in.x0);
    double x = in.x0;
    std::size_t j = 0;
    for (std::size_t t = 0; t < in.steps; ++t) {
        if (j < in.vars() && in.var_step[j] == t) {
            x += in.soc_coef[j] * y[j];
            ++j;
        }
        ev.profile.x[t] = x;
    }

    ev.dec = rainflow_cycles(ev.profile);

    double obj = in.pen_const;
    for (std::size_t k = 0; k < in.vars(); ++k) obj += in.pen_coef[k] * y[k];
    obj += degradation_cost(ev.dec, in.stress, in.E, in.cell_price);
    ev.true_objective = obj;

    // Exact degradation subgradient: every cycle contributes its signed
    // marginal stress over the steps between its bounding extrema.
    ev.grad_dx.assign(in.steps + 2, 0.0);
    const double eb = in.E * in.cell_price;
    for (const auto& c : ev.dec.cycles) {
        const double w =
            (c.full ? 1.0 : 0.5) * eb * stress_derivative(in.stress, std::min(c.depth, 1.0));
        const double signed_w = c.rising ? w : -w;
        ev.grad_dx[c.t_lo + 1] += signed_w;
        ev.grad_dx[c.t_hi + 1] -= signed_w;
    }
    double acc = 0.0;
    for (std::size_t t = 1; t <= in.steps; ++t) {
        acc += ev.grad_dx[t];
        ev.grad_dx[t] = acc;
    }
}

// Subgradient of the barrier objective at y; ev must hold the evaluation of
// y. Passing barrier_weight = +inf drops the barrier terms.
void subgradient_at(const Instance& in, const std::vector<double>& y, const Eval& ev,
                    double barrier_weight, std::vector<double>& g) {
    g.assign(in.vars(), 0.0);
    for (std::size_t j = 0; j < in.vars(); ++j)
        g[j] = in.pen_coef[j] + ev.grad_dx[in.var_step[j] + 1] * in.soc_coef[j];

    if (!std::isfinite(barrier_weight)) return;
    const double inv_l = 1.0 / barrier_weight;

    // SoC wall terms: suffix sums over active steps.
    double suffix = 0.0;
    for (std::size_t j = in.vars(); j-- > 0;) {
        const double xt = ev.profile.x[in.var_step[j]];
        const double hi = in.soc_max - xt, lo = xt - in.soc_min;
        if (hi <= 0.0 || lo <= 0.0)
            throw std::domain_error("subgradient: SoC on a bound, barrier undefined");
        suffix += 1.0 / hi - 1.0 / lo;
        g[j] += inv_l * suffix * in.soc_coef[j];
    }
    for (std::size_t j = 0; j < in.vars(); ++j) {
        if (y[j] <= 0.0 || y[j] >= in.ub[j])
            throw std::domain_error("subgradient: dispatch on a box bound, barrier undefined");
        g[j] += inv_l * (1.0 / (in.ub[j] - y[j]) - 1.0 / y[j]);
    }
}

bool soc_strictly_interior(const Instance& in, const std::vector<double>& y) {
    double x = in.x0;
    for (std::size_t j = 0; j < in.vars(); ++j) {
        x += in.soc_coef[j] * y[j];
        if (!(x > in.soc_min && x < in.soc_max)) return false;
    }
    return true;
}

bool soc_feasible_closed(const Instance& in, const std::vector<double>& y) {
    double x = in.x0;
    const double tol = 1e-12;
    for (std::size_t j = 0; j < in.vars(); ++j) {
        x += in.soc_coef[j] * y[j];
        if (x < in.soc_min - tol || x > in.soc_max + tol) return false;
    }
    return true;
}

std::vector<double> initial_point(const Instance& in, double margin_kw) {
    std::vector<double> y(in.vars(), 0.0);
    const double mx = 0.01 * (in.soc_max - in.soc_min);
    double x = in.x0;
    for (std::size_t j = 0; j < in.vars(); ++j) {
        double cap;
        if (in.charging[j])
            cap = std::max(in.soc_max - mx - x, 0.0) / in.soc_coef[j];
        else
            cap = std::max(x - (in.soc_min + mx), 0.0) / (-in.soc_coef[j]);
        y[j] = std::clamp(std::min(margin_kw, 0.9 * cap), kBoxEps * in.ub[j],
                          (1.0 - kBoxEps) * in.ub[j]);
        x += in.soc_coef[j] * y[j];
    }
    if (!soc_strictly_interior(in, y))
        throw std::runtime_error("solve_offline: no strictly feasible interior point found");
    return y;
}

DispatchSchedule schedule_from(const Instance& in, const std::vector<double>& y) {
    DispatchSchedule sched;
    sched.charge_kw.assign(in.steps, 0.0);
    sched.discharge_kw.assign(in.steps, 0.0);
    for (std::size_t j = 0; j < in.vars(); ++j) {
        if (in.charging[j])
            sched.charge_kw[in.var_step[j]] = y[j];
        else
            sched.discharge_kw[in.var_step[j]] = y[j];
    }
    return sched;
}

}  // namespace

void SolverConfig::validate(const BatteryParams& battery) const {
    if (barrier_weights.empty())
        throw std::invalid_argument("solver config: barrier schedule is empty");
    double prev = 0.0;
    for (double l : barrier_weights) {
        if (!(l > prev))
            throw std::invalid_argument(
                "solver config: barrier weights must be positive and strictly increasing");
        prev = l;
    }
    if (step_base_kw < 0.0) throw std::invalid_argument("solver config: step base must be >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("solver config: tol must be > 0");
    if (stall_window < 1) throw std::invalid_argument("solver config: stall window must be >= 1");
    if (max_iters_per_stage < 1)
        throw std::invalid_argument("solver config: max iters must be >= 1");
    const double margin =
        interior_margin_kw > 0.0 ? interior_margin_kw : 0.02 * battery.power_rating_kw;
    if (!(margin > 0.0 && margin < battery.power_rating_kw / 2.0))
        throw std::invalid_argument("solver config: interior margin must be in (0, P/2)");
}

SolveReport solve_offline(const BatteryParams& battery, const MarketParams& market,
                          double tau_hours, double x0, const RegulationTrace& trace,
                          const SolverConfig& config) {
    battery.validate();
    market.validate();
    config.validate(battery);
    if (trace.size() == 0) throw std::invalid_argument("solve_offline: zero-length trace");
    trace.validate();
    if (!(x0 >= battery.soc_min && x0 <= battery.soc_max))
        throw std::invalid_argument("solve_offline: x0 outside SoC bounds");
    if (!(tau_hours > 0.0)) throw std::invalid_argument("solve_offline: tau must be > 0");

    const Instance in = build_instance(battery, market, tau_hours, x0, trace);
    SolveReport report;

    if (in.vars() == 0) {
        report.schedule.charge_kw.assign(in.steps, 0.0);
        report.schedule.discharge_kw.assign(in.steps, 0.0);
        report.cost = total_objective(report.schedule, trace, market, battery, tau_hours, x0);
        report.objective_usd = report.cost.total_usd;
        report.converged = true;
        report.best_objective_history.push_back(report.objective_usd);
        return report;
    }

    const double step_base =
        config.step_base_kw > 0.0 ? config.step_base_kw : 0.1 * battery.power_rating_kw;
    const double margin = config.interior_margin_kw > 0.0 ? config.interior_margin_kw
                                                          : 0.02 * battery.power_rating_kw;

    // y is the strictly interior iterate; y_best may touch walls and is only
    // used for reporting and warm starts (re-interiorized when needed).
    std::vector<double> y = initial_point(in, margin);
    Eval ev, scratch;
    evaluate(in, y, ev);

    std::vector<double> y_best = y;
    double best = ev.true_objective;
    report.best_objective_history.push_back(best);

    std::vector<double> g, cand;
    bool last_stage_stalled = false;

    for (double lambda : config.barrier_weights) {
        // Warm start from the best point, pulled strictly inside the boxes.
        cand = y_best;
        for (std::size_t j = 0; j < in.vars(); ++j)
            cand[j] = std::clamp(cand[j], kBoxEps * in.ub[j], (1.0 - kBoxEps) * in.ub[j]);
        if (soc_strictly_interior(in, cand)) y = cand;
        evaluate(in, y, ev);

        const std::size_t stage_start = report.best_objective_history.size();
        last_stage_stalled = false;

        for (int k = 1; k <= config.max_iters_per_stage; ++k) {
            subgradient_at(in, y, ev, lambda, g);

            // diminishing step length a/sqrt(k) along the normalized
            // subgradient direction
            double gnorm = 0.0;
            for (double gj : g) gnorm += gj * gj;
            gnorm = std::sqrt(gnorm);
            if (gnorm <= 0.0) {
                report.best_objective_history.push_back(best);
                ++report.iterations;
                continue;
            }
            double alpha = step_base / (std::sqrt(static_cast<double>(k)) * gnorm);
            bool moved = false;
            for (int half = 0; half < 60 && !moved; ++half) {
                cand = y;
                for (std::size_t j = 0; j < in.vars(); ++j) {
                    double step = alpha * g[j];
                    const double cap = 0.2 * in.ub[j];  // keeps barrier blowups bounded
                    step = std::clamp(step, -cap, cap);
                    cand[j] =
                        std::clamp(y[j] - step, kBoxEps * in.ub[j], (1.0 - kBoxEps) * in.ub[j]);
                }
                if (soc_strictly_interior(in, cand))
                    moved = true;
                else
                    alpha *= 0.5;
            }
            if (moved) {
                y.swap(cand);
                evaluate(in, y, ev);
                if (ev.true_objective < best) {
                    best = ev.true_objective;
                    y_best = y;
                }
            }
            report.best_objective_history.push_back(best);
            ++report.iterations;

            const std::size_t n = report.best_objective_history.size();
            const auto w = static_cast<std::size_t>(config.stall_window);
            if (n >= stage_start + w) {
                const double improvement = report.best_objective_history[n - 1 - w] - best;
                if (improvement < config.tol * std::max(1.0, std::abs(best))) {
                    last_stage_stalled = true;
                    break;
                }
            }
        }

        // Wall-snap polish: the clipped optimum often rides the box walls the
        // barrier keeps iterates away from. Accept a snapped variant of the
        // best point when feasible and strictly better.
        const double snap_band = 1e-3;
        for (int mode = 0; mode < 3; ++mode) {
            cand = y_best;
            bool changed = false;
            for (std::size_t j = 0; j < in.vars(); ++j) {
                if (mode != 1 && cand[j] >= (1.0 - snap_band) * in.ub[j]) {
                    cand[j] = in.ub[j];
                    changed = true;
                } else if (mode != 2 && cand[j] <= snap_band * in.ub[j]) {
                    cand[j] = 0.0;
                    changed = true;
                }
            }
            if (!changed || !soc_feasible_closed(in, cand)) continue;
            evaluate(in, cand, scratch);
            if (scratch.true_objective < best) {
                best = scratch.true_objective;
                y_best = cand;
                report.best_objective_history.push_back(best);
            }
        }
    }

    report.schedule = schedule_from(in, y_best);
    report.cost = total_objective(report.schedule, trace, market, battery, tau_hours, x0);
    report.objective_usd = report.cost.total_usd;
    report.converged = last_stage_stalled;
    return report;
}

std::pair<std::vector<double>, std::vector<double>> subgradient(
    const BatteryParams& battery, const MarketParams& market, double tau_hours, double x0,
    const DispatchSchedule& sched, const RegulationTrace& trace, double barrier_weight) {
    if (sched.size() != trace.size())
        throw std::invalid_argument("subgradient: schedule and trace length differ");
    const Instance in = build_instance(battery, market, tau_hours, x0, trace);

    std::vector<double> y(in.vars(), 0.0);
    std::size_t j = 0;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const bool active = j < in.vars() && in.var_step[j] == t;
        const double c = sched.charge_kw[t], d = sched.discharge_kw[t];
        if (!active) {
            if (c != 0.0 || d != 0.0)
                throw std::invalid_argument(
                    "subgradient: dispatch on an idle step; schedule is not in clipped form");
            continue;
        }
        const double off = in.charging[j] ? d : c;
        if (off != 0.0)
            throw std::invalid_argument(
                "subgradient: dispatch against the instruction; schedule is not in clipped form");
        y[j] = in.charging[j] ? c : d;
        if (y[j] < 0.0 || y[j] > in.ub[j])
            throw std::invalid_argument("subgradient: dispatch outside the clipped box");
        ++j;
    }

    Eval ev;
    evaluate(in, y, ev);
    std::vector<double> g;
    subgradient_at(in, y, ev, barrier_weight, g);

    std::vector<double> dc(trace.size(), 0.0), dd(trace.size(), 0.0);
    for (std::size_t k = 0; k < in.vars(); ++k) {
        if (in.charging[k])
            dc[in.var_step[k]] = g[k];
        else
            dd[in.var_step[k]] = g[k];
    }
    return {std::move(dc), std::move(dd)};
}

std::pair<double, DispatchSchedule> brute_force_oracle(const BatteryParams& battery,
                                                       const MarketParams& market,
                                                       double tau_hours, double x0,
                                                       const RegulationTrace& trace,
                                                       int grid_levels) {
    if (trace.size() > 4) throw std::invalid_argument("brute_force_oracle: T must be <= 4");
    if (grid_levels < 2 || grid_levels > 41)
        throw std::invalid_argument("brute_force_oracle: grid_levels must be in [2, 41]");
    trace.validate();

    const std::size_t T = trace.size();
    std::vector<std::vector<double>> levels(T);
    for (std::size_t t = 0; t < T; ++t) {
        const double r = trace.kw(t, battery);
        if (r == 0.0) {
            levels[t] = {0.0};
            continue;
        }
        const double hi = std::min(battery.power_rating_kw, std::abs(r));
        for (int i = 0; i < grid_levels; ++i)
            levels[t].push_back(hi * static_cast<double>(i) / (grid_levels - 1));
    }

    DispatchSchedule sched, best_sched;
    sched.charge_kw.assign(T, 0.0);
    sched.discharge_kw.assign(T, 0.0);
    double best = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> idx(T, 0);
    std::vector<double> soc(T + 1, x0);
    const double cc = tau_hours * battery.eta_c / battery.energy_capacity_kwh;
    const double cd = tau_hours / (battery.eta_d * battery.energy_capacity_kwh);
    const double tol = 1e-12;

    std::size_t t = 0;
    while (true) {
        if (t == T) {
            const CostBreakdown cost = total_objective(sched, trace, market, battery, tau_hours, x0);
            if (cost.total_usd < best) {
                best = cost.total_usd;
                best_sched = sched;
            }
            --t;
            ++idx[t];
        } else if (idx[t] >= levels[t].size()) {
            if (t == 0) break;
            idx[t] = 0;
            --t;
            ++idx[t];
        } else {
            const double r = trace.kw(t, battery);
            const double y = levels[t][idx[t]];
            if (r >= 0.0) {
                sched.charge_kw[t] = y;
                sched.discharge_kw[t] = 0.0;
                soc[t + 1] = soc[t] + cc * y;
            } else {
                sched.charge_kw[t] = 0.0;
                sched.discharge_kw[t] = y;
                soc[t + 1] = soc[t] - cd * y;
            }
            if (soc[t + 1] < battery.soc_min - tol || soc[t + 1] > battery.soc_max + tol) {
                ++idx[t];  // SoC-infeasible branch, skip
            } else {
                ++t;
            }
        }
    }
    if (!std::isfinite(best))
        throw std::runtime_error("brute_force_oracle: no feasible grid point");
    return {best, std::move(best_sched)};
}

}  // namespace bess
