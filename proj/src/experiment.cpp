#include "bess/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "bess/degradation.hpp"
#include "bess/online_policy.hpp"
#include "bess/signal.hpp"
#include "bess/trace_io.hpp"

namespace bess {

using nlohmann::json;

void ExperimentConfig::validate() const {
    battery.validate();
    market.validate();
    solver.validate(battery);
    mpc_solver.validate(battery);
    throughput.validate();
    if (!(x0 >= battery.soc_min && x0 <= battery.soc_max))
        throw std::invalid_argument("experiment: x0 outside SoC bounds");
    if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (policies.empty()) throw std::invalid_argument("experiment: select at least one policy");
    for (const auto& p : policies) {
        if (std::find(std::begin(kPolicyNames), std::end(kPolicyNames), p) ==
            std::end(kPolicyNames))
            throw std::invalid_argument("experiment: unknown policy '" + p + "'");
    }
    if (std::count(policies.begin(), policies.end(), "mpc") > 0 && mpc_window < 1)
        throw std::invalid_argument("experiment: mpc window must be >= 1");
    if (trace.kind == TraceSource::Kind::generated && trace.steps < 1)
        throw std::invalid_argument("experiment: generated trace needs steps >= 1");
    if (trace.kind == TraceSource::Kind::file && trace.path.empty())
        throw std::invalid_argument("experiment: file trace needs a path");
}

namespace {

StressModel parse_stress(const json& j) {
    StressModel m;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power_law")
        m.kind = StressKind::power_law;
    else if (kind == "exponential")
        m.kind = StressKind::exponential;
    else
        throw std::invalid_argument("config: stress kind must be power_law or exponential");
    m.alpha = j.at("alpha").get<double>();
    m.beta = j.at("beta").get<double>();
    return m;
}

SolverConfig parse_solver(const json& j) {
    SolverConfig cfg;
    if (j.contains("barrier_weights"))
        cfg.barrier_weights = j.at("barrier_weights").get<std::vector<double>>();
    if (j.contains("step_base_kw")) cfg.step_base_kw = j.at("step_base_kw").get<double>();
    if (j.contains("max_iters_per_stage"))
        cfg.max_iters_per_stage = j.at("max_iters_per_stage").get<int>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("stall_window")) cfg.stall_window = j.at("stall_window").get<int>();
    if (j.contains("interior_margin_kw"))
        cfg.interior_margin_kw = j.at("interior_margin_kw").get<double>();
    return cfg;
}

json solver_to_json(const SolverConfig& cfg) {
    return json{{"barrier_weights", cfg.barrier_weights},
                {"step_base_kw", cfg.step_base_kw},
                {"max_iters_per_stage", cfg.max_iters_per_stage},
                {"tol", cfg.tol},
                {"stall_window", cfg.stall_window},
                {"interior_margin_kw", cfg.interior_margin_kw}};
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

RunResult run_result_from(const SolveReport& report, const BatteryParams& battery,
                          double tau_hours, double x0, double wall_s) {
    RunResult r;
    r.schedule = report.schedule;
    r.soc = soc_from_dispatch(battery, tau_hours, x0, report.schedule);
    r.penalty_usd = report.cost.penalty_usd;
    r.degradation_usd = report.cost.degradation_usd;
    r.total_usd = report.cost.total_usd;
    r.wall_time_s = wall_s;
    return r;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    const json j = json::parse(json_text);
    ExperimentConfig cfg;

    const json& b = j.at("battery");
    cfg.battery.energy_capacity_kwh = b.at("energy_capacity_kwh").get<double>();
    cfg.battery.power_rating_kw = b.at("power_rating_kw").get<double>();
    cfg.battery.eta_c = b.at("eta_c").get<double>();
    cfg.battery.eta_d = b.at("eta_d").get<double>();
    cfg.battery.soc_min = b.at("soc_min").get<double>();
    cfg.battery.soc_max = b.at("soc_max").get<double>();
    cfg.battery.cell_price_per_kwh = b.at("cell_price_per_kwh").get<double>();
    cfg.battery.stress = parse_stress(b.at("stress"));

    const json& m = j.at("market");
    cfg.market.theta_per_mwh = m.at("theta_per_mwh").get<double>();
    cfg.market.pi_per_mwh = m.at("pi_per_mwh").get<double>();
    cfg.market.capacity_payment = m.value("capacity_payment", 0.0);
    cfg.market.tau_hours = m.at("tau_hours").get<double>();

    if (j.contains("solver")) cfg.solver = parse_solver(j.at("solver"));
    if (j.contains("mpc_solver")) cfg.mpc_solver = parse_solver(j.at("mpc_solver"));
    if (j.contains("throughput"))
        cfg.throughput.lambda_e_per_mwh = j.at("throughput").at("lambda_e_per_mwh").get<double>();

    const json& e = j.at("experiment");
    cfg.x0 = e.at("x0").get<double>();
    const json& tr = e.at("trace");
    const std::string kind = tr.at("type").get<std::string>();
    if (kind == "generated") {
        cfg.trace.kind = TraceSource::Kind::generated;
        cfg.trace.steps = tr.at("steps").get<std::size_t>();
        cfg.trace.seed = tr.at("seed").get<std::uint64_t>();
    } else if (kind == "file") {
        cfg.trace.kind = TraceSource::Kind::file;
        cfg.trace.path = tr.at("path").get<std::string>();
    } else {
        throw std::invalid_argument("config: trace type must be generated or file");
    }
    cfg.policies = e.at("policies").get<std::vector<std::string>>();
    cfg.mpc_window = e.value("mpc_window", 60);
    cfg.trials = e.at("trials").get<int>();
    cfg.output_dir = e.value("output_dir", std::string{});

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("load_config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
    config.validate();

    ExperimentSummary summary;
    summary.config = config;
    summary.gap_bound_usd = gap_bound(config.market, config.battery);
    summary.u_hat = thresholds(config.market, config.battery).u_hat;
    summary.trials.resize(static_cast<std::size_t>(config.trials));

    const double tau = config.market.tau_hours;

    parallel_for(static_cast<std::size_t>(config.trials), [&](std::size_t i) {
        TrialResult& trial = summary.trials[i];
        trial.trial = i;

        RegulationTrace trace;
        if (config.trace.kind == TraceSource::Kind::generated) {
            trial.seed = trial_seed(config.trace.seed, i);
            trace = generate_signal(config.trace.steps, trial.seed);
        } else {
            trace = load_trace(config.trace.path);
        }

        for (const auto& policy : config.policies) {
            const auto start = std::chrono::steady_clock::now();
            RunResult run;
            if (policy == "offline") {
                const SolveReport report = solve_offline(config.battery, config.market, tau,
                                                         config.x0, trace, config.solver);
                const double wall =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                run = run_result_from(report, config.battery, tau, config.x0, wall);
                trial.offline_objective_usd = report.objective_usd;
                trial.has_offline = true;
            } else if (policy == "threshold") {
                run = run_policy(config.battery, config.market, tau, config.x0, trace);
            } else if (policy == "greedy") {
                run = run_greedy(config.battery, config.market, tau, config.x0, trace);
            } else if (policy == "mpc") {
                run = run_mpc(config.battery, config.market, tau, config.x0, trace,
                              config.mpc_window, config.mpc_solver);
            } else {  // throughput
                const SolveReport report = solve_offline_throughput(
                    config.battery, config.market, tau, config.x0, trace, config.throughput);
                const double wall =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                run = run_result_from(report, config.battery, tau, config.x0, wall);
            }

            const FeasibilityReport feas =
                check_feasible(config.battery, tau, config.x0, run.schedule);
            if (!feas.ok())
                throw std::runtime_error("run_experiment: trial " + std::to_string(i) +
                                         ", policy " + policy +
                                         " produced an infeasible schedule: " + feas.summary());
            trial.runs.emplace_back(policy, std::move(run));
        }

        if (trial.has_offline) {
            for (const auto& [policy, run] : trial.runs) {
                if (policy == "offline") continue;
                trial.gaps.emplace_back(policy, run.total_usd - trial.offline_objective_usd);
            }
        }
    });

    for (const auto& policy : config.policies) {
        PolicyAggregate agg;
        agg.policy = policy;
        double n = 0.0;
        for (const auto& trial : summary.trials) {
            for (const auto& [name, run] : trial.runs) {
                if (name != policy) continue;
                agg.mean_penalty_usd += run.penalty_usd;
                agg.mean_degradation_usd += run.degradation_usd;
                agg.mean_total_usd += run.total_usd;
                agg.mean_wall_time_s += run.wall_time_s;
                n += 1.0;
            }
            for (const auto& [name, gap] : trial.gaps)
                if (name == policy) agg.max_gap_usd = std::max(agg.max_gap_usd, gap);
        }
        if (n > 0.0) {
            agg.mean_penalty_usd /= n;
            agg.mean_degradation_usd /= n;
            agg.mean_total_usd /= n;
            agg.mean_wall_time_s /= n;
        }
        summary.aggregates.push_back(agg);
    }

    if (!config.output_dir.empty()) save_results(summary, config.output_dir);
    return summary;
}

void save_results(const ExperimentSummary& summary, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const ExperimentConfig& cfg = summary.config;

    json j;
    j["config"] = {
        {"battery",
         {{"energy_capacity_kwh", cfg.battery.energy_capacity_kwh},
          {"power_rating_kw", cfg.battery.power_rating_kw},
          {"eta_c", cfg.battery.eta_c},
          {"eta_d", cfg.battery.eta_d},
          {"soc_min", cfg.battery.soc_min},
          {"soc_max", cfg.battery.soc_max},
          {"cell_price_per_kwh", cfg.battery.cell_price_per_kwh},
          {"stress",
           {{"kind", cfg.battery.stress.kind == StressKind::power_law ? "power_law" : "exponential"},
            {"alpha", cfg.battery.stress.alpha},
            {"beta", cfg.battery.stress.beta}}}}},
        {"market",
         {{"theta_per_mwh", cfg.market.theta_per_mwh},
          {"pi_per_mwh", cfg.market.pi_per_mwh},
          {"capacity_payment", cfg.market.capacity_payment},
          {"tau_hours", cfg.market.tau_hours}}},
        {"solver", solver_to_json(cfg.solver)},
        {"mpc_solver", solver_to_json(cfg.mpc_solver)},
        {"throughput", {{"lambda_e_per_mwh", cfg.throughput.lambda_e_per_mwh}}},
        {"experiment",
         {{"x0", cfg.x0},
          {"policies", cfg.policies},
          {"mpc_window", cfg.mpc_window},
          {"trials", cfg.trials}}}};
    if (cfg.trace.kind == TraceSource::Kind::generated) {
        j["config"]["experiment"]["trace"] = {
            {"type", "generated"}, {"steps", cfg.trace.steps}, {"seed", cfg.trace.seed}};
    } else {
        j["config"]["experiment"]["trace"] = {{"type", "file"}, {"path", cfg.trace.path}};
    }

    j["gap_bound_usd"] = summary.gap_bound_usd;
    j["u_hat"] = summary.u_hat;
    j["capacity_payment_usd"] = cfg.market.capacity_payment;  // reported, never optimized

    json aggs = json::array();
    for (const auto& a : summary.aggregates) {
        aggs.push_back({{"policy", a.policy},
                        {"mean_penalty_usd", a.mean_penalty_usd},
                        {"mean_degradation_usd", a.mean_degradation_usd},
                        {"mean_total_usd", a.mean_total_usd},
                        {"max_gap_usd", a.max_gap_usd}});
    }
    j["aggregates"] = aggs;

    json trials = json::array();
    json timing = json::array();
    for (const auto& trial : summary.trials) {
        json t;
        t["trial"] = trial.trial;
        t["seed"] = trial.seed;
        json runs = json::array();
        json walls = json::array();
        for (const auto& [policy, run] : trial.runs) {
            runs.push_back({{"policy", policy},
                            {"penalty_usd", run.penalty_usd},
                            {"degradation_usd", run.degradation_usd},
                            {"total_usd", run.total_usd}});
            walls.push_back({{"policy", policy}, {"wall_time_s", run.wall_time_s}});
        }
        t["runs"] = runs;
        if (trial.has_offline) {
            t["offline_objective_usd"] = trial.offline_objective_usd;
            json gaps = json::object();
            for (const auto& [policy, gap] : trial.gaps) gaps[policy] = gap;
            t["gaps"] = gaps;
        }
        trials.push_back(t);
        timing.push_back({{"trial", trial.trial}, {"walls", walls}});
    }
    j["trials"] = trials;
    j["timing"] = timing;  // wall-clock only; excluded from determinism comparisons

    std::ofstream out(std::filesystem::path(dir) / "summary.json");
    if (!out) throw std::runtime_error("save_results: cannot write summary.json in " + dir);
    out << j.dump(2) << '\n';

    for (const auto& trial : summary.trials) {
        RegulationTrace trace;
        if (cfg.trace.kind == TraceSource::Kind::generated)
            trace = generate_signal(cfg.trace.steps, trial.seed);
        else
            trace = load_trace(cfg.trace.path);
        for (const auto& [policy, run] : trial.runs) {
            const auto path = std::filesystem::path(dir) /
                              ("run_" + std::to_string(trial.trial) + "_" + policy + ".csv");
            save_run_csv(run, trace, cfg.market, cfg.battery, cfg.market.tau_hours, path.string());
        }
    }
}

}  // namespace bess
