// Command-line harness around the dispatch library: signal generation,
// rainflow inspection, offline solving, online rollouts, gap bounds and
// batch experiments. File formats are documented in the README.

#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "bess/baselines.hpp"
#include "bess/degradation.hpp"
#include "bess/experiment.hpp"
#include "bess/model.hpp"
#include "bess/offline_solver.hpp"
#include "bess/online_policy.hpp"
#include "bess/rainflow.hpp"
#include "bess/signal.hpp"
#include "bess/trace_io.hpp"

namespace {

bess::SoCProfile load_soc_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open " + path);
    bess::SoCProfile profile;
    std::string line;
    bool first_value = true;
    std::size_t row = 0;
    while (std::getline(file, line)) {
        ++row;
        if (line.empty()) continue;
        if (line.rfind("t,", 0) == 0) continue;
        const auto comma = line.find(',');
        const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
        try {
            const double v = std::stod(field);
            if (first_value) {
                profile.x0 = v;
                first_value = false;
            } else {
                profile.x.push_back(v);
            }
        } catch (const std::exception&) {
            throw std::runtime_error(path + ": row " + std::to_string(row) + ": malformed value");
        }
    }
    if (first_value) throw std::runtime_error(path + ": empty SoC profile");
    return profile;
}

void write_cycles_csv(const bess::CycleDecomposition& dec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "kind,depth,t_lo,t_hi\n";
    char buf[32];
    for (const auto& c : dec.cycles) {
        std::snprintf(buf, sizeof(buf), "%.17g", c.depth);
        const char* kind = c.full ? "full" : (c.rising ? "charge_half" : "discharge_half");
        out << kind << ',' << buf << ',' << c.t_lo << ',' << c.t_hi << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"battery dispatch toolkit: rainflow degradation, offline solver, "
                 "threshold policy and experiment harness"};
    app.require_subcommand(1);

    // gen-signal
    std::size_t steps = 100;
    std::uint64_t seed = 0;
    std::string out_path, trace_path, config_path, soc_path, out_dir;
    auto* gen = app.add_subcommand("gen-signal", "generate a clipped-normal regulation trace");
    gen->add_option("--steps", steps, "number of control steps")->required();
    gen->add_option("--seed", seed, "RNG seed")->required();
    gen->add_option("--out", out_path, "output trace CSV")->required();

    auto* rf = app.add_subcommand("rainflow", "decompose a SoC profile CSV into cycles");
    rf->add_option("--soc", soc_path, "input CSV with header t,x")->required();
    rf->add_option("--out", out_path, "output cycles CSV")->required();

    auto* solve = app.add_subcommand("solve-offline", "solve the full-information problem");
    solve->add_option("--config", config_path, "experiment config JSON")->required();
    solve->add_option("--trace", trace_path, "trace CSV (overrides config trace)");
    solve->add_option("--out", out_path, "output run CSV")->required();

    std::string policy = "threshold";
    int window = 60;
    auto* online = app.add_subcommand("run-online", "run an online controller over a trace");
    online->add_option("--policy", policy, "threshold|greedy|mpc")->required();
    online->add_option("--window", window, "MPC lookahead window");
    online->add_option("--config", config_path, "experiment config JSON")->required();
    online->add_option("--trace", trace_path, "trace CSV (overrides config trace)");
    online->add_option("--out", out_path, "output run CSV")->required();

    auto* gap = app.add_subcommand("gap-bound", "print thresholds and the worst-case gap");
    gap->add_option("--config", config_path, "experiment config JSON")->required();

    auto* bench = app.add_subcommand("benchmark", "run the configured experiment ensemble");
    bench->add_option("--config", config_path, "experiment config JSON")->required();
    bench->add_option("--out", out_dir, "output directory (overrides config)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            bess::save_trace(bess::generate_signal(steps, seed), out_path);
            std::printf("wrote %zu steps to %s\n", steps, out_path.c_str());
            return 0;
        }
        if (rf->parsed()) {
            const auto profile = load_soc_csv(soc_path);
            write_cycles_csv(bess::rainflow_cycles(profile), out_path);
            std::printf("wrote cycles to %s\n", out_path.c_str());
            return 0;
        }

        const bess::ExperimentConfig cfg = bess::load_config(config_path);
        const double tau = cfg.market.tau_hours;

        const auto resolve_trace = [&]() {
            if (!trace_path.empty()) return bess::load_trace(trace_path);
            if (cfg.trace.kind == bess::TraceSource::Kind::file)
                return bess::load_trace(cfg.trace.path);
            return bess::generate_signal(cfg.trace.steps, cfg.trace.seed);
        };

        if (solve->parsed()) {
            const auto trace = resolve_trace();
            const auto report =
                bess::solve_offline(cfg.battery, cfg.market, tau, cfg.x0, trace, cfg.solver);
            bess::RunResult run;
            run.schedule = report.schedule;
            run.soc = bess::soc_from_dispatch(cfg.battery, tau, cfg.x0, report.schedule);
            run.penalty_usd = report.cost.penalty_usd;
            run.degradation_usd = report.cost.degradation_usd;
            run.total_usd = report.cost.total_usd;
            bess::save_run_csv(run, trace, cfg.market, cfg.battery, tau, out_path);
            std::printf("objective %.6f $ (penalty %.6f, degradation %.6f), %lld iterations%s\n",
                        report.objective_usd, report.cost.penalty_usd,
                        report.cost.degradation_usd, report.iterations,
                        report.converged ? "" : " [iteration cap reached]");
            return 0;
        }
        if (online->parsed()) {
            const auto trace = resolve_trace();
            bess::RunResult run;
            if (policy == "threshold")
                run = bess::run_policy(cfg.battery, cfg.market, tau, cfg.x0, trace);
            else if (policy == "greedy")
                run = bess::run_greedy(cfg.battery, cfg.market, tau, cfg.x0, trace);
            else if (policy == "mpc")
                run = bess::run_mpc(cfg.battery, cfg.market, tau, cfg.x0, trace, window,
                                    cfg.mpc_solver);
            else
                throw std::runtime_error("unknown policy: " + policy);
            bess::save_run_csv(run, trace, cfg.market, cfg.battery, tau, out_path);
            std::printf("%s: total %.6f $ (penalty %.6f, degradation %.6f)\n", policy.c_str(),
                        run.total_usd, run.penalty_usd, run.degradation_usd);
            return 0;
        }
        if (gap->parsed()) {
            const auto th = bess::thresholds(cfg.market, cfg.battery);
            std::printf("u_hat %.6f\nv_hat %.6f\nw_hat %.6f\ngap_bound %.6f $\n", th.u_hat,
                        th.v_hat, th.w_hat, bess::gap_bound(cfg.market, cfg.battery));
            return 0;
        }
        if (bench->parsed()) {
            bess::ExperimentConfig run_cfg = cfg;
            if (!out_dir.empty()) run_cfg.output_dir = out_dir;
            const auto summary = bess::run_experiment(run_cfg);
            for (const auto& agg : summary.aggregates) {
                std::printf("%-10s mean total %.4f $ (penalty %.4f, degradation %.4f)",
                            agg.policy.c_str(), agg.mean_total_usd, agg.mean_penalty_usd,
                            agg.mean_degradation_usd);
                if (agg.policy != "offline" &&
                    std::count(run_cfg.policies.begin(), run_cfg.policies.end(), "offline"))
                    std::printf("  max gap %.6f $", agg.max_gap_usd);
                std::printf("\n");
            }
            std::printf("gap bound %.6f $, u_hat %.4f\n", summary.gap_bound_usd, summary.u_hat);
            if (!run_cfg.output_dir.empty())
                std::printf("results written to %s\n", run_cfg.output_dir.c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
