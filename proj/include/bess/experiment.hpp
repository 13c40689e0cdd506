#ifndef BESS_EXPERIMENT_HPP
#define BESS_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bess/baselines.hpp"
#include "bess/model.hpp"
#include "bess/offline_solver.hpp"
#include "bess/types.hpp"

// Experiment orchestration: run a set of policies over an ensemble of
// traces, collect cost breakdowns and gaps against the offline optimum, and
// export results as one JSON summary plus one CSV per run. Trials are
// independent and executed in parallel; aggregation is ordered by trial
// index, so results are deterministic for a given config and seed.

namespace bess {

struct TraceSource {
    enum class Kind { generated, file };
    Kind kind = Kind::generated;
    std::size_t steps = 0;     // generated
    std::uint64_t seed = 0;    // generated; trial i uses seed ^ i
    std::string path;          // file
};

struct ExperimentConfig {
    BatteryParams battery;
    MarketParams market;
    SolverConfig solver;
    SolverConfig mpc_solver = mpc_solver_defaults();
    ThroughputModel throughput;
    double x0 = 0.5;
    TraceSource trace;
    std::vector<std::string> policies;  // subset of the names below
    int mpc_window = 60;
    int trials = 1;
    std::string output_dir;  // empty: keep results in memory only

    void validate() const;
};

inline constexpr const char* kPolicyNames[] = {"offline", "threshold", "greedy", "mpc",
                                               "throughput"};

/// Parse the nested battery/market/solver/experiment JSON document.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct TrialResult {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, RunResult>> runs;  // in config policy order
    double offline_objective_usd = 0.0;
    bool has_offline = false;
    /// J(policy) - J(offline) per non-offline policy, when offline also ran.
    std::vector<std::pair<std::string, double>> gaps;
};

struct PolicyAggregate {
    std::string policy;
    double mean_penalty_usd = 0.0;
    double mean_degradation_usd = 0.0;
    double mean_total_usd = 0.0;
    double mean_wall_time_s = 0.0;
    double max_gap_usd = 0.0;  // meaningful when offline also ran
};

struct ExperimentSummary {
    ExperimentConfig config;
    std::vector<TrialResult> trials;
    std::vector<PolicyAggregate> aggregates;
    double gap_bound_usd = 0.0;
    double u_hat = 0.0;
};

ExperimentSummary run_experiment(const ExperimentConfig& config);

/// summary.json plus run_<trial>_<policy>.csv files under dir.
void save_results(const ExperimentSummary& summary, const std::string& dir);

}  // namespace bess

#endif
