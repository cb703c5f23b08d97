#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "megc/config.hpp"

namespace megc {

// Refusal to clobber an existing artifact without --overwrite.
struct ArtifactExists : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EpisodeRow {
    int episode = 0;         // 1-based
    double ret = 0.0;        // summed reward over the episode
    double lat_comp = 0.0;   // mean per-slot latency, seconds
    double lat_aigc = 0.0;
    double lat_ve = 0.0;
    double critic_loss = 0.0;  // mean over the episode's applied updates
    double actor_value = 0.0;
    double sigma = 0.0;        // exploration noise level during the episode
};

struct TrainingLog {
    std::uint64_t seed = 0;
    std::vector<EpisodeRow> rows;
};

struct SlotRecord {
    int slot = 0;  // 1-based
    ChannelState channel;
    TaskArrivals tasks;
    Action action;
    LatencyBreakdown breakdown;
};

struct LatencyReport {
    std::string policy;
    double mean_comp = 0.0;
    double mean_aigc = 0.0;
    double mean_ve = 0.0;
    double mean_total = 0.0;
    std::vector<SlotRecord> records;
};

// The shared evaluation stream: every policy in a comparison is scored on
// these exact slots.
struct EvalSlot {
    ChannelState channel;
    TaskArrivals tasks;
};

std::vector<EvalSlot> make_eval_slots(const ExperimentConfig& config, int count,
                                      std::uint64_t seed);

// Trains one seed into `dir`: reward_curve.csv, periodic checkpoints, and
// checkpoint.ckpt (final). Everything is a pure function of (config, seed).
TrainingLog train_one_seed(const ExperimentConfig& config, std::uint64_t seed,
                           const std::string& dir, bool overwrite);

// All configured seeds, sequentially, into out_dir/seed_<s>/.
std::vector<TrainingLog> run_training(const ExperimentConfig& config, bool overwrite);

// Scores `policy` in {"lara", "fra", "rra", "oracle"} on the given slots.
// lara requires checkpoint_path. When `warm` reports are given, the oracle
// additionally seeds its per-slot search with their actions, which makes
// its result a per-slot lower bound on each of them.
LatencyReport evaluate_policy(const ExperimentConfig& config,
                              const std::vector<EvalSlot>& slots, const std::string& policy,
                              const std::string& checkpoint_path = "",
                              const std::vector<const LatencyReport*>& warm = {});

// eval subcommand: writes out_dir/eval_<policy>.csv.
LatencyReport run_eval(const ExperimentConfig& config, const std::string& policy,
                       const std::string& checkpoint_path, bool overwrite);

// compare subcommand: evaluates fra, rra, lara (when a checkpoint is
// given) and the warm-started oracle on shared slots; writes each
// eval_<policy>.csv plus the comparison.csv summary.
std::vector<LatencyReport> run_compare(const ExperimentConfig& config,
                                       const std::string& checkpoint_path, bool overwrite);

// plots subcommand: joins per-seed reward curves into mean/stderr tables
// under out_dir/plots/; copies the policy summary when comparison.csv
// exists.
void emit_plots_csv(const ExperimentConfig& config, bool overwrite);

// "%.17g" — round-trips doubles exactly through text.
std::string fmt_g17(double x);

}  // namespace megc
