#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "uavirs/config.hpp"

namespace uavirs {

struct EpisodeRow {
  int episode = 0;
  long ts_count = 0;
  double acc_reward = 0.0;
  double final_fairness = 0.0;
  double cum_rate = 0.0;  // sum of served rates over the episode
};

struct StepRow {
  int episode = 0;
  long ts = 0;
  double x = 0.0;
  double y = 0.0;
  double energy = 0.0;
  int served_ue = -1;
  double rate = 0.0;
  double fairness = 0.0;
  double reward = 0.0;
  bool out_of_bounds = false;
};

struct RunMetrics {
  std::vector<EpisodeRow> episodes;
  std::vector<StepRow> steps;
};

// Agent checkpoint: a small header plus one named network block per net.
struct AgentCheckpoint {
  Algo algo = Algo::dqn;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, NetworkParams>> networks;
};

void save_checkpoint(const std::filesystem::path& path, const AgentCheckpoint& ckpt);
AgentCheckpoint load_checkpoint(const std::filesystem::path& path);

// Runs cfg.N_eps episodes with the configured policy, learning where the
// policy learns, and writes episodes.csv / steps.csv (and checkpoints for
// dqn/ddpg) under cfg.out_dir. Fully reproducible per (config, seed).
RunMetrics train(const ExperimentConfig& cfg);

// One exploration-free, learning-free episode; dqn/ddpg restore their
// networks from `checkpoint`, greedy/random ignore it (pass empty).
RunMetrics evaluate(const ExperimentConfig& cfg,
                    const std::filesystem::path& checkpoint);

// Reads a run directory's CSVs and writes plot-ready tab-separated tables:
// reward_curve.tsv (per-episode reward with a trailing-window mean) and
// ts_curves.tsv (per-TS cumulative reward, fairness and cumulative rate).
void export_curves(const std::filesystem::path& run_dir, int smooth_window = 100);

// CSV parsing used by export and the tests.
std::vector<EpisodeRow> read_episode_csv(const std::filesystem::path& path);
std::vector<StepRow> read_step_csv(const std::filesystem::path& path);

}  // namespace uavirs
