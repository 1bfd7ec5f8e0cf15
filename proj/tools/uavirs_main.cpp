#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "uavirs/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

uavirs::ExperimentConfig make_config(const std::string& config_path,
                                     const std::string& algo,
                                     const std::string& out_dir, long seed,
                                     bool seed_given) {
  uavirs::ExperimentConfig cfg = config_path.empty()
                                     ? uavirs::table2_preset()
                                     : uavirs::load_config(config_path);
  if (!algo.empty()) cfg.algo = uavirs::parse_algo(algo);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed_given) cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-assisted UAV downlink simulator and RL training harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string algo;
  std::string out_dir;
  std::string checkpoint;
  std::string run_dir;
  long seed = 0;
  int window = 100;

  CLI::App* train = app.add_subcommand("train", "Train or roll out a policy");
  train->add_option("--algo", algo, "dqn | ddpg | greedy | random");
  train->add_option("--config", config_path, "config file (defaults to the full-scale preset)");
  CLI::Option* train_seed = train->add_option("--seed", seed, "run seed");
  train->add_option("--out", out_dir, "output directory")->required();

  CLI::App* eval = app.add_subcommand("eval", "Run one exploration-free episode");
  eval->add_option("--config", config_path, "config file");
  eval->add_option("--checkpoint", checkpoint, "checkpoint file (dqn/ddpg only)");
  CLI::Option* eval_seed = eval->add_option("--seed", seed, "run seed");
  eval->add_option("--algo", algo, "override the config's algo");
  eval->add_option("--out", out_dir, "output directory")->required();

  CLI::App* export_cmd = app.add_subcommand("export", "Write plot tables for a run");
  export_cmd->add_option("--run", run_dir, "run directory with metrics CSVs")->required();
  export_cmd->add_option("--window", window, "episodes in the smoothing window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (train->parsed()) {
      const uavirs::ExperimentConfig cfg =
          make_config(config_path, algo, out_dir, seed, train_seed->count() > 0);
      const uavirs::RunMetrics metrics = uavirs::train(cfg);
      double total = 0.0;
      for (const uavirs::EpisodeRow& row : metrics.episodes) total += row.acc_reward;
      std::printf("trained %zu episodes, mean accumulated reward %.6g\n",
                  metrics.episodes.size(),
                  total / static_cast<double>(metrics.episodes.size()));
    } else if (eval->parsed()) {
      const uavirs::ExperimentConfig cfg =
          make_config(config_path, algo, out_dir, seed, eval_seed->count() > 0);
      const uavirs::RunMetrics metrics = uavirs::evaluate(cfg, checkpoint);
      const uavirs::EpisodeRow& row = metrics.episodes.front();
      std::printf("episode: %ld TSs, accumulated reward %.6g, final fairness %.6g\n",
                  row.ts_count, row.acc_reward, row.final_fairness);
    } else if (export_cmd->parsed()) {
      uavirs::export_curves(run_dir, window);
      std::printf("wrote reward_curve.tsv and ts_curves.tsv under %s\n",
                  run_dir.c_str());
    }
  } catch (const uavirs::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntimeError;
  }
  return kExitOk;
}
