#include "uavirs/harness.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

namespace uavirs {

namespace {

constexpr const char* kEpisodeSchema = "# uavirs-metrics episodes v1";
constexpr const char* kStepSchema = "# uavirs-metrics steps v1";
constexpr const char* kCheckpointId = "uavirs-ckpt";
constexpr int kCheckpointVersion = 1;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_episode_row(std::ostream& out, const EpisodeRow& row) {
  out << row.episode << ',' << row.ts_count << ',' << fmt(row.acc_reward) << ','
      << fmt(row.final_fairness) << ',' << fmt(row.cum_rate) << '\n';
}

void write_step_row(std::ostream& out, const StepRow& row) {
  out << row.episode << ',' << row.ts << ',' << fmt(row.x) << ',' << fmt(row.y) << ','
      << fmt(row.energy) << ',' << row.served_ue << ',' << fmt(row.rate) << ','
      << fmt(row.fairness) << ',' << fmt(row.reward) << ','
      << (row.out_of_bounds ? 1 : 0) << '\n';
}

struct MetricsWriter {
  std::ofstream episodes;
  std::ofstream steps;

  explicit MetricsWriter(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    episodes.open(dir / "episodes.csv");
    steps.open(dir / "steps.csv");
    if (!episodes || !steps) {
      throw std::runtime_error("cannot open metrics files under " + dir.string());
    }
    episodes << kEpisodeSchema << "\n"
             << "episode,ts_count,acc_reward,final_fairness,cum_rate\n";
    steps << kStepSchema << "\n"
          << "episode,ts,x,y,energy,served_ue,rate,fairness,reward,out_of_bounds\n";
  }

  void flush_and_check() {
    episodes.flush();
    steps.flush();
    if (!episodes || !steps) throw std::runtime_error("metrics write failed");
  }
};

// One policy episode; learning callbacks are injected so train and evaluate
// share the loop.
struct EpisodeHooks {
  virtual void on_transition(const std::vector<double>& obs,
                             const std::vector<double>& action,
                             const StepRecord& rec,
                             const std::vector<double>& next_obs) = 0;
  virtual ~EpisodeHooks() = default;
};

struct Policy {
  virtual std::pair<Action, std::vector<double>> act(const Env& env,
                                                     const EnvState& state,
                                                     std::span<const double> obs,
                                                     bool explore) = 0;
  virtual ~Policy() = default;
};

struct DqnPolicy : Policy {
  DqnAgent& agent;
  const DiscreteActionTable& table;
  Rng& rng;
  DqnPolicy(DqnAgent& a, const DiscreteActionTable& t, Rng& r)
      : agent(a), table(t), rng(r) {}
  std::pair<Action, std::vector<double>> act(const Env&, const EnvState&,
                                             std::span<const double> obs,
                                             bool explore) override {
    const int index = explore ? agent.select(obs, rng) : agent.select_greedy(obs);
    return {table.at(index), {static_cast<double>(index)}};
  }
};

struct DdpgPolicy : Policy {
  DdpgAgent& agent;
  double max_distance;
  Rng& rng;
  DdpgPolicy(DdpgAgent& a, double d, Rng& r) : agent(a), max_distance(d), rng(r) {}
  std::pair<Action, std::vector<double>> act(const Env&, const EnvState&,
                                             std::span<const double> obs,
                                             bool explore) override {
    const std::array<double, 2> raw = agent.select_raw(obs, rng, explore);
    return {DdpgAgent::map_action(raw, max_distance), {raw[0], raw[1]}};
  }
};

struct GreedyPolicy : Policy {
  const DiscreteActionTable& table;
  PhaseStrategy phases;
  GreedyPolicy(const DiscreteActionTable& t, PhaseStrategy p) : table(t), phases(p) {}
  std::pair<Action, std::vector<double>> act(const Env& env, const EnvState& state,
                                             std::span<const double>, bool) override {
    const int index = greedy_select(env, state, table, phases);
    return {table.at(index), {static_cast<double>(index)}};
  }
};

struct RandomPolicy : Policy {
  const DiscreteActionTable& table;
  Rng& rng;
  RandomPolicy(const DiscreteActionTable& t, Rng& r) : table(t), rng(r) {}
  std::pair<Action, std::vector<double>> act(const Env&, const EnvState&,
                                             std::span<const double>, bool) override {
    const int index = random_select(table, rng);
    return {table.at(index), {static_cast<double>(index)}};
  }
};

EpisodeRow run_episode(const Env& env, const ExperimentConfig& cfg, Policy& policy,
                       bool explore, int episode, MetricsWriter* writer,
                       RunMetrics& metrics, EpisodeHooks* hooks) {
  const PhaseStrategy phases = cfg.phase_strategy();
  EnvState state = env.reset({cfg.X_U0, cfg.Y_U0});
  EpisodeRow row;
  row.episode = episode;
  bool done = false;
  while (!done) {
    const std::array<double, 3> obs_arr = env.observe(state);
    const std::vector<double> obs(obs_arr.begin(), obs_arr.end());
    auto [action, raw] = policy.act(env, state, obs, explore);
    const StepRecord rec = env.step(state, action, phases);

    StepRow step;
    step.episode = episode;
    step.ts = rec.next.ts;
    step.x = rec.next.x;
    step.y = rec.next.y;
    step.energy = rec.next.energy;
    step.served_ue = rec.served;
    step.rate = rec.rates[static_cast<std::size_t>(rec.served)];
    step.fairness = rec.fairness;
    step.reward = rec.reward;
    step.out_of_bounds = rec.out_of_bounds;
    if (writer) write_step_row(writer->steps, step);
    metrics.steps.push_back(step);

    row.ts_count += 1;
    row.acc_reward += rec.reward;
    row.final_fairness = rec.fairness;
    row.cum_rate += step.rate;

    if (hooks) {
      const std::array<double, 3> next_arr = env.observe(rec.next);
      hooks->on_transition(obs, raw, rec,
                           std::vector<double>(next_arr.begin(), next_arr.end()));
    }
    state = rec.next;
    done = rec.done;
  }
  if (writer) write_episode_row(writer->episodes, row);
  metrics.episodes.push_back(row);
  return row;
}

std::vector<LayerSpec> dense_specs(int inputs, const std::vector<int>& hidden,
                                   int outputs, Activation output_activation) {
  std::vector<LayerSpec> specs;
  int width = inputs;
  for (int h : hidden) {
    specs.push_back({width, h, Activation::relu});
    width = h;
  }
  specs.push_back({width, outputs, output_activation});
  return specs;
}

void check_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw std::runtime_error(std::string("training diverged: non-finite ") + what);
  }
}

void save_dqn(const std::filesystem::path& path, const ExperimentConfig& cfg,
              const DqnAgent& agent) {
  AgentCheckpoint ckpt;
  ckpt.algo = Algo::dqn;
  ckpt.seed = cfg.seed;
  ckpt.networks.emplace_back("evaluation", agent.evaluation_network());
  ckpt.networks.emplace_back("target", agent.target_network());
  save_checkpoint(path, ckpt);
}

void save_ddpg(const std::filesystem::path& path, const ExperimentConfig& cfg,
               const DdpgAgent& agent) {
  AgentCheckpoint ckpt;
  ckpt.algo = Algo::ddpg;
  ckpt.seed = cfg.seed;
  ckpt.networks.emplace_back("actor", agent.actor());
  ckpt.networks.emplace_back("critic", agent.critic());
  ckpt.networks.emplace_back("target_actor", agent.target_actor());
  ckpt.networks.emplace_back("target_critic", agent.target_critic());
  save_checkpoint(path, ckpt);
}

std::filesystem::path checkpoint_name(const std::filesystem::path& dir, int episode) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "checkpoint_ep%06d.txt", episode);
  return dir / buf;
}

const NetworkParams& find_network(const AgentCheckpoint& ckpt, const std::string& name) {
  for (const auto& [net_name, params] : ckpt.networks) {
    if (net_name == name) return params;
  }
  throw std::runtime_error("checkpoint is missing network '" + name + "'");
}

void check_specs(const std::vector<LayerSpec>& expected, const NetworkParams& net,
                 const std::string& name) {
  bool ok = expected.size() == net.specs.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) {
    ok = expected[i].inputs == net.specs[i].inputs &&
         expected[i].outputs == net.specs[i].outputs &&
         expected[i].activation == net.specs[i].activation;
  }
  if (!ok) {
    throw std::runtime_error("checkpoint network '" + name +
                             "' does not match the configured layer widths");
  }
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const AgentCheckpoint& ckpt) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open checkpoint file " + path.string());
  out << kCheckpointId << " " << kCheckpointVersion << "\n";
  out << "algo " << to_string(ckpt.algo) << "\n";
  out << "seed " << ckpt.seed << "\n";
  out << "networks " << ckpt.networks.size() << "\n";
  for (const auto& [name, net] : ckpt.networks) {
    out << "name " << name << "\n";
    save_network(out, net);
  }
  if (!out) throw std::runtime_error("checkpoint write failed: " + path.string());
}

AgentCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint file " + path.string());
  std::string id;
  int version = 0;
  if (!(in >> id >> version) || id != kCheckpointId || version != kCheckpointVersion) {
    throw std::runtime_error("bad checkpoint header in " + path.string());
  }
  AgentCheckpoint ckpt;
  std::string word, algo_name;
  std::size_t count = 0;
  if (!(in >> word >> algo_name) || word != "algo") {
    throw std::runtime_error("checkpoint is missing the algo line");
  }
  ckpt.algo = parse_algo(algo_name);
  if (!(in >> word >> ckpt.seed) || word != "seed") {
    throw std::runtime_error("checkpoint is missing the seed line");
  }
  if (!(in >> word >> count) || word != "networks") {
    throw std::runtime_error("checkpoint is missing the network count");
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::string name;
    if (!(in >> word >> name) || word != "name") {
      throw std::runtime_error("checkpoint network block has no name");
    }
    ckpt.networks.emplace_back(name, load_network(in));
  }
  return ckpt;
}

RunMetrics train(const ExperimentConfig& cfg) {
  cfg.validate();
  const Env env(cfg.geometry(), cfg.channel(), cfg.energy(), cfg.reward());
  RngStreams rngs(cfg.seed);
  const DiscreteActionTable table(cfg.N_mu, cfg.N_d, cfg.d_max);
  const std::filesystem::path out_dir(cfg.out_dir);
  MetricsWriter writer(out_dir);
  RunMetrics metrics;

  ReplayMemory replay(static_cast<std::size_t>(cfg.m_max));
  const std::size_t batch = static_cast<std::size_t>(cfg.batch);

  struct LearnHooks : EpisodeHooks {
    ReplayMemory& replay;
    std::size_t batch;
    Rng& rng;
    DqnAgent* dqn = nullptr;
    DdpgAgent* ddpg = nullptr;
    LearnHooks(ReplayMemory& m, std::size_t b, Rng& r) : replay(m), batch(b), rng(r) {}
    void on_transition(const std::vector<double>& obs, const std::vector<double>& raw,
                       const StepRecord& rec,
                       const std::vector<double>& next_obs) override {
      replay.push({obs, raw, rec.reward, next_obs, rec.done});
      if (replay.size() < batch) return;  // learning is gated until one batch fits
      const std::vector<Transition> sampled = replay.sample(batch, rng);
      if (dqn) {
        check_finite(dqn->learn(sampled), "DQN loss");
      } else if (ddpg) {
        const auto [critic_loss, actor_objective] = ddpg->learn(sampled);
        check_finite(critic_loss, "critic loss");
        check_finite(actor_objective, "actor objective");
      }
    }
  };

  std::optional<DqnAgent> dqn;
  std::optional<DdpgAgent> ddpg;
  std::unique_ptr<Policy> policy;
  LearnHooks hooks(replay, batch, rngs.replay);
  EpisodeHooks* hooks_ptr = nullptr;

  switch (cfg.algo) {
    case Algo::dqn: {
      DqnConfig agent_cfg;
      agent_cfg.exploit_probability = cfg.epsilon;
      agent_cfg.discount = cfg.gamma;
      agent_cfg.target_update_period = cfg.target_period;
      agent_cfg.adam.learning_rate = cfg.lr_dqn;
      dqn.emplace(dense_specs(3, cfg.dqn_hidden, table.size(), Activation::identity),
                  rngs.init(), agent_cfg);
      policy = std::make_unique<DqnPolicy>(*dqn, table, rngs.exploration);
      hooks.dqn = &*dqn;
      hooks_ptr = &hooks;
      break;
    }
    case Algo::ddpg: {
      DdpgConfig agent_cfg;
      agent_cfg.noise_scale = cfg.N_prime;
      agent_cfg.noise_decay = cfg.eta;
      agent_cfg.soft_update_rate = cfg.tau;
      agent_cfg.discount = cfg.gamma;
      agent_cfg.actor_adam.learning_rate = cfg.lr_actor;
      agent_cfg.critic_adam.learning_rate = cfg.lr_critic;
      const std::uint64_t actor_seed = rngs.init();
      const std::uint64_t critic_seed = rngs.init();
      ddpg.emplace(dense_specs(3, cfg.ddpg_hidden, 2, Activation::tanh),
                   dense_specs(5, cfg.ddpg_hidden, 1, Activation::identity),
                   actor_seed, critic_seed, agent_cfg);
      policy = std::make_unique<DdpgPolicy>(*ddpg, cfg.d_max, rngs.exploration);
      hooks.ddpg = &*ddpg;
      hooks_ptr = &hooks;
      break;
    }
    case Algo::greedy:
      policy = std::make_unique<GreedyPolicy>(table, cfg.phase_strategy());
      break;
    case Algo::random:
      policy = std::make_unique<RandomPolicy>(table, rngs.exploration);
      break;
  }

  for (int episode = 1; episode <= cfg.N_eps; ++episode) {
    run_episode(env, cfg, *policy, /*explore=*/true, episode, &writer, metrics,
                hooks_ptr);
    const bool at_interval =
        cfg.checkpoint_interval > 0 && episode % cfg.checkpoint_interval == 0;
    if (at_interval) {
      if (dqn) save_dqn(checkpoint_name(out_dir, episode), cfg, *dqn);
      if (ddpg) save_ddpg(checkpoint_name(out_dir, episode), cfg, *ddpg);
    }
  }
  if (dqn) save_dqn(out_dir / "checkpoint_final.txt", cfg, *dqn);
  if (ddpg) save_ddpg(out_dir / "checkpoint_final.txt", cfg, *ddpg);
  writer.flush_and_check();
  return metrics;
}

RunMetrics evaluate(const ExperimentConfig& cfg,
                    const std::filesystem::path& checkpoint) {
  cfg.validate();
  const Env env(cfg.geometry(), cfg.channel(), cfg.energy(), cfg.reward());
  RngStreams rngs(cfg.seed);
  const DiscreteActionTable table(cfg.N_mu, cfg.N_d, cfg.d_max);
  MetricsWriter writer(cfg.out_dir);
  RunMetrics metrics;

  std::optional<DqnAgent> dqn;
  std::optional<DdpgAgent> ddpg;
  std::unique_ptr<Policy> policy;

  switch (cfg.algo) {
    case Algo::dqn: {
      const AgentCheckpoint ckpt = load_checkpoint(checkpoint);
      if (ckpt.algo != Algo::dqn) throw std::runtime_error("checkpoint algo is not dqn");
      NetworkParams evaluation = find_network(ckpt, "evaluation");
      check_specs(dense_specs(3, cfg.dqn_hidden, table.size(), Activation::identity),
                  evaluation, "evaluation");
      NetworkParams target = find_network(ckpt, "target");
      dqn.emplace(std::move(evaluation), std::move(target), DqnConfig{});
      policy = std::make_unique<DqnPolicy>(*dqn, table, rngs.exploration);
      break;
    }
    case Algo::ddpg: {
      const AgentCheckpoint ckpt = load_checkpoint(checkpoint);
      if (ckpt.algo != Algo::ddpg) throw std::runtime_error("checkpoint algo is not ddpg");
      check_specs(dense_specs(3, cfg.ddpg_hidden, 2, Activation::tanh),
                  find_network(ckpt, "actor"), "actor");
      check_specs(dense_specs(5, cfg.ddpg_hidden, 1, Activation::identity),
                  find_network(ckpt, "critic"), "critic");
      DdpgAgent agent(dense_specs(3, cfg.ddpg_hidden, 2, Activation::tanh),
                      dense_specs(5, cfg.ddpg_hidden, 1, Activation::identity), 0, 1,
                      DdpgConfig{});
      agent.actor() = find_network(ckpt, "actor");
      agent.critic() = find_network(ckpt, "critic");
      agent.target_actor() = find_network(ckpt, "target_actor");
      agent.target_critic() = find_network(ckpt, "target_critic");
      ddpg.emplace(std::move(agent));
      policy = std::make_unique<DdpgPolicy>(*ddpg, cfg.d_max, rngs.exploration);
      break;
    }
    case Algo::greedy:
      policy = std::make_unique<GreedyPolicy>(table, cfg.phase_strategy());
      break;
    case Algo::random:
      policy = std::make_unique<RandomPolicy>(table, rngs.exploration);
      break;
  }

  run_episode(env, cfg, *policy, /*explore=*/false, 1, &writer, metrics, nullptr);
  writer.flush_and_check();
  return metrics;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

std::ifstream open_csv(const std::filesystem::path& path, const char* schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != schema) {
    throw std::runtime_error(path.string() + ": unexpected schema line");
  }
  std::getline(in, line);  // column names
  return in;
}

}  // namespace

std::vector<EpisodeRow> read_episode_csv(const std::filesystem::path& path) {
  std::ifstream in = open_csv(path, kEpisodeSchema);
  std::vector<EpisodeRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 5) throw std::runtime_error(path.string() + ": malformed row");
    rows.push_back({std::stoi(f[0]), std::stol(f[1]), std::stod(f[2]), std::stod(f[3]),
                    std::stod(f[4])});
  }
  return rows;
}

std::vector<StepRow> read_step_csv(const std::filesystem::path& path) {
  std::ifstream in = open_csv(path, kStepSchema);
  std::vector<StepRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 10) throw std::runtime_error(path.string() + ": malformed row");
    StepRow row;
    row.episode = std::stoi(f[0]);
    row.ts = std::stol(f[1]);
    row.x = std::stod(f[2]);
    row.y = std::stod(f[3]);
    row.energy = std::stod(f[4]);
    row.served_ue = std::stoi(f[5]);
    row.rate = std::stod(f[6]);
    row.fairness = std::stod(f[7]);
    row.reward = std::stod(f[8]);
    row.out_of_bounds = f[9] == "1";
    rows.push_back(row);
  }
  return rows;
}

void export_curves(const std::filesystem::path& run_dir, int smooth_window) {
  if (smooth_window < 1) throw std::invalid_argument("smooth_window must be >= 1");
  const std::vector<EpisodeRow> episodes = read_episode_csv(run_dir / "episodes.csv");
  const std::vector<StepRow> steps = read_step_csv(run_dir / "steps.csv");

  {
    std::ofstream out(run_dir / "reward_curve.tsv");
    if (!out) throw std::runtime_error("cannot write reward_curve.tsv");
    out << "episode\tacc_reward\tsmoothed\n";
    double window_sum = 0.0;
    for (std::size_t i = 0; i < episodes.size(); ++i) {
      window_sum += episodes[i].acc_reward;
      if (i >= static_cast<std::size_t>(smooth_window)) {
        window_sum -= episodes[i - static_cast<std::size_t>(smooth_window)].acc_reward;
      }
      const std::size_t in_window = std::min<std::size_t>(
          i + 1, static_cast<std::size_t>(smooth_window));
      out << episodes[i].episode << '\t' << fmt(episodes[i].acc_reward) << '\t'
          << fmt(window_sum / static_cast<double>(in_window)) << '\n';
    }
  }
  {
    std::ofstream out(run_dir / "ts_curves.tsv");
    if (!out) throw std::runtime_error("cannot write ts_curves.tsv");
    out << "episode\tts\tcum_reward\tfairness\tcum_rate\n";
    int episode = -1;
    double cum_reward = 0.0;
    double cum_rate = 0.0;
    for (const StepRow& row : steps) {
      if (row.episode != episode) {
        episode = row.episode;
        cum_reward = 0.0;
        cum_rate = 0.0;
      }
      cum_reward += row.reward;
      cum_rate += row.rate;
      out << row.episode << '\t' << row.ts << '\t' << fmt(cum_reward) << '\t'
          << fmt(row.fairness) << '\t' << fmt(cum_rate) << '\n';
    }
  }
}

}  // namespace uavirs
