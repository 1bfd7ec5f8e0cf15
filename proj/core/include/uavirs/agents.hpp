#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>

#include "uavirs/env.hpp"
#include "uavirs/neural.hpp"
#include "uavirs/replay.hpp"

namespace uavirs {

// The discrete (direction, distance) grid shared by DQN, Greedy and Random:
// directions 2*pi*i/N_mu for i = 0..N_mu-1, distances d_max*l/N_d for
// l = 1..N_d, laid out direction-major.
class DiscreteActionTable {
 public:
  DiscreteActionTable(int directions, int distances, double max_distance);

  int size() const { return directions_ * distances_; }
  int directions() const { return directions_; }
  int distances() const { return distances_; }
  double max_distance() const { return max_distance_; }

  Action at(int index) const;

 private:
  int directions_;
  int distances_;
  double max_distance_;
};

struct DqnConfig {
  double exploit_probability = 0.9;  // probability of taking the argmax action
  double discount = 0.99;
  int target_update_period = 200;  // learn calls between hard target syncs
  AdamConfig adam{1e-5};
};

// Value-based agent over the discrete action table: evaluation and target
// networks, uniform replay handled by the caller.
class DqnAgent {
 public:
  DqnAgent(std::vector<LayerSpec> specs, std::uint64_t seed, DqnConfig cfg);
  DqnAgent(NetworkParams evaluation, NetworkParams target, DqnConfig cfg);

  // Argmax action with probability exploit_probability, uniform otherwise
  // (ties go to the lowest index).
  int select(std::span<const double> obs, Rng& rng) const;
  int select_greedy(std::span<const double> obs) const;

  // One optimizer step on the evaluation network against bootstrap targets
  // from the target network; returns the pre-step mean squared error. Every
  // target_update_period calls the target is hard-copied from evaluation.
  double learn(std::span<const Transition> batch);

  const NetworkParams& evaluation_network() const { return evaluation_; }
  const NetworkParams& target_network() const { return target_; }
  NetworkParams& evaluation_network() { return evaluation_; }
  NetworkParams& target_network() { return target_; }
  const DqnConfig& config() const { return cfg_; }
  std::int64_t learn_calls() const { return learn_calls_; }

 private:
  NetworkParams evaluation_;
  NetworkParams target_;
  DqnConfig cfg_;
  std::int64_t learn_calls_ = 0;
};

struct DdpgConfig {
  double noise_scale = 1.3;     // initial exploration noise std
  double noise_decay = 0.9995;  // multiplicative decay per environment step
  double soft_update_rate = 0.01;
  double discount = 0.99;
  AdamConfig actor_adam{1e-4};
  AdamConfig critic_adam{2e-4};
};

// Deterministic actor-critic agent for the continuous action space. The raw
// actor output lives in (-1,1)^2 and is what gets stored in replay; mapping
// to a flyable Action happens in map_action.
class DdpgAgent {
 public:
  DdpgAgent(std::vector<LayerSpec> actor_specs, std::vector<LayerSpec> critic_specs,
            std::uint64_t actor_seed, std::uint64_t critic_seed, DdpgConfig cfg);

  // Raw 2-vector from the actor; with explore, Gaussian noise of the current
  // scale is added (advancing the decay step) and the result clipped to
  // [-1,1].
  std::array<double, 2> select_raw(std::span<const double> obs, Rng& rng, bool explore);

  // angle = raw[0]*pi wrapped into [0,2*pi); distance = |raw[1]|*max_distance.
  static Action map_action(const std::array<double, 2>& raw, double max_distance);

  // Critic descent, actor ascent, then soft target updates; returns
  // (pre-step critic loss, pre-step mean Q of the actor's actions).
  std::pair<double, double> learn(std::span<const Transition> batch);

  double critic_step(std::span<const Transition> batch);
  double actor_step(std::span<const Transition> batch);
  void update_targets();

  double noise_sigma() const;  // noise_scale * decay^steps
  std::int64_t exploration_steps() const { return exploration_steps_; }

  const NetworkParams& actor() const { return actor_; }
  const NetworkParams& critic() const { return critic_; }
  const NetworkParams& target_actor() const { return target_actor_; }
  const NetworkParams& target_critic() const { return target_critic_; }
  NetworkParams& actor() { return actor_; }
  NetworkParams& critic() { return critic_; }
  NetworkParams& target_actor() { return target_actor_; }
  NetworkParams& target_critic() { return target_critic_; }
  const DdpgConfig& config() const { return cfg_; }

 private:
  NetworkParams actor_;
  NetworkParams critic_;
  NetworkParams target_actor_;
  NetworkParams target_critic_;
  DdpgConfig cfg_;
  std::int64_t exploration_steps_ = 0;
};

// Simulates every discrete action one TS ahead and returns the index with the
// highest immediate reward (lowest index on ties). Never mutates the state.
int greedy_select(const Env& env, const EnvState& state,
                  const DiscreteActionTable& table, const PhaseStrategy& phases);

// Uniform draw over the table.
int random_select(const DiscreteActionTable& table, Rng& rng);

}  // namespace uavirs
