#include "uavirs/agents.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavirs {

DiscreteActionTable::DiscreteActionTable(int directions, int distances,
                                         double max_distance)
    : directions_(directions), distances_(distances), max_distance_(max_distance) {
  if (directions_ < 1 || distances_ < 1 || max_distance_ < 0.0) {
    throw std::invalid_argument("DiscreteActionTable: bad grid");
  }
}

Action DiscreteActionTable::at(int index) const {
  if (index < 0 || index >= size()) {
    throw std::out_of_range("DiscreteActionTable: index outside the table");
  }
  const int direction = index / distances_;
  const int distance_step = index % distances_ + 1;  // distances start at l = 1
  Action a;
  a.angle = 2.0 * std::numbers::pi * direction / directions_;
  a.distance = max_distance_ * distance_step / distances_;
  return a;
}

namespace {

int argmax_index(const std::vector<double>& values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }
  return best;
}

std::vector<double> concat_obs_action(std::span<const double> obs,
                                      std::span<const double> action) {
  std::vector<double> joined;
  joined.reserve(obs.size() + action.size());
  joined.insert(joined.end(), obs.begin(), obs.end());
  joined.insert(joined.end(), action.begin(), action.end());
  return joined;
}

}  // namespace

DqnAgent::DqnAgent(std::vector<LayerSpec> specs, std::uint64_t seed, DqnConfig cfg)
    : evaluation_(init_network(std::move(specs), seed)),
      target_(evaluation_),  // target starts as an exact copy
      cfg_(cfg) {}

DqnAgent::DqnAgent(NetworkParams evaluation, NetworkParams target, DqnConfig cfg)
    : evaluation_(std::move(evaluation)), target_(std::move(target)), cfg_(cfg) {
  if (evaluation_.specs.size() != target_.specs.size()) {
    throw std::invalid_argument("DqnAgent: evaluation/target shapes differ");
  }
}

int DqnAgent::select_greedy(std::span<const double> obs) const {
  return argmax_index(forward(evaluation_, obs));
}

int DqnAgent::select(std::span<const double> obs, Rng& rng) const {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < cfg_.exploit_probability) return select_greedy(obs);
  std::uniform_int_distribution<int> pick(0, evaluation_.output_width() - 1);
  return pick(rng);
}

double DqnAgent::learn(std::span<const Transition> batch) {
  if (batch.empty()) throw std::invalid_argument("DqnAgent::learn: empty batch");
  const double inv_k = 1.0 / static_cast<double>(batch.size());
  NetworkGradients total = zero_gradients(evaluation_);
  double loss = 0.0;
  for (const Transition& t : batch) {
    double target_value = t.reward;
    if (!t.terminal) {
      const std::vector<double> next_q = forward(target_, t.next_obs);
      target_value += cfg_.discount * *std::max_element(next_q.begin(), next_q.end());
    }
    ForwardCache cache;
    const std::vector<double> q = forward(evaluation_, t.obs, &cache);
    const int action = static_cast<int>(t.action.at(0));
    if (action < 0 || action >= static_cast<int>(q.size())) {
      throw std::invalid_argument("DqnAgent::learn: action index outside the table");
    }
    const double diff = q[static_cast<std::size_t>(action)] - target_value;
    loss += diff * diff * inv_k;
    std::vector<double> out_grad(q.size(), 0.0);
    out_grad[static_cast<std::size_t>(action)] = 2.0 * diff * inv_k;
    accumulate(total, backward(evaluation_, cache, out_grad));
  }
  adam_step(evaluation_, total, cfg_.adam, StepDirection::descend);
  learn_calls_ += 1;
  if (cfg_.target_update_period > 0 && learn_calls_ % cfg_.target_update_period == 0) {
    soft_update(target_, evaluation_, 1.0);
  }
  return loss;
}

DdpgAgent::DdpgAgent(std::vector<LayerSpec> actor_specs,
                     std::vector<LayerSpec> critic_specs, std::uint64_t actor_seed,
                     std::uint64_t critic_seed, DdpgConfig cfg)
    : actor_(init_network(std::move(actor_specs), actor_seed)),
      critic_(init_network(std::move(critic_specs), critic_seed)),
      target_actor_(actor_),
      target_critic_(critic_),
      cfg_(cfg) {
  if (actor_.output_width() != 2) {
    throw std::invalid_argument("DdpgAgent: actor must emit (angle, distance)");
  }
  if (critic_.input_width() != actor_.input_width() + actor_.output_width()) {
    throw std::invalid_argument("DdpgAgent: critic input must be observation+action");
  }
  if (critic_.output_width() != 1) {
    throw std::invalid_argument("DdpgAgent: critic must emit a scalar value");
  }
}

double DdpgAgent::noise_sigma() const {
  return cfg_.noise_scale * std::pow(cfg_.noise_decay,
                                     static_cast<double>(exploration_steps_));
}

std::array<double, 2> DdpgAgent::select_raw(std::span<const double> obs, Rng& rng,
                                            bool explore) {
  const std::vector<double> out = forward(actor_, obs);
  std::array<double, 2> raw{out[0], out[1]};
  if (explore) {
    const double sigma = noise_sigma();
    std::normal_distribution<double> noise(0.0, sigma);
    raw[0] = std::clamp(raw[0] + noise(rng), -1.0, 1.0);
    raw[1] = std::clamp(raw[1] + noise(rng), -1.0, 1.0);
    exploration_steps_ += 1;
  }
  return raw;
}

Action DdpgAgent::map_action(const std::array<double, 2>& raw, double max_distance) {
  Action a;
  a.angle = wrap_angle(raw[0] * std::numbers::pi);
  a.distance = std::abs(raw[1]) * max_distance;
  return a;
}

double DdpgAgent::critic_step(std::span<const Transition> batch) {
  if (batch.empty()) throw std::invalid_argument("DdpgAgent::critic_step: empty batch");
  const double inv_k = 1.0 / static_cast<double>(batch.size());
  NetworkGradients total = zero_gradients(critic_);
  double loss = 0.0;
  for (const Transition& t : batch) {
    double target_value = t.reward;
    if (!t.terminal) {
      const std::vector<double> next_action = forward(target_actor_, t.next_obs);
      const std::vector<double> next_q =
          forward(target_critic_, concat_obs_action(t.next_obs, next_action));
      target_value += cfg_.discount * next_q[0];
    }
    ForwardCache cache;
    const std::vector<double> q =
        forward(critic_, concat_obs_action(t.obs, t.action), &cache);
    const double diff = q[0] - target_value;
    loss += diff * diff * inv_k;
    const std::vector<double> out_grad{2.0 * diff * inv_k};
    accumulate(total, backward(critic_, cache, out_grad));
  }
  adam_step(critic_, total, cfg_.critic_adam, StepDirection::descend);
  return loss;
}

double DdpgAgent::actor_step(std::span<const Transition> batch) {
  if (batch.empty()) throw std::invalid_argument("DdpgAgent::actor_step: empty batch");
  const double inv_k = 1.0 / static_cast<double>(batch.size());
  NetworkGradients total = zero_gradients(actor_);
  double objective = 0.0;
  for (const Transition& t : batch) {
    ForwardCache actor_cache;
    const std::vector<double> action = forward(actor_, t.obs, &actor_cache);
    ForwardCache critic_cache;
    const std::vector<double> q =
        forward(critic_, concat_obs_action(t.obs, action), &critic_cache);
    objective += q[0] * inv_k;
    // dQ/da comes out of the critic's input gradient; its first entries
    // belong to the observation and are discarded.
    const std::array<double, 1> unit{1.0};
    const NetworkGradients critic_grads = backward(critic_, critic_cache, unit);
    std::vector<double> dq_da(
        critic_grads.input.end() - static_cast<std::ptrdiff_t>(action.size()),
        critic_grads.input.end());
    for (double& g : dq_da) g *= inv_k;
    accumulate(total, backward(actor_, actor_cache, dq_da));
  }
  adam_step(actor_, total, cfg_.actor_adam, StepDirection::ascend);
  return objective;
}

void DdpgAgent::update_targets() {
  soft_update(target_actor_, actor_, cfg_.soft_update_rate);
  soft_update(target_critic_, critic_, cfg_.soft_update_rate);
}

std::pair<double, double> DdpgAgent::learn(std::span<const Transition> batch) {
  const double critic_loss = critic_step(batch);
  const double actor_objective = actor_step(batch);
  update_targets();
  return {critic_loss, actor_objective};
}

int greedy_select(const Env& env, const EnvState& state,
                  const DiscreteActionTable& table, const PhaseStrategy& phases) {
  int best = 0;
  double best_reward = env.step(state, table.at(0), phases).reward;
  for (int index = 1; index < table.size(); ++index) {
    const double reward = env.step(state, table.at(index), phases).reward;
    if (reward > best_reward) {
      best = index;
      best_reward = reward;
    }
  }
  return best;
}

int random_select(const DiscreteActionTable& table, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, table.size() - 1);
  return pick(rng);
}

}  // namespace uavirs
