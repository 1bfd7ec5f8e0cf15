#include "uavirs/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavirs {

double propulsion_energy(double velocity, const EnergyModel& model) {
  if (velocity < 0.0) throw std::invalid_argument("propulsion_energy: negative velocity");
  const double tip = velocity / model.tip_speed;
  const double hov = velocity / model.hover_velocity;
  const double blade = model.blade_power * (1.0 + 3.0 * tip * tip);
  const double induced =
      model.induced_power *
      std::sqrt(std::sqrt(1.0 + 0.25 * hov * hov * hov * hov) - 0.5 * hov * hov);
  const double parasite = 0.5 * model.drag_ratio * model.air_density *
                          model.rotor_solidity * model.disc_area *
                          velocity * velocity * velocity;
  return (blade + induced + parasite) * model.slot_duration;
}

Env::Env(ScenarioGeometry geometry, ChannelParams channel, EnergyModel energy,
         RewardConfig reward)
    : geometry_(std::move(geometry)),
      channel_(channel),
      energy_(energy),
      reward_(reward) {
  if (geometry_.irs_count() < 1 || geometry_.ue_count() < 1 ||
      geometry_.elements_per_irs < 1) {
    throw std::invalid_argument("Env: geometry needs at least one IRS, one UE and one element");
  }
  ue_channels_.reserve(static_cast<std::size_t>(geometry_.ue_count()));
  for (int n = 0; n < geometry_.ue_count(); ++n) {
    std::vector<ComplexVector> per_irs;
    per_irs.reserve(static_cast<std::size_t>(geometry_.irs_count()));
    for (int k = 0; k < geometry_.irs_count(); ++k) {
      per_irs.push_back(channel_irs_ue(k, n, geometry_, channel_));
    }
    ue_channels_.push_back(stack_channels(per_irs));
  }
}

EnvState Env::reset(Vec2 start) const {
  if (start.x < 0.0 || start.x > geometry_.area_x || start.y < 0.0 ||
      start.y > geometry_.area_y) {
    throw std::invalid_argument("Env::reset: start position outside the area");
  }
  EnvState s;
  s.x = start.x;
  s.y = start.y;
  s.energy = energy_.energy_budget;
  s.serve_counts.assign(static_cast<std::size_t>(geometry_.ue_count()), 0);
  s.ts = 0;
  return s;
}

Motion Env::apply_motion(const EnvState& state, const Action& action) const {
  Motion m;
  const double tx = state.x + action.distance * std::cos(action.angle);
  const double ty = state.y + action.distance * std::sin(action.angle);
  m.x = std::clamp(tx, 0.0, geometry_.area_x);
  m.y = std::clamp(ty, 0.0, geometry_.area_y);
  m.clamped = (tx != m.x) || (ty != m.y);
  // Energy accounting uses the commanded distance, clamped or not.
  m.velocity = action.distance / energy_.slot_duration;
  return m;
}

std::vector<double> Env::ue_rates(Vec2 uav, const PhaseStrategy& phases) const {
  std::vector<ComplexVector> per_irs;
  per_irs.reserve(static_cast<std::size_t>(geometry_.irs_count()));
  for (int k = 0; k < geometry_.irs_count(); ++k) {
    per_irs.push_back(channel_uav_irs(uav, k, geometry_, channel_));
  }
  const ComplexVector h_ui = stack_channels(per_irs);

  std::vector<double> rates(static_cast<std::size_t>(geometry_.ue_count()));
  for (int n = 0; n < geometry_.ue_count(); ++n) {
    const ComplexVector& h_ie = ue_channels_[static_cast<std::size_t>(n)];
    PhaseVector theta = align_phases(h_ui, h_ie);
    if (phases.quantized) theta = quantize_phases(theta, phases.levels);
    rates[static_cast<std::size_t>(n)] = data_rate(h_ui, h_ie, theta, channel_);
  }
  return rates;
}

StepRecord Env::step(const EnvState& state, const Action& action,
                     const PhaseStrategy& phases) const {
  if (state.energy <= 0.0) {
    throw std::logic_error("Env::step: episode already finished");
  }
  if (state.serve_counts.size() != static_cast<std::size_t>(geometry_.ue_count())) {
    throw std::invalid_argument("Env::step: state does not match this scenario");
  }

  const Motion motion = apply_motion(state, action);

  StepRecord rec;
  rec.next = state;
  rec.next.x = motion.x;
  rec.next.y = motion.y;
  rec.next.energy = state.energy - propulsion_energy(motion.velocity, energy_);
  rec.next.ts = state.ts + 1;
  rec.out_of_bounds = motion.clamped;

  rec.rates = ue_rates({motion.x, motion.y}, phases);
  rec.served = best_ue(rec.rates);
  rec.next.serve_counts[static_cast<std::size_t>(rec.served)] += 1;
  rec.fairness = jain_fairness(rec.next.serve_counts);

  const double rate_term = (reward_.rate_weight / reward_.fairness_weight) *
                           rec.rates[static_cast<std::size_t>(rec.served)];
  rec.reward = rec.fairness + rate_term - (rec.out_of_bounds ? reward_.penalty : 0.0);
  rec.done = rec.next.energy <= 0.0;
  return rec;
}

std::array<double, 3> Env::observe(const EnvState& state) const {
  return {state.x / geometry_.area_x, state.y / geometry_.area_y,
          std::max(state.energy, 0.0) / energy_.energy_budget};
}

}  // namespace uavirs
