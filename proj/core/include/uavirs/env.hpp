#pragma once

#include <array>
#include <utility>

#include "uavirs/channel.hpp"

namespace uavirs {

// Rotary-wing propulsion constants and the per-episode energy budget.
struct EnergyModel {
  double blade_power = 79.85;      // profile power constant, W
  double induced_power = 88.63;    // induced hover power constant, W
  double tip_speed = 120.0;        // rotor-blade tip speed, m/s
  double hover_velocity = 4.03;    // mean induced velocity at hover, m/s
  double drag_ratio = 0.6;         // fuselage drag ratio
  double air_density = 1.225;      // kg/m^3
  double rotor_solidity = 0.05;
  double disc_area = 0.503;        // m^2
  double slot_duration = 1.0;      // s per TS
  double energy_budget = 20000.0;  // J available per episode
};

// Objective weights: fairness_weight and rate_weight set the fairness/rate
// trade-off; penalty is charged whenever a move had to be clamped at the
// border.
struct RewardConfig {
  double fairness_weight = 100.0;
  double rate_weight = 1.0;
  double penalty = 1.0;
};

struct Action {
  double angle = 0.0;     // radians in [0, 2*pi)
  double distance = 0.0;  // meters in [0, d_max]
};

struct EnvState {
  double x = 0.0;
  double y = 0.0;
  double energy = 0.0;
  std::vector<long> serve_counts;  // per-UE, since episode start
  long ts = 0;
};

// How reflection phases are chosen each TS: exact alignment, or alignment
// snapped to a finite grid (hardware-limited reflectors).
struct PhaseStrategy {
  bool quantized = false;
  int levels = 0;

  static PhaseStrategy continuous() { return {false, 0}; }
  static PhaseStrategy quantize(int levels) { return {true, levels}; }
};

struct Motion {
  double x = 0.0;
  double y = 0.0;
  bool clamped = false;  // tentative position left the area and was clamped
  double velocity = 0.0;  // commanded distance over slot duration
};

struct StepRecord {
  EnvState next;
  double reward = 0.0;
  std::vector<double> rates;  // per-UE achievable rate this TS
  int served = -1;
  double fairness = 0.0;
  bool out_of_bounds = false;
  bool done = false;
};

// Per-TS propulsion energy at constant speed v (J).
double propulsion_energy(double velocity, const EnergyModel& model);

// Episodic downlink environment. Dynamics are pure functions of the passed
// state, so hypothetical moves can be evaluated without mutating anything;
// IRS-UE channels are fixed by geometry and precomputed once.
class Env {
 public:
  Env(ScenarioGeometry geometry, ChannelParams channel, EnergyModel energy,
      RewardConfig reward);

  EnvState reset(Vec2 start) const;

  StepRecord step(const EnvState& state, const Action& action,
                  const PhaseStrategy& phases) const;

  // Normalized observation: (x/area_x, y/area_y, energy/budget), each in [0,1].
  std::array<double, 3> observe(const EnvState& state) const;

  Motion apply_motion(const EnvState& state, const Action& action) const;

  // Achievable rate of every UE with the UAV at `uav`, phases re-optimized
  // per UE under the given strategy.
  std::vector<double> ue_rates(Vec2 uav, const PhaseStrategy& phases) const;

  const ScenarioGeometry& geometry() const { return geometry_; }
  const ChannelParams& channel_params() const { return channel_; }
  const EnergyModel& energy_model() const { return energy_; }
  const RewardConfig& reward_config() const { return reward_; }

 private:
  ScenarioGeometry geometry_;
  ChannelParams channel_;
  EnergyModel energy_;
  RewardConfig reward_;
  std::vector<ComplexVector> ue_channels_;  // stacked IRS->UE channel per UE
};

}  // namespace uavirs
