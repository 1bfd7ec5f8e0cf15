#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavirs/agents.hpp"
#include "uavirs/env.hpp"

namespace uavirs {

enum class Algo { dqn, ddpg, greedy, random };

Algo parse_algo(const std::string& name);
std::string to_string(Algo algo);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One experiment: scenario, channel, energy, reward, discretization and
// training hyperparameters, plus run control. Values are stored in linear
// units; dB/dBm keys are converted when a file is loaded.
struct ExperimentConfig {
  // scenario
  int K = 6;  // number of IRSs
  int N = 6;  // number of UEs
  int M = 20;  // reflecting elements per IRS
  double X_max = 600.0;
  double Y_max = 200.0;
  double X_U0 = 10.0;
  double Y_U0 = 10.0;
  double H_U = 200.0;
  std::vector<Vec3> irs_positions;
  std::vector<Vec2> ue_positions;

  // channel
  double alpha = 1e-3;      // reference path gain, linear
  double beta = 2.8;        // IRS-UE path-loss exponent
  double d_over_lambda = 0.5;
  double sigma2 = 1e-10;    // noise power, W
  double P = 0.01;          // transmit power, W

  // motion and energy
  double T_d = 1.0;
  double d_max = 40.0;
  double U_r = 120.0;
  double V_h = 4.03;
  double d_0 = 0.6;
  double rho_a = 1.225;
  double z = 0.05;
  double A = 0.503;
  double P_s = 79.85;
  double P_m = 88.63;
  double e_max = 20000.0;

  // reward
  double k_i = 100.0;
  double k_q = 1.0;
  double p = 1.0;

  // discretization
  int N_mu = 6;
  int N_d = 3;
  int N_I = 12;

  // training
  Algo algo = Algo::dqn;
  int N_eps = 10000;
  double epsilon = 0.9;  // exploit probability
  double gamma = 0.99;
  double N_prime = 1.3;
  double eta = 0.9995;
  double tau = 0.01;
  int batch = 128;
  long m_max = 200000;
  std::vector<int> dqn_hidden = {400, 300, 64};
  std::vector<int> ddpg_hidden = {400, 300, 256, 128};
  double lr_dqn = 1e-5;
  double lr_actor = 1e-4;
  double lr_critic = 2e-4;
  int target_period = 200;

  // run control
  std::uint64_t seed = 1;
  std::string out_dir = "run";
  int checkpoint_interval = 0;  // episodes between checkpoints; 0 = final only
  int smooth_window = 100;

  void validate() const;  // throws ConfigError naming the offending key

  ScenarioGeometry geometry() const;
  ChannelParams channel() const;
  EnergyModel energy() const;
  RewardConfig reward() const;

  // Quantized alignment for the discrete-action policies, exact alignment
  // for the continuous one.
  PhaseStrategy phase_strategy() const;
};

// Full-scale defaults with the published 6- or 3-IRS layout.
ExperimentConfig table2_preset(int irs_count = 6);

// Small configuration that trains in minutes on one core; used by the
// acceptance suite.
ExperimentConfig desk_preset();

// Flat "key = value" file with '#' comments. Unknown keys are rejected;
// missing keys keep the full-scale preset defaults.
ExperimentConfig load_config(const std::filesystem::path& path);

// Applies one assignment to cfg; throws ConfigError on unknown keys or
// unparsable values.
void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

}  // namespace uavirs
