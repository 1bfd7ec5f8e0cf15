#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace uavirs {

enum class Activation { relu, tanh, identity };

std::string to_string(Activation a);
Activation parse_activation(const std::string& name);

struct LayerSpec {
  int inputs = 0;
  int outputs = 0;
  Activation activation = Activation::identity;
};

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

enum class StepDirection { descend, ascend };

// Dense layer: weights row-major (outputs x inputs), one bias per output.
struct LayerParams {
  std::vector<double> weights;
  std::vector<double> biases;
};

struct NetworkParams {
  std::vector<LayerSpec> specs;
  std::vector<LayerParams> layers;
  std::vector<LayerParams> moment1;  // Adam accumulators, shaped like layers
  std::vector<LayerParams> moment2;
  std::int64_t adam_steps = 0;
  std::uint64_t init_seed = 0;

  int input_width() const { return specs.empty() ? 0 : specs.front().inputs; }
  int output_width() const { return specs.empty() ? 0 : specs.back().outputs; }
};

struct ForwardCache {
  std::vector<std::vector<double>> activations;      // [0] is the input
  std::vector<std::vector<double>> pre_activations;  // one per layer
};

struct NetworkGradients {
  std::vector<LayerParams> layers;   // dL/dW, dL/db
  std::vector<double> input;         // dL/d(input)
};

// Glorot-uniform weights (|w| <= sqrt(6/(fan_in+fan_out))), zero biases,
// zeroed Adam moments; deterministic per seed.
NetworkParams init_network(std::vector<LayerSpec> specs, std::uint64_t seed);

// Affine + activation composition. Fills `cache` when non-null; never
// mutates the parameters.
std::vector<double> forward(const NetworkParams& net, std::span<const double> input,
                            ForwardCache* cache = nullptr);

// Exact reverse-mode gradients of the scalar whose output-gradient is given,
// including the gradient with respect to the network input.
NetworkGradients backward(const NetworkParams& net, const ForwardCache& cache,
                          std::span<const double> output_gradient);

// Bias-corrected Adam update, descending or ascending the supplied gradient.
void adam_step(NetworkParams& net, const NetworkGradients& grads,
               const AdamConfig& cfg, StepDirection direction);

// target <- tau*source + (1-tau)*target, elementwise over weights and biases.
void soft_update(NetworkParams& target, const NetworkParams& source, double tau);

NetworkGradients zero_gradients(const NetworkParams& net);
void accumulate(NetworkGradients& into, const NetworkGradients& grads);
void scale(NetworkGradients& grads, double factor);

// Text checkpoint: versioned header (format id, layer specs, seed) followed
// by row-major weights and biases at 17 significant digits, which round-trips
// doubles bit-exactly.
void save_network(std::ostream& out, const NetworkParams& net);
NetworkParams load_network(std::istream& in);

}  // namespace uavirs
