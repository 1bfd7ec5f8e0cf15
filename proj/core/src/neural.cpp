#include "uavirs/neural.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

namespace uavirs {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  throw std::logic_error("unknown activation");
}

Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "identity") return Activation::identity;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

namespace {

void check_chain(const std::vector<LayerSpec>& specs) {
  if (specs.empty()) throw std::invalid_argument("network needs at least one layer");
  for (std::size_t l = 0; l < specs.size(); ++l) {
    if (specs[l].inputs < 1 || specs[l].outputs < 1) {
      throw std::invalid_argument("layer widths must be >= 1");
    }
    if (l > 0 && specs[l].inputs != specs[l - 1].outputs) {
      throw std::invalid_argument("consecutive layer widths do not chain");
    }
  }
}

double activate(Activation a, double z) {
  switch (a) {
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::tanh: return std::tanh(z);
    case Activation::identity: return z;
  }
  return z;
}

// Derivative in terms of pre-activation z and activation value y.
double activate_grad(Activation a, double z, double y) {
  switch (a) {
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: return 1.0 - y * y;
    case Activation::identity: return 1.0;
  }
  return 1.0;
}

}  // namespace

NetworkParams init_network(std::vector<LayerSpec> specs, std::uint64_t seed) {
  check_chain(specs);
  NetworkParams net;
  net.specs = std::move(specs);
  net.init_seed = seed;
  std::mt19937_64 rng(seed);
  for (const LayerSpec& spec : net.specs) {
    const std::size_t n_w = static_cast<std::size_t>(spec.inputs) *
                            static_cast<std::size_t>(spec.outputs);
    const double limit = std::sqrt(6.0 / (spec.inputs + spec.outputs));
    std::uniform_real_distribution<double> uniform(-limit, limit);
    LayerParams layer;
    layer.weights.resize(n_w);
    for (double& w : layer.weights) w = uniform(rng);
    layer.biases.assign(static_cast<std::size_t>(spec.outputs), 0.0);
    net.layers.push_back(layer);

    LayerParams zero;
    zero.weights.assign(n_w, 0.0);
    zero.biases.assign(static_cast<std::size_t>(spec.outputs), 0.0);
    net.moment1.push_back(zero);
    net.moment2.push_back(std::move(zero));
  }
  return net;
}

std::vector<double> forward(const NetworkParams& net, std::span<const double> input,
                            ForwardCache* cache) {
  if (static_cast<int>(input.size()) != net.input_width()) {
    throw std::invalid_argument("forward: input width mismatch");
  }
  std::vector<double> x(input.begin(), input.end());
  if (cache) {
    cache->activations.clear();
    cache->pre_activations.clear();
    cache->activations.push_back(x);
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const LayerSpec& spec = net.specs[l];
    const LayerParams& layer = net.layers[l];
    std::vector<double> z(static_cast<std::size_t>(spec.outputs));
    for (int o = 0; o < spec.outputs; ++o) {
      const double* row = layer.weights.data() +
                          static_cast<std::size_t>(o) * static_cast<std::size_t>(spec.inputs);
      double acc = layer.biases[static_cast<std::size_t>(o)];
      for (int i = 0; i < spec.inputs; ++i) acc += row[i] * x[static_cast<std::size_t>(i)];
      z[static_cast<std::size_t>(o)] = acc;
    }
    std::vector<double> y(z.size());
    for (std::size_t o = 0; o < z.size(); ++o) y[o] = activate(spec.activation, z[o]);
    if (cache) {
      cache->pre_activations.push_back(std::move(z));
      cache->activations.push_back(y);
    }
    x = std::move(y);
  }
  return x;
}

NetworkGradients backward(const NetworkParams& net, const ForwardCache& cache,
                          std::span<const double> output_gradient) {
  if (cache.pre_activations.size() != net.layers.size()) {
    throw std::invalid_argument("backward: cache does not match the network");
  }
  if (static_cast<int>(output_gradient.size()) != net.output_width()) {
    throw std::invalid_argument("backward: output gradient width mismatch");
  }
  NetworkGradients grads = zero_gradients(net);
  std::vector<double> dy(output_gradient.begin(), output_gradient.end());
  for (std::size_t l = net.layers.size(); l-- > 0;) {
    const LayerSpec& spec = net.specs[l];
    const LayerParams& layer = net.layers[l];
    const std::vector<double>& z = cache.pre_activations[l];
    const std::vector<double>& y = cache.activations[l + 1];
    const std::vector<double>& x = cache.activations[l];

    std::vector<double> dz(static_cast<std::size_t>(spec.outputs));
    for (int o = 0; o < spec.outputs; ++o) {
      const std::size_t so = static_cast<std::size_t>(o);
      dz[so] = dy[so] * activate_grad(spec.activation, z[so], y[so]);
    }

    LayerParams& g = grads.layers[l];
    std::vector<double> dx(static_cast<std::size_t>(spec.inputs), 0.0);
    for (int o = 0; o < spec.outputs; ++o) {
      const std::size_t so = static_cast<std::size_t>(o);
      double* grow = g.weights.data() + so * static_cast<std::size_t>(spec.inputs);
      const double* wrow = layer.weights.data() + so * static_cast<std::size_t>(spec.inputs);
      g.biases[so] = dz[so];
      for (int i = 0; i < spec.inputs; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        grow[si] = dz[so] * x[si];
        dx[si] += wrow[si] * dz[so];
      }
    }
    dy = std::move(dx);
  }
  grads.input = std::move(dy);
  return grads;
}

NetworkGradients zero_gradients(const NetworkParams& net) {
  NetworkGradients g;
  g.layers.reserve(net.layers.size());
  for (const LayerParams& layer : net.layers) {
    LayerParams zero;
    zero.weights.assign(layer.weights.size(), 0.0);
    zero.biases.assign(layer.biases.size(), 0.0);
    g.layers.push_back(std::move(zero));
  }
  g.input.assign(static_cast<std::size_t>(net.input_width()), 0.0);
  return g;
}

void accumulate(NetworkGradients& into, const NetworkGradients& grads) {
  if (into.layers.size() != grads.layers.size()) {
    throw std::invalid_argument("accumulate: gradient shapes differ");
  }
  for (std::size_t l = 0; l < into.layers.size(); ++l) {
    for (std::size_t i = 0; i < into.layers[l].weights.size(); ++i) {
      into.layers[l].weights[i] += grads.layers[l].weights[i];
    }
    for (std::size_t i = 0; i < into.layers[l].biases.size(); ++i) {
      into.layers[l].biases[i] += grads.layers[l].biases[i];
    }
  }
  if (into.input.size() == grads.input.size()) {
    for (std::size_t i = 0; i < into.input.size(); ++i) into.input[i] += grads.input[i];
  }
}

void scale(NetworkGradients& grads, double factor) {
  for (LayerParams& layer : grads.layers) {
    for (double& w : layer.weights) w *= factor;
    for (double& b : layer.biases) b *= factor;
  }
  for (double& v : grads.input) v *= factor;
}

namespace {

void adam_update(std::vector<double>& param, std::vector<double>& m1,
                 std::vector<double>& m2, const std::vector<double>& grad,
                 const AdamConfig& cfg, double sign, double bias1, double bias2) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    if (!std::isfinite(g)) throw std::invalid_argument("adam_step: non-finite gradient");
    m1[i] = cfg.beta1 * m1[i] + (1.0 - cfg.beta1) * g;
    m2[i] = cfg.beta2 * m2[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = m1[i] / bias1;
    const double v_hat = m2[i] / bias2;
    param[i] += sign * cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

}  // namespace

void adam_step(NetworkParams& net, const NetworkGradients& grads,
               const AdamConfig& cfg, StepDirection direction) {
  if (grads.layers.size() != net.layers.size()) {
    throw std::invalid_argument("adam_step: gradient shapes differ");
  }
  net.adam_steps += 1;
  const double bias1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(net.adam_steps));
  const double bias2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(net.adam_steps));
  const double sign = direction == StepDirection::descend ? -1.0 : 1.0;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    adam_update(net.layers[l].weights, net.moment1[l].weights, net.moment2[l].weights,
                grads.layers[l].weights, cfg, sign, bias1, bias2);
    adam_update(net.layers[l].biases, net.moment1[l].biases, net.moment2[l].biases,
                grads.layers[l].biases, cfg, sign, bias1, bias2);
  }
}

void soft_update(NetworkParams& target, const NetworkParams& source, double tau) {
  if (tau <= 0.0 || tau > 1.0) throw std::invalid_argument("soft_update: tau outside (0,1]");
  if (target.layers.size() != source.layers.size()) {
    throw std::invalid_argument("soft_update: network shapes differ");
  }
  for (std::size_t l = 0; l < target.layers.size(); ++l) {
    if (target.layers[l].weights.size() != source.layers[l].weights.size() ||
        target.layers[l].biases.size() != source.layers[l].biases.size()) {
      throw std::invalid_argument("soft_update: layer shapes differ");
    }
    for (std::size_t i = 0; i < target.layers[l].weights.size(); ++i) {
      target.layers[l].weights[i] =
          tau * source.layers[l].weights[i] + (1.0 - tau) * target.layers[l].weights[i];
    }
    for (std::size_t i = 0; i < target.layers[l].biases.size(); ++i) {
      target.layers[l].biases[i] =
          tau * source.layers[l].biases[i] + (1.0 - tau) * target.layers[l].biases[i];
    }
  }
}

namespace {

constexpr const char* kNetFormatId = "uavirs-net";
constexpr int kNetFormatVersion = 1;

void write_values(std::ostream& out, const std::vector<double>& values) {
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    out << buf << (i + 1 == values.size() ? "" : " ");
  }
  out << "\n";
}

void read_values(std::istream& in, std::vector<double>& values, std::size_t count) {
  values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!(in >> values[i])) throw std::runtime_error("network checkpoint: truncated values");
  }
}

}  // namespace

void save_network(std::ostream& out, const NetworkParams& net) {
  out << kNetFormatId << " " << kNetFormatVersion << "\n";
  out << "seed " << net.init_seed << "\n";
  out << "layers " << net.specs.size() << "\n";
  for (const LayerSpec& spec : net.specs) {
    out << "layer " << spec.inputs << " " << spec.outputs << " "
        << to_string(spec.activation) << "\n";
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const int inputs = net.specs[l].inputs;
    const int outputs = net.specs[l].outputs;
    for (int o = 0; o < outputs; ++o) {
      const std::size_t begin = static_cast<std::size_t>(o) * static_cast<std::size_t>(inputs);
      std::vector<double> row(net.layers[l].weights.begin() + static_cast<long>(begin),
                              net.layers[l].weights.begin() + static_cast<long>(begin) +
                                  inputs);
      write_values(out, row);
    }
    write_values(out, net.layers[l].biases);
  }
  if (!out) throw std::runtime_error("network checkpoint: write failed");
}

NetworkParams load_network(std::istream& in) {
  std::string id;
  int version = 0;
  if (!(in >> id >> version) || id != kNetFormatId || version != kNetFormatVersion) {
    throw std::runtime_error("network checkpoint: bad format header");
  }
  std::string word;
  std::uint64_t seed = 0;
  std::size_t n_layers = 0;
  if (!(in >> word >> seed) || word != "seed") {
    throw std::runtime_error("network checkpoint: missing seed");
  }
  if (!(in >> word >> n_layers) || word != "layers") {
    throw std::runtime_error("network checkpoint: missing layer count");
  }
  std::vector<LayerSpec> specs(n_layers);
  for (LayerSpec& spec : specs) {
    std::string activation;
    if (!(in >> word >> spec.inputs >> spec.outputs >> activation) || word != "layer") {
      throw std::runtime_error("network checkpoint: bad layer spec");
    }
    spec.activation = parse_activation(activation);
  }
  NetworkParams net = init_network(std::move(specs), seed);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    read_values(in, net.layers[l].weights,
                static_cast<std::size_t>(net.specs[l].inputs) *
                    static_cast<std::size_t>(net.specs[l].outputs));
    read_values(in, net.layers[l].biases, static_cast<std::size_t>(net.specs[l].outputs));
  }
  return net;
}

}  // namespace uavirs
