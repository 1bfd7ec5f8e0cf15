#include "uavirs/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavirs {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_angle(double radians) {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // fmod rounding can land exactly on 2*pi
  return r;
}

double circular_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

double dist_uav_irs(Vec2 uav, int k, const ScenarioGeometry& geom) {
  const Vec3& irs = geom.irs_positions.at(static_cast<std::size_t>(k));
  const double dx = uav.x - irs.x;
  const double dy = uav.y - irs.y;
  const double dz = geom.uav_altitude - irs.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double dist_irs_ue(int k, int n, const ScenarioGeometry& geom) {
  const Vec3& irs = geom.irs_positions.at(static_cast<std::size_t>(k));
  const Vec2& ue = geom.ue_positions.at(static_cast<std::size_t>(n));
  const double dx = irs.x - ue.x;
  const double dy = irs.y - ue.y;
  return std::sqrt(dx * dx + dy * dy + irs.z * irs.z);
}

namespace {

// Shared array-response form of both hops: constant magnitude, linear phase
// progression across the M elements.
ComplexVector array_response(double magnitude, double aoa_cosine,
                             double spacing_ratio, int elements) {
  ComplexVector h(static_cast<std::size_t>(elements));
  const double step = -kTwoPi * spacing_ratio * aoa_cosine;
  for (int m = 0; m < elements; ++m) {
    h[static_cast<std::size_t>(m)] = std::polar(magnitude, step * m);
  }
  return h;
}

}  // namespace

ComplexVector channel_uav_irs(Vec2 uav, int k, const ScenarioGeometry& geom,
                              const ChannelParams& params) {
  const Vec3& irs = geom.irs_positions.at(static_cast<std::size_t>(k));
  const double d = dist_uav_irs(uav, k, geom);
  const double magnitude = std::sqrt(params.ref_gain / (d * d));
  const double aoa_cosine = (irs.x - uav.x) / d;
  return array_response(magnitude, aoa_cosine, params.spacing_ratio,
                        geom.elements_per_irs);
}

ComplexVector channel_irs_ue(int k, int n, const ScenarioGeometry& geom,
                             const ChannelParams& params) {
  const Vec3& irs = geom.irs_positions.at(static_cast<std::size_t>(k));
  const Vec2& ue = geom.ue_positions.at(static_cast<std::size_t>(n));
  const double d = dist_irs_ue(k, n, geom);
  const double magnitude = std::sqrt(params.ref_gain / std::pow(d, params.ue_exponent));
  const double aod_cosine = (irs.x - ue.x) / d;
  return array_response(magnitude, aod_cosine, params.spacing_ratio,
                        geom.elements_per_irs);
}

ComplexVector stack_channels(const std::vector<ComplexVector>& per_irs) {
  if (per_irs.empty()) throw std::invalid_argument("stack_channels: no channels given");
  const std::size_t m = per_irs.front().size();
  ComplexVector out;
  out.reserve(m * per_irs.size());
  for (const ComplexVector& h : per_irs) {
    if (h.size() != m) {
      throw std::invalid_argument("stack_channels: per-IRS lengths differ");
    }
    out.insert(out.end(), h.begin(), h.end());
  }
  return out;
}

PhaseVector element_phases(const ComplexVector& v) {
  PhaseVector phases(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == std::complex<double>(0.0, 0.0)) {
      throw std::invalid_argument("element_phases: zero-magnitude entry");
    }
    phases[i] = wrap_angle(std::arg(v[i]));
  }
  return phases;
}

PhaseVector align_phases(const ComplexVector& h_ui, const ComplexVector& h_ie) {
  if (h_ui.size() != h_ie.size()) {
    throw std::invalid_argument("align_phases: channel lengths differ");
  }
  const PhaseVector ui = element_phases(h_ui);
  const PhaseVector ie = element_phases(h_ie);
  PhaseVector theta(ui.size());
  for (std::size_t e = 0; e < ui.size(); ++e) {
    // conj(h_ie)*e^{j*theta}*h_ui has argument theta + ui - ie; zeroing it
    // makes every element of the reflected sum add up in phase.
    theta[e] = wrap_angle(ie[e] - ui[e]);
  }
  return theta;
}

PhaseVector quantize_phases(const PhaseVector& continuous, int levels) {
  if (levels < 1) throw std::invalid_argument("quantize_phases: levels must be >= 1");
  const double step = kTwoPi / levels;
  PhaseVector out(continuous.size());
  for (std::size_t e = 0; e < continuous.size(); ++e) {
    int best = 0;
    double best_dist = circular_distance(continuous[e], 0.0);
    for (int i = 1; i < levels; ++i) {
      const double d = circular_distance(continuous[e], step * i);
      if (d < best_dist) {  // strict: ties keep the smaller grid index
        best = i;
        best_dist = d;
      }
    }
    out[e] = step * best;
  }
  return out;
}

double data_rate(const ComplexVector& h_ui, const ComplexVector& h_ie,
                 const PhaseVector& theta, const ChannelParams& params) {
  if (h_ui.size() != h_ie.size() || h_ui.size() != theta.size()) {
    throw std::invalid_argument("data_rate: vector lengths differ");
  }
  std::complex<double> composite(0.0, 0.0);
  for (std::size_t e = 0; e < h_ui.size(); ++e) {
    composite += std::conj(h_ie[e]) * std::polar(1.0, theta[e]) * h_ui[e];
  }
  const double snr = params.tx_power * std::norm(composite) / params.noise_power;
  return std::log2(1.0 + snr);
}

double jain_fairness(const std::vector<long>& serve_counts) {
  if (serve_counts.empty()) throw std::invalid_argument("jain_fairness: empty counts");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long c : serve_counts) {
    sum += static_cast<double>(c);
    sum_sq += static_cast<double>(c) * static_cast<double>(c);
  }
  if (sum_sq == 0.0) return 0.0;
  return sum * sum / (static_cast<double>(serve_counts.size()) * sum_sq);
}

int best_ue(const std::vector<double>& rates) {
  if (rates.empty()) throw std::invalid_argument("best_ue: empty rates");
  int best = 0;
  for (int n = 1; n < static_cast<int>(rates.size()); ++n) {
    if (rates[static_cast<std::size_t>(n)] > rates[static_cast<std::size_t>(best)]) {
      best = n;
    }
  }
  return best;
}

}  // namespace uavirs
