#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "uavirs/channel.hpp"

using namespace uavirs;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

ScenarioGeometry example_geometry() {
  ScenarioGeometry g;
  g.uav_altitude = 200.0;
  g.area_x = 600.0;
  g.area_y = 200.0;
  g.irs_positions = {{100, 0, 100}, {300, 0, 100}};
  g.ue_positions = {{100, 50}, {300, 150}};
  g.elements_per_irs = 20;
  return g;
}

ChannelParams example_params() { return ChannelParams{}; }

// Brute-force rate evaluator, deliberately sharing no code with data_rate:
// complex products expanded by hand in long double.
double oracle_rate(const ComplexVector& h_ui, const ComplexVector& h_ie,
                   const PhaseVector& theta, const ChannelParams& p) {
  long double re = 0.0L, im = 0.0L;
  for (std::size_t e = 0; e < h_ui.size(); ++e) {
    const long double ar = h_ie[e].real(), ai = -h_ie[e].imag();  // conjugate
    const long double br = cosl(static_cast<long double>(theta[e]));
    const long double bi = sinl(static_cast<long double>(theta[e]));
    const long double cr = h_ui[e].real(), ci = h_ui[e].imag();
    const long double xr = ar * br - ai * bi;
    const long double xi = ar * bi + ai * br;
    re += xr * cr - xi * ci;
    im += xr * ci + xi * cr;
  }
  const long double snr = static_cast<long double>(p.tx_power) * (re * re + im * im) /
                          static_cast<long double>(p.noise_power);
  return static_cast<double>(log2l(1.0L + snr));
}

ComplexVector random_channel(std::mt19937_64& rng, int length) {
  std::uniform_real_distribution<double> mag(0.1, 2.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  ComplexVector v(static_cast<std::size_t>(length));
  for (auto& e : v) e = std::polar(mag(rng), phase(rng));
  return v;
}

PhaseVector random_phases(std::mt19937_64& rng, int length) {
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  PhaseVector v(static_cast<std::size_t>(length));
  for (double& p : v) p = phase(rng);
  return v;
}

}  // namespace

TEST_CASE("distances match hand-evaluated geometry") {
  ScenarioGeometry g = example_geometry();
  CHECK(dist_uav_irs({10, 10}, 0, g) == doctest::Approx(std::sqrt(18200.0)).epsilon(1e-12));
  CHECK(dist_uav_irs({10, 10}, 0, g) == doctest::Approx(134.90737563232042).epsilon(1e-9));
  CHECK(dist_uav_irs({100, 0}, 0, g) == doctest::Approx(100.0).epsilon(1e-12));

  ScenarioGeometry tri = g;
  tri.irs_positions = {{0, 0, 200}};  // same height as the UAV
  CHECK(dist_uav_irs({3, 4}, 0, tri) == doctest::Approx(5.0).epsilon(1e-12));

  CHECK(dist_irs_ue(0, 0, g) == doctest::Approx(std::sqrt(12500.0)).epsilon(1e-12));
  ScenarioGeometry below = g;
  below.irs_positions = {{0, 0, 100}};
  below.ue_positions = {{0, 0}};
  CHECK(dist_irs_ue(0, 0, below) == doctest::Approx(100.0).epsilon(1e-12));
  ScenarioGeometry sym = g;
  sym.irs_positions = {{300, 200, 100}};
  sym.ue_positions = {{300, 150}};
  CHECK(dist_irs_ue(0, 0, sym) == doctest::Approx(111.80339887498948).epsilon(1e-12));
}

TEST_CASE("UAV-IRS channel: magnitude law and phase progression") {
  ScenarioGeometry g = example_geometry();
  ChannelParams p = example_params();
  const ComplexVector h = channel_uav_irs({10, 10}, 0, g, p);
  REQUIRE(h.size() == 20);

  const double d = std::sqrt(18200.0);
  const double expected_mag = std::sqrt(p.ref_gain) / d;
  CHECK(expected_mag == doctest::Approx(2.3440361546924772e-4).epsilon(1e-9));
  for (const auto& e : h) {
    CHECK(std::abs(e) == doctest::Approx(expected_mag).epsilon(1e-12));
  }

  // Entry 0 is the positive real magnitude; entry m advances by
  // -pi*m*(90/134.907...) with spacing d/lambda = 1/2.
  CHECK(h[0].real() == doctest::Approx(expected_mag).epsilon(1e-12));
  CHECK(h[0].imag() == 0.0);
  const double cosine = 90.0 / d;
  for (int m = 0; m < 20; ++m) {
    const double expected_phase = -kPi * m * cosine;
    const std::complex<double> expected = std::polar(expected_mag, expected_phase);
    CHECK(std::abs(h[static_cast<std::size_t>(m)] - expected) <= 1e-15);
  }

  // UAV sharing the IRS x coordinate: zero arrival cosine, constant vector.
  const ComplexVector flat = channel_uav_irs({100, 50}, 0, g, p);
  for (const auto& e : flat) {
    CHECK(e.real() == doctest::Approx(std::abs(flat[0])).epsilon(1e-12));
    CHECK(e.imag() == 0.0);
  }
}

TEST_CASE("IRS-UE channel: exponent handling") {
  ScenarioGeometry g = example_geometry();
  ChannelParams p = example_params();
  const ComplexVector h = channel_irs_ue(0, 0, g, p);
  const double d = std::sqrt(12500.0);
  const double expected_mag = std::sqrt(p.ref_gain / std::pow(d, p.ue_exponent));
  for (const auto& e : h) {
    CHECK(std::abs(e) == doctest::Approx(expected_mag).epsilon(1e-12));
    // UE shares the IRS x coordinate here, so the whole vector is real.
    CHECK(e.imag() == 0.0);
    CHECK(e.real() > 0.0);
  }

  ChannelParams p2 = p;
  p2.ue_exponent = 2.0;
  const ComplexVector h2 = channel_irs_ue(0, 0, g, p2);
  CHECK(std::abs(h2[0]) == doctest::Approx(std::sqrt(p.ref_gain) / d).epsilon(1e-12));
}

TEST_CASE("stack_channels concatenates in IRS order") {
  std::mt19937_64 rng(7);
  const ComplexVector a = random_channel(rng, 20);
  const ComplexVector b = random_channel(rng, 20);

  CHECK(stack_channels({a}) == a);

  const ComplexVector s = stack_channels({a, b});
  REQUIRE(s.size() == 40);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(s[i] == a[i]);
    CHECK(s[20 + i] == b[i]);
  }

  // round-trip
  const ComplexVector first(s.begin(), s.begin() + 20);
  const ComplexVector second(s.begin() + 20, s.end());
  CHECK(first == a);
  CHECK(second == b);

  CHECK_THROWS_AS(stack_channels({a, random_channel(rng, 19)}), std::invalid_argument);
  CHECK_THROWS_AS(stack_channels({}), std::invalid_argument);
}

TEST_CASE("element_phases maps into [0,2pi) and reconstructs") {
  CHECK(element_phases({{1.0, 0.0}})[0] == 0.0);
  CHECK(element_phases({{0.0, -1.0}})[0] == doctest::Approx(3.0 * kPi / 2.0).epsilon(1e-12));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexVector v = random_channel(rng, 16);
    const PhaseVector w = element_phases(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(w[i] >= 0.0);
      CHECK(w[i] < kTwoPi);
      const std::complex<double> rebuilt = std::polar(std::abs(v[i]), w[i]);
      CHECK(std::abs(rebuilt - v[i]) <= 1e-12 * std::abs(v[i]));
    }
  }

  CHECK_THROWS_AS(element_phases({{0.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("align_phases combines both hops coherently") {
  // already-real channels need no correction
  const ComplexVector real_ui = {{0.5, 0.0}, {0.25, 0.0}};
  const ComplexVector real_ie = {{0.125, 0.0}, {2.0, 0.0}};
  for (double theta : align_phases(real_ui, real_ie)) CHECK(theta == 0.0);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexVector h_ui = random_channel(rng, 8);  // K=2, M=4 stacked
    const ComplexVector h_ie = random_channel(rng, 8);
    const PhaseVector theta = align_phases(h_ui, h_ie);

    // exhaustive complex evaluation of the composite scalar
    std::complex<double> composite(0.0, 0.0);
    double magnitude_bound = 0.0;
    for (std::size_t e = 0; e < h_ui.size(); ++e) {
      composite += std::conj(h_ie[e]) * std::polar(1.0, theta[e]) * h_ui[e];
      magnitude_bound += std::abs(h_ie[e]) * std::abs(h_ui[e]);
    }
    CHECK(std::abs(composite) == doctest::Approx(magnitude_bound).epsilon(1e-9));
    CHECK(std::abs(composite.imag()) <= 1e-9 * magnitude_bound);
  }

  CHECK_THROWS_AS(align_phases(real_ui, random_channel(rng, 3)), std::invalid_argument);
}

TEST_CASE("quantize_phases snaps under the circular metric") {
  const int levels = 12;
  const double step = kTwoPi / levels;  // pi/6

  CHECK(quantize_phases({0.3}, levels)[0] == doctest::Approx(step).epsilon(1e-12));
  // 6.2 is closer to 0 around the wrap (0.083) than to 11*pi/6 (0.440).
  CHECK(quantize_phases({6.2}, levels)[0] == 0.0);
  // grid points are fixed points
  for (int i = 0; i < levels; ++i) {
    CHECK(quantize_phases({step * i}, levels)[0] == step * i);
  }
  // exact midpoint ties break toward the smaller grid index
  CHECK(quantize_phases({step / 2.0}, levels)[0] == 0.0);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const PhaseVector continuous = random_phases(rng, 6);
    const PhaseVector snapped = quantize_phases(continuous, levels);
    for (std::size_t i = 0; i < continuous.size(); ++i) {
      CHECK(circular_distance(continuous[i], snapped[i]) <= kPi / levels + 1e-12);
    }
  }
}

TEST_CASE("data_rate: brute-force oracle agreement on 1000 instances") {
  std::mt19937_64 rng(19);
  ChannelParams p = example_params();
  std::uniform_int_distribution<int> len(2, 24);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = len(rng);
    const ComplexVector h_ui = random_channel(rng, n);
    const ComplexVector h_ie = random_channel(rng, n);
    const PhaseVector theta = random_phases(rng, n);
    const double got = data_rate(h_ui, h_ie, theta, p);
    const double expected = oracle_rate(h_ui, h_ie, theta, p);
    CHECK(got == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("data_rate: closed form under full alignment") {
  ChannelParams p = example_params();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const double a = 3e-4, b = 5e-5;
  ComplexVector h_ui(20), h_ie(20);
  for (int m = 0; m < 20; ++m) {
    h_ui[static_cast<std::size_t>(m)] = std::polar(a, phase(rng));
    h_ie[static_cast<std::size_t>(m)] = std::polar(b, phase(rng));
  }
  const PhaseVector theta = align_phases(h_ui, h_ie);
  const double expected =
      std::log2(1.0 + p.tx_power * std::pow(20.0 * a * b, 2) / p.noise_power);
  CHECK(data_rate(h_ui, h_ie, theta, p) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("data_rate: zero channel, alignment dominance, power monotonicity") {
  ChannelParams p = example_params();
  const ComplexVector zero(4, {0.0, 0.0});
  CHECK(data_rate(zero, zero, PhaseVector(4, 0.0), p) == 0.0);

  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexVector h_ui = random_channel(rng, 10);
    const ComplexVector h_ie = random_channel(rng, 10);
    const double aligned = data_rate(h_ui, h_ie, align_phases(h_ui, h_ie), p);
    for (int k = 0; k < 100; ++k) {
      CHECK(data_rate(h_ui, h_ie, random_phases(rng, 10), p) <= aligned + 1e-12);
    }

    ChannelParams stronger = p;
    stronger.tx_power = 2.0 * p.tx_power;
    const PhaseVector theta = random_phases(rng, 10);
    CHECK(data_rate(h_ui, h_ie, theta, stronger) > data_rate(h_ui, h_ie, theta, p));
  }
}

TEST_CASE("jain_fairness: tabulated values and range") {
  CHECK(jain_fairness({5, 5, 5, 5, 5, 5}) == 1.0);
  CHECK(jain_fairness({10, 0, 0, 0, 0, 0}) == 1.0 / 6.0);
  CHECK(jain_fairness({2, 1, 0}) == 0.6);
  CHECK(jain_fairness({0, 0, 0}) == 0.0);

  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> count(1, 500);
  std::uniform_int_distribution<int> size(1, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    std::vector<long> counts(static_cast<std::size_t>(n));
    for (long& c : counts) c = count(rng);
    const double f = jain_fairness(counts);
    CHECK(f >= 1.0 / n - 1e-12);
    CHECK(f <= 1.0 + 1e-12);

    std::vector<long> shuffled = counts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(jain_fairness(shuffled) == f);
  }
}

TEST_CASE("best_ue: argmax with lowest-index ties") {
  CHECK(best_ue({1.0, 2.0, 0.5}) == 1);
  CHECK(best_ue({3.0, 3.0, 3.0}) == 0);
  CHECK(best_ue({0.25}) == 0);
}
