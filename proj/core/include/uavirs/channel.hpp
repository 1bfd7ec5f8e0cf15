#pragma once

#include <complex>
#include <vector>

namespace uavirs {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Static scene layout: service area, UAV altitude, IRS and UE placement.
struct ScenarioGeometry {
  double uav_altitude = 200.0;  // fixed flight altitude, m
  double area_x = 600.0;        // side lengths of the service rectangle, m
  double area_y = 200.0;
  std::vector<Vec3> irs_positions;  // wall-mounted reflector arrays
  std::vector<Vec2> ue_positions;   // ground users (height 0)
  int elements_per_irs = 20;

  int irs_count() const { return static_cast<int>(irs_positions.size()); }
  int ue_count() const { return static_cast<int>(ue_positions.size()); }
};

struct ChannelParams {
  double ref_gain = 1e-3;      // path gain at 1 m, linear power
  double ue_exponent = 2.8;    // path-loss exponent of the IRS-UE hop
  double spacing_ratio = 0.5;  // element spacing over carrier wavelength
  double noise_power = 1e-10;  // W
  double tx_power = 0.01;      // W
};

using ComplexVector = std::vector<std::complex<double>>;

// Diagonal of the reflection matrix: one phase per element, radians in
// [0, 2*pi), stacked in IRS order to match stack_channels().
using PhaseVector = std::vector<double>;

// Maps any angle into [0, 2*pi).
double wrap_angle(double radians);

// Shorter way around the circle between two angles, in [0, pi].
double circular_distance(double a, double b);

// 3-D UAV-to-IRS distance; the UAV flies at geom.uav_altitude.
double dist_uav_irs(Vec2 uav, int k, const ScenarioGeometry& geom);

// IRS-to-UE distance; UEs sit at ground level.
double dist_irs_ue(int k, int n, const ScenarioGeometry& geom);

// Line-of-sight array-response channel of one UAV->IRS hop. Entry m is
// sqrt(ref_gain)/d * exp(-j*2*pi*spacing_ratio*m*phi) where phi is the
// x-offset over the 3-D distance (planar cosine approximation).
ComplexVector channel_uav_irs(Vec2 uav, int k, const ScenarioGeometry& geom,
                              const ChannelParams& params);

// Same for the IRS->UE hop, with the UE path-loss exponent.
ComplexVector channel_irs_ue(int k, int n, const ScenarioGeometry& geom,
                             const ChannelParams& params);

// Concatenates per-IRS channels into one M*K vector, IRS order preserved.
ComplexVector stack_channels(const std::vector<ComplexVector>& per_irs);

// Per-entry argument mapped into [0, 2*pi). Throws on zero entries.
PhaseVector element_phases(const ComplexVector& v);

// Reflection phases that combine both hops coherently: every term of the
// composite sum conj(h_ie[e])*exp(j*theta[e])*h_ui[e] becomes real positive,
// so its magnitude reaches the upper bound sum(|h_ie|*|h_ui|).
PhaseVector align_phases(const ComplexVector& h_ui, const ComplexVector& h_ie);

// Snaps each phase to the nearest of {2*pi*i/levels} under circular distance;
// ties go to the smaller grid index.
PhaseVector quantize_phases(const PhaseVector& continuous, int levels);

// Achievable spectral efficiency, bits/s/Hz:
// log2(1 + tx_power * |sum_e conj(h_ie[e])*exp(j*theta[e])*h_ui[e]|^2 / noise).
double data_rate(const ComplexVector& h_ui, const ComplexVector& h_ie,
                 const PhaseVector& theta, const ChannelParams& params);

// Jain index over per-UE service counts: (sum c)^2 / (N * sum c^2).
// All-zero counts (nobody served yet) are defined as 0.
double jain_fairness(const std::vector<long>& serve_counts);

// Index of the served UE: argmax rate, lowest index on ties.
int best_ue(const std::vector<double>& rates);

}  // namespace uavirs
