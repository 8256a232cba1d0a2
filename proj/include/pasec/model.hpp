#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pasec/units.hpp"

namespace pasec {

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Position& a, const Position& b);

// Frequency-derived quantities are computed once in make_params and treated as
// read-only afterwards.  Noise powers are linear (mW).
struct SystemParams {
  double carrier_hz = 0.0;
  double wavelength = 0.0;         // free-space, m
  double guided_wavelength = 0.0;  // wavelength / n_eff, m
  double n_eff = 0.0;
  double path_gain = 0.0;          // (wavelength / 4 pi)^2, m^2
  double height = 0.0;             // antenna height d, m
  double region_side = 0.0;        // service region side D, m
  int num_waveguides = 0;
  double noise_bob = 0.0;  // mW
  double noise_eve = 0.0;  // mW
};

// Throws std::invalid_argument on non-finite or non-positive physical inputs.
SystemParams make_params(double carrier_hz, double n_eff, double height_m,
                         double region_side_m, int num_waveguides,
                         double noise_bob_dbm, double noise_eve_dbm);

// Waveguide n (0-based) runs parallel to the x axis at y = n * D / N, height d.
// The feed point sits at x = feed_x on every waveguide.
struct WaveguideLayout {
  std::vector<double> y_coords;
  double feed_x = 0.0;
  double height = 0.0;
};

WaveguideLayout waveguide_layout(const SystemParams& params, double feed_x = 0.0);

Position waveguide_point(const WaveguideLayout& layout, int n, double x);
Position feed_point(const WaveguideLayout& layout, int n);

// Narrowband line-of-sight coefficient between a radiating element at `pa` and
// `user`, including the guided phase accumulated from `feed` to `pa`.
// Throws std::domain_error when user and element coincide.
std::complex<double> channel_coeff(const Position& user, const Position& pa,
                                   const Position& feed, const SystemParams& params);

// Stacks channel_coeff over all waveguides; pa_x[n] is the element position on
// waveguide n.  Requires pa_x.size() == params.num_waveguides.
Eigen::VectorXcd channel_vector(const Position& user, std::span<const double> pa_x,
                                const WaveguideLayout& layout,
                                const SystemParams& params);

// A downlink instance: one legitimate user, one eavesdropper.
struct Scenario {
  Position bob;
  Position eve;
  SystemParams params;
};

}  // namespace pasec
