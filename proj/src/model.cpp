#include "pasec/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pasec {

double distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

SystemParams make_params(double carrier_hz, double n_eff, double height_m,
                         double region_side_m, int num_waveguides,
                         double noise_bob_dbm, double noise_eve_dbm) {
  if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz)) {
    throw std::invalid_argument("make_params: carrier frequency must be positive");
  }
  if (!(n_eff >= 1.0) || !std::isfinite(n_eff)) {
    throw std::invalid_argument("make_params: refractive index must be >= 1");
  }
  if (!(height_m > 0.0) || !(region_side_m > 0.0)) {
    throw std::invalid_argument("make_params: geometry must be positive");
  }
  if (num_waveguides < 1) {
    throw std::invalid_argument("make_params: need at least one waveguide");
  }
  if (!std::isfinite(noise_bob_dbm) || !std::isfinite(noise_eve_dbm)) {
    throw std::invalid_argument("make_params: noise must be finite");
  }

  SystemParams p;
  p.carrier_hz = carrier_hz;
  p.wavelength = kSpeedOfLight / carrier_hz;
  p.n_eff = n_eff;
  p.guided_wavelength = p.wavelength / n_eff;
  const double q = p.wavelength / (4.0 * std::numbers::pi);
  p.path_gain = q * q;
  p.height = height_m;
  p.region_side = region_side_m;
  p.num_waveguides = num_waveguides;
  p.noise_bob = dbm_to_linear(noise_bob_dbm);
  p.noise_eve = dbm_to_linear(noise_eve_dbm);
  return p;
}

WaveguideLayout waveguide_layout(const SystemParams& params, double feed_x) {
  if (feed_x < 0.0 || feed_x > params.region_side) {
    throw std::invalid_argument("waveguide_layout: feed_x outside [0, D]");
  }
  WaveguideLayout layout;
  layout.feed_x = feed_x;
  layout.height = params.height;
  layout.y_coords.resize(params.num_waveguides);
  for (int n = 0; n < params.num_waveguides; ++n) {
    layout.y_coords[n] = n * params.region_side / params.num_waveguides;
  }
  return layout;
}

Position waveguide_point(const WaveguideLayout& layout, int n, double x) {
  return {x, layout.y_coords.at(n), layout.height};
}

Position feed_point(const WaveguideLayout& layout, int n) {
  return waveguide_point(layout, n, layout.feed_x);
}

std::complex<double> channel_coeff(const Position& user, const Position& pa,
                                   const Position& feed, const SystemParams& params) {
  const double r = distance(user, pa);
  if (r <= 0.0) {
    throw std::domain_error("channel_coeff: user coincides with the element");
  }
  const double guided = distance(feed, pa);
  const double two_pi = 2.0 * std::numbers::pi;
  const double phase =
      -two_pi * (r / params.wavelength + guided / params.guided_wavelength);
  return std::sqrt(params.path_gain) / r * std::polar(1.0, phase);
}

Eigen::VectorXcd channel_vector(const Position& user, std::span<const double> pa_x,
                                const WaveguideLayout& layout,
                                const SystemParams& params) {
  if (static_cast<int>(pa_x.size()) != params.num_waveguides ||
      pa_x.size() != layout.y_coords.size()) {
    throw std::invalid_argument("channel_vector: one element position per waveguide");
  }
  Eigen::VectorXcd h(params.num_waveguides);
  for (int n = 0; n < params.num_waveguides; ++n) {
    h(n) = channel_coeff(user, waveguide_point(layout, n, pa_x[n]),
                         feed_point(layout, n), params);
  }
  return h;
}

}  // namespace pasec
