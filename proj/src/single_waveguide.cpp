#include "pasec/single_waveguide.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pasec {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Ascending-coefficient helpers for the tiny polynomials built below.
template <std::size_t N, std::size_t M>
std::array<double, N + M - 1> conv(const std::array<double, N>& a,
                                   const std::array<double, M>& b) {
  std::array<double, N + M - 1> out{};
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < M; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

double range_sq(const Position& user, double pa_x, double height) {
  const double dx = pa_x - user.x;
  const double dz = height - user.z;
  return dx * dx + user.y * user.y + dz * dz;
}

}  // namespace

double bob_range_sq(const ScalarScenario& scen, double pa_x) {
  return range_sq(scen.bob, pa_x, scen.params.height);
}

double eve_range_sq(const ScalarScenario& scen, double pa_x) {
  return range_sq(scen.eve, pa_x, scen.params.height);
}

double scalar_secrecy_rate(double w2, double rm, double pa_x,
                           const ScalarScenario& scen) {
  const auto& p = scen.params;
  // Effective denominators: range^2 plus the noise-normalized jamming power.
  const double gb = bob_range_sq(scen, pa_x) + p.path_gain * rm / p.noise_bob;
  const double ge = eve_range_sq(scen, pa_x) + p.path_gain * rm / p.noise_eve;
  const double k1b = w2 * p.path_gain / p.noise_bob;
  const double k1e = w2 * p.path_gain / p.noise_eve;
  return (std::log1p(k1b / gb) - std::log1p(k1e / ge)) / kLn2;
}

std::vector<double> quartic_position_candidates(double w2, double rm,
                                                const ScalarScenario& scen,
                                                QuarticWorkspace* ws) {
  const auto& p = scen.params;
  const double k1b = w2 * p.path_gain / p.noise_bob;
  const double k1e = w2 * p.path_gain / p.noise_eve;
  const double hb = p.height - scen.bob.z;
  const double he = p.height - scen.eve.z;
  const double k2 = scen.bob.x * scen.bob.x + scen.bob.y * scen.bob.y + hb * hb +
                    p.path_gain * rm / p.noise_bob;
  const double k3 = scen.eve.x * scen.eve.x + scen.eve.y * scen.eve.y + he * he +
                    p.path_gain * rm / p.noise_eve;

  // Stationarity of the rate difference in x:
  //   k1e (x - x_e) Gb (Gb + k1b) = k1b (x - x_b) Ge (Ge + k1e)
  // with Gb = x^2 - 2 x_b x + k2 and Ge = x^2 - 2 x_e x + k3.  Degree 5 in
  // general; the quintic term cancels exactly for equal receiver noise.
  const std::array<double, 3> gb = {k2, -2.0 * scen.bob.x, 1.0};
  const std::array<double, 3> ge = {k3, -2.0 * scen.eve.x, 1.0};
  std::array<double, 5> termb = conv(gb, gb);
  std::array<double, 5> terme = conv(ge, ge);
  for (std::size_t i = 0; i < 3; ++i) {
    termb[i] += k1b * gb[i];
    terme[i] += k1e * ge[i];
  }
  const std::array<double, 2> linb = {-scen.eve.x, 1.0};
  const std::array<double, 2> line = {-scen.bob.x, 1.0};
  const auto lhs = conv(linb, termb);
  const auto rhs = conv(line, terme);
  std::array<double, 6> coeffs{};
  for (std::size_t i = 0; i < 6; ++i) coeffs[i] = k1e * lhs[i] - k1b * rhs[i];

  const double x_scale = std::max({p.region_side, std::abs(scen.bob.x),
                                   std::abs(scen.eve.x), 1.0});
  FerrariIntermediates ferrari;
  std::vector<double> roots = real_roots_closed_form(coeffs, x_scale, &ferrari);

  // Reject alleged roots whose residual is out of line with the coefficient
  // magnitudes at that point.
  std::vector<double> out;
  for (double r : roots) {
    double mag = 0.0, pw = 1.0;
    for (double c : coeffs) {
      mag += std::abs(c) * pw;
      pw *= std::abs(r) > 1.0 ? std::abs(r) : 1.0;
    }
    if (std::abs(polynomial_value(coeffs, r)) <= 1e-7 * mag) out.push_back(r);
  }

  if (ws) {
    ws->k1_bob = k1b;
    ws->k1_eve = k1e;
    ws->k2 = k2;
    ws->k3 = k3;
    ws->coeffs = coeffs;
    int degree = 5;
    while (degree > 0 && coeffs[degree] == 0.0) --degree;
    ws->degree = degree;
    ws->ferrari = ferrari;
  }
  return out;
}

double optimal_position_single(double w2, double rm, const ScalarScenario& scen) {
  const double side = scen.params.region_side;
  std::vector<double> candidates = {0.0, side};
  for (double r : quartic_position_candidates(w2, rm, scen)) {
    if (r >= 0.0 && r <= side) candidates.push_back(r);
  }
  std::sort(candidates.begin(), candidates.end());
  double best_x = candidates.front();
  double best_sr = scalar_secrecy_rate(w2, rm, best_x, scen);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double sr = scalar_secrecy_rate(w2, rm, candidates[i], scen);
    if (sr > best_sr) {
      best_sr = sr;
      best_x = candidates[i];
    }
  }
  return best_x;
}

double sr_closed_form(double rm, double pa_x, const ScalarScenario& scen) {
  const auto& p = scen.params;
  const double budget = scen.power;
  if (rm < -1e-12 * budget || rm > budget * (1.0 + 1e-12)) {
    throw std::domain_error("sr_closed_form: noise share outside [0, P]");
  }
  const double r = std::clamp(rm, 0.0, budget);
  const double sb = bob_range_sq(scen, pa_x) * p.noise_bob;
  const double se = eve_range_sq(scen, pa_x) * p.noise_eve;
  const double eta = p.path_gain;
  // Rate ratio with the full budget split as (P - rm, rm).
  const double num = (eta * budget + sb) * (eta * r + se);
  const double den = (eta * r + sb) * (eta * budget + se);
  return std::log2(num / den);
}

std::pair<double, double> optimal_power_split(double pa_x, const ScalarScenario& scen) {
  const auto& p = scen.params;
  const double sb = bob_range_sq(scen, pa_x) * p.noise_bob;
  const double se = eve_range_sq(scen, pa_x) * p.noise_eve;
  // The rate difference is monotone in the noise share with the sign of
  // sb - se, so the split lands on an endpoint; ties keep the beam.
  if (sb <= se) return {scen.power, 0.0};
  return {0.0, scen.power};
}

SingleSolveResult solve_single(const ScalarScenario& scen, double tol,
                               int max_iters) {
  const auto& p = scen.params;
  if (p.num_waveguides != 1) {
    throw std::invalid_argument("solve_single: scenario must have one waveguide");
  }
  if (!(scen.power > 0.0)) {
    throw std::invalid_argument("solve_single: transmit power must be positive");
  }

  double x = std::clamp(scen.bob.x, 0.0, p.region_side);
  double w2 = scen.power;
  double rm = 0.0;
  double sr = scalar_secrecy_rate(w2, rm, x, scen);

  SingleSolveResult res;
  res.trace.push_back({"init", sr});

  for (int iter = 1; iter <= max_iters; ++iter) {
    const double sr_round_start = sr;

    const double x_new = optimal_position_single(w2, rm, scen);
    const double sr_pos = scalar_secrecy_rate(w2, rm, x_new, scen);
    if (sr_pos > sr) {
      x = x_new;
      sr = sr_pos;
    }
    res.trace.push_back({"position", sr});

    const auto [w2_new, rm_new] = optimal_power_split(x, scen);
    const double sr_split = scalar_secrecy_rate(w2_new, rm_new, x, scen);
    if (sr_split > sr) {
      w2 = w2_new;
      rm = rm_new;
      sr = sr_split;
    }
    res.trace.push_back({"power-split", sr});

    res.iterations = iter;
    if (sr - sr_round_start <= tol) {
      res.converged = true;
      break;
    }
  }

  res.state.beam_cov = Eigen::MatrixXcd::Constant(1, 1, w2);
  res.state.noise_cov = Eigen::MatrixXcd::Constant(1, 1, rm);
  res.state.pa_x = {x};
  const WaveguideLayout layout = waveguide_layout(p);
  const Eigen::VectorXcd h_bob = channel_vector(scen.bob, res.state.pa_x, layout, p);
  const Eigen::VectorXcd h_eve = channel_vector(scen.eve, res.state.pa_x, layout, p);
  res.rates = secrecy_rate(h_bob, h_eve, res.state, p);
  return res;
}

}  // namespace pasec
