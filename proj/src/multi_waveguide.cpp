#include "pasec/multi_waveguide.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pasec/rng.hpp"

namespace pasec {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double quad_form(const Eigen::VectorXcd& h, const Eigen::MatrixXcd& m) {
  return std::max(0.0, (h.adjoint() * m * h)(0, 0).real());
}

double real_trace_product(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a.cwiseProduct(b.conjugate()).sum().real();
}

// Unclamped secrecy rate; the single evaluation used for every accept/reject
// decision in this module, so sub-step comparisons are consistent.
double unclamped_sr(const Eigen::VectorXcd& h_bob, const Eigen::VectorXcd& h_eve,
                    const Eigen::MatrixXcd& beam_cov, const Eigen::MatrixXcd& noise_cov,
                    const SystemParams& p) {
  const double rb =
      std::log1p(quad_form(h_bob, beam_cov) / (quad_form(h_bob, noise_cov) + p.noise_bob));
  const double re =
      std::log1p(quad_form(h_eve, beam_cov) / (quad_form(h_eve, noise_cov) + p.noise_eve));
  return (rb - re) / kLn2;
}

// Clip rounding-level negative eigenvalues so downstream PSD checks hold.
Eigen::MatrixXcd psd_floor(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd h = 0.5 * (m + m.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) return h;
  if (es.eigenvalues()(0) >= 0.0) return h;
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<double> position_grid(double side, double step) {
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor(side / step + 1e-9));
  grid.reserve(count + 2);
  for (long k = 0; k <= count; ++k) grid.push_back(std::min(k * step, side));
  if (grid.back() < side - 1e-12) grid.push_back(side);
  return grid;
}

}  // namespace

double gamma_star(const Eigen::MatrixXcd& beam_cov, const Eigen::MatrixXcd& noise_cov,
                  const Eigen::MatrixXcd& eve_outer, double noise_eve_mw) {
  const double num = std::max(0.0, real_trace_product(eve_outer, beam_cov));
  const double den =
      std::max(0.0, real_trace_product(eve_outer, noise_cov)) + noise_eve_mw;
  return 1.0 + num / den;
}

FixedGammaResult solve_fixed_gamma(double gamma, const Eigen::MatrixXcd& bob_outer,
                                   const Eigen::MatrixXcd& eve_outer,
                                   double noise_bob_mw, double noise_eve_mw,
                                   double power, bool with_an,
                                   const SdpOptions& opts) {
  const int n = static_cast<int>(bob_outer.rows());
  if (eve_outer.rows() != n || bob_outer.cols() != n || eve_outer.cols() != n) {
    throw std::invalid_argument("solve_fixed_gamma: channel matrix size mismatch");
  }
  if (!(power > 0.0) || !(noise_bob_mw > 0.0) || !(noise_eve_mw > 0.0)) {
    throw std::invalid_argument("solve_fixed_gamma: powers must be positive");
  }
  if (!(gamma >= 1.0)) {
    throw std::invalid_argument("solve_fixed_gamma: slack must be >= 1");
  }
  // Keep an interior point for the eavesdropper cap even when the slack sits
  // exactly at its lower bound.
  const double g = std::max(gamma, 1.0 + 1e-9);

  // Dimensionless variables: covariances in units of the budget, channels
  // scaled by budget / noise, the rate-ratio denominator normalized to one.
  const Eigen::MatrixXcd hb = bob_outer * (power / noise_bob_mw);
  const Eigen::MatrixXcd he = eve_outer * (power / noise_eve_mw);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(1, 1);

  SdpStandardForm sdp;
  const int bw = 0;                  // scaled beam covariance
  const int br = with_an ? 1 : -1;   // scaled jamming covariance
  const int bt = with_an ? 2 : 1;    // normalization scalar
  sdp.block_dims.push_back(n);
  if (with_an) sdp.block_dims.push_back(n);
  sdp.block_dims.push_back(1);

  sdp.objective.push_back({bw, hb});
  if (with_an) sdp.objective.push_back({br, hb});
  sdp.objective.push_back({bt, one});

  SdpConstraint normalize;
  if (with_an) normalize.terms.push_back({br, hb});
  normalize.terms.push_back({bt, one});
  normalize.rhs = 1.0;
  sdp.equalities.push_back(normalize);

  SdpConstraint budget;
  budget.terms.push_back({bw, id});
  if (with_an) budget.terms.push_back({br, id});
  budget.terms.push_back({bt, -one});
  budget.rhs = 0.0;
  sdp.equalities.push_back(budget);

  SdpConstraint cap;
  cap.terms.push_back({bw, he});
  if (with_an) cap.terms.push_back({br, (1.0 - g) * he});
  cap.terms.push_back({bt, (1.0 - g) * one});
  cap.rhs = 0.0;
  sdp.inequalities.push_back(cap);

  const SdpSolution sol = solve_sdp(sdp, opts);

  FixedGammaResult out;
  out.status = sol.status;
  const double t = sol.blocks[bt](0, 0).real();
  if (!(t > 1e-12) || sol.status == SdpStatus::Infeasible) {
    out.beam_cov = Eigen::MatrixXcd::Zero(n, n);
    out.noise_cov = Eigen::MatrixXcd::Zero(n, n);
    out.objective = -std::log2(g);
    return out;
  }
  out.beam_cov = psd_floor(sol.blocks[bw] * (power / t));
  out.noise_cov = with_an ? psd_floor(sol.blocks[br] * (power / t))
                          : Eigen::MatrixXcd::Zero(n, n);
  // Rescale so the budget holds exactly.
  const double tr = (out.beam_cov.trace() + out.noise_cov.trace()).real();
  if (tr > 0.0) {
    out.beam_cov *= power / tr;
    out.noise_cov *= power / tr;
  }
  out.objective = std::log2(std::max(sol.objective, 1e-300)) - std::log2(g);
  return out;
}

Eigen::VectorXcd rank1_refine(const Eigen::MatrixXcd& beam_cov) {
  const EigenDecomposition eig = hermitian_eig(beam_cov);
  const Eigen::Index top = eig.eigenvalues.size() - 1;
  const double lambda = std::max(eig.eigenvalues(top), 0.0);
  Eigen::VectorXcd w = std::sqrt(lambda) * eig.eigenvectors.col(top);
  // Deterministic phase: largest-magnitude entry made real positive.
  Eigen::Index pivot = 0;
  double mag = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (std::abs(w(i)) > mag) {
      mag = std::abs(w(i));
      pivot = i;
    }
  }
  if (mag > 0.0) w *= std::conj(w(pivot)) / mag;
  return w;
}

std::vector<double> grid_search_positions(const Eigen::MatrixXcd& beam_cov,
                                          const Eigen::MatrixXcd& noise_cov,
                                          std::span<const double> start,
                                          const WaveguideLayout& layout,
                                          const Scenario& scen, double grid_step) {
  const SystemParams& p = scen.params;
  const int n = p.num_waveguides;
  if (static_cast<int>(start.size()) != n) {
    throw std::invalid_argument("grid_search_positions: one start position per waveguide");
  }
  if (!(grid_step > 0.0)) {
    throw std::invalid_argument("grid_search_positions: grid step must be positive");
  }

  const std::vector<double> grid = position_grid(p.region_side, grid_step);
  std::vector<double> positions(start.begin(), start.end());
  Eigen::VectorXcd h_bob = channel_vector(scen.bob, positions, layout, p);
  Eigen::VectorXcd h_eve = channel_vector(scen.eve, positions, layout, p);
  double sr = unclamped_sr(h_bob, h_eve, beam_cov, noise_cov, p);

  for (int cycle = 0; cycle < 60; ++cycle) {
    const double sr_cycle_start = sr;
    for (int idx = 0; idx < n; ++idx) {
      double best_x = positions[idx];
      double best_sr = sr;
      std::complex<double> best_b = h_bob(idx);
      std::complex<double> best_e = h_eve(idx);
      const Position feed = feed_point(layout, idx);
      for (double x : grid) {
        const Position pa = waveguide_point(layout, idx, x);
        h_bob(idx) = channel_coeff(scen.bob, pa, feed, p);
        h_eve(idx) = channel_coeff(scen.eve, pa, feed, p);
        const double cand = unclamped_sr(h_bob, h_eve, beam_cov, noise_cov, p);
        if (cand > best_sr) {
          best_sr = cand;
          best_x = x;
          best_b = h_bob(idx);
          best_e = h_eve(idx);
        }
      }
      positions[idx] = best_x;
      h_bob(idx) = best_b;
      h_eve(idx) = best_e;
      sr = best_sr;
    }
    if (sr - sr_cycle_start <= 1e-9) break;
  }
  return positions;
}

namespace {

// Exhaustive enumeration over the position grid for one or two waveguides;
// the current placement stays the fallback candidate.
std::vector<double> joint_position_search(const Eigen::MatrixXcd& beam_cov,
                                          const Eigen::MatrixXcd& noise_cov,
                                          std::span<const double> start,
                                          const WaveguideLayout& layout,
                                          const Scenario& scen, double grid_step) {
  const SystemParams& p = scen.params;
  const int n = p.num_waveguides;
  const std::vector<double> grid = position_grid(p.region_side, grid_step);
  std::vector<double> positions(start.begin(), start.end());
  Eigen::VectorXcd h_bob = channel_vector(scen.bob, positions, layout, p);
  Eigen::VectorXcd h_eve = channel_vector(scen.eve, positions, layout, p);
  double best_sr = unclamped_sr(h_bob, h_eve, beam_cov, noise_cov, p);
  std::vector<double> best = positions;

  std::vector<double> cand(positions.begin(), positions.end());
  auto eval = [&]() {
    const Eigen::VectorXcd hb = channel_vector(scen.bob, cand, layout, p);
    const Eigen::VectorXcd he = channel_vector(scen.eve, cand, layout, p);
    const double sr = unclamped_sr(hb, he, beam_cov, noise_cov, p);
    if (sr > best_sr) {
      best_sr = sr;
      best = cand;
    }
  };
  if (n == 1) {
    for (double x : grid) {
      cand[0] = x;
      eval();
    }
  } else {
    for (double x0 : grid) {
      cand[0] = x0;
      for (double x1 : grid) {
        cand[1] = x1;
        eval();
      }
    }
  }
  return best;
}

}  // namespace

MultiSolveResult solve_multi(const Scenario& scen, double power,
                             const MultiSolveConfig& config) {
  const SystemParams& p = scen.params;
  const int n = p.num_waveguides;
  if (!(power > 0.0)) {
    throw std::invalid_argument("solve_multi: transmit power must be positive");
  }
  if (config.joint_position_search && n > 2) {
    throw std::invalid_argument("solve_multi: joint search limited to two waveguides");
  }

  const WaveguideLayout layout = waveguide_layout(p);
  std::vector<double> pa_x(n);
  switch (config.position_init) {
    case PositionInit::BobAligned:
      std::fill(pa_x.begin(), pa_x.end(), std::clamp(scen.bob.x, 0.0, p.region_side));
      break;
    case PositionInit::Midpoint:
      std::fill(pa_x.begin(), pa_x.end(), 0.5 * p.region_side);
      break;
    case PositionInit::UniformRandom: {
      RandomStream stream(config.position_seed, 0);
      for (double& x : pa_x) x = stream.next_unit() * p.region_side;
      break;
    }
  }

  Eigen::VectorXcd h_bob = channel_vector(scen.bob, pa_x, layout, p);
  Eigen::VectorXcd h_eve = channel_vector(scen.eve, pa_x, layout, p);

  // Matched single-beam start using the whole budget, no jamming.
  Eigen::MatrixXcd beam;
  const double hb2 = h_bob.squaredNorm();
  if (hb2 > 0.0) {
    beam = (power / hb2) * (h_bob * h_bob.adjoint());
  } else {
    beam = (power / n) * Eigen::MatrixXcd::Identity(n, n);
  }
  Eigen::MatrixXcd noise = Eigen::MatrixXcd::Zero(n, n);
  double sr = unclamped_sr(h_bob, h_eve, beam, noise, p);

  MultiSolveResult res;
  res.trace.push_back({"init", sr});

  // One alternation pass: inner slack/beamforming rounds followed by a
  // position sweep, repeated until the outer tolerance or the round cap.
  // `with_an` controls whether the jamming block enters the fixed-slack
  // subproblem.  Returns whether the pass ended by tolerance.
  const auto run_alternation = [&](bool with_an) {
    for (int outer = 1; outer <= config.max_outer_iters; ++outer) {
      const double sr_outer_start = sr;

      const Eigen::MatrixXcd bob_outer = h_bob * h_bob.adjoint();
      const Eigen::MatrixXcd eve_outer = h_eve * h_eve.adjoint();
      for (int inner = 1; inner <= config.max_inner_iters; ++inner) {
        ++res.inner_iterations;
        const double g = gamma_star(beam, noise, eve_outer, p.noise_eve);
        const FixedGammaResult fg =
            solve_fixed_gamma(g, bob_outer, eve_outer, p.noise_bob, p.noise_eve,
                              power, with_an, config.sdp);
        const double cand = unclamped_sr(h_bob, h_eve, fg.beam_cov, fg.noise_cov, p);
        const double improve = cand - sr;
        if (cand > sr) {
          beam = fg.beam_cov;
          noise = fg.noise_cov;
          sr = cand;
        }
        res.trace.push_back({"beamforming", sr});
        if (improve <= config.inner_tol) break;
      }

      const std::vector<double> moved =
          config.joint_position_search
              ? joint_position_search(beam, noise, pa_x, layout, scen,
                                      config.grid_step)
              : grid_search_positions(beam, noise, pa_x, layout, scen,
                                      config.grid_step);
      const Eigen::VectorXcd hb_new = channel_vector(scen.bob, moved, layout, p);
      const Eigen::VectorXcd he_new = channel_vector(scen.eve, moved, layout, p);
      const double sr_moved = unclamped_sr(hb_new, he_new, beam, noise, p);
      if (sr_moved > sr) {
        pa_x = moved;
        h_bob = hb_new;
        h_eve = he_new;
        sr = sr_moved;
      }
      res.trace.push_back({"positions", sr});

      ++res.outer_iterations;
      if (sr - sr_outer_start <= config.outer_tol) return true;
    }
    return false;
  };

  struct Candidate {
    Eigen::VectorXcd beam_vector;
    BeamformingState state;
    RatePair rates;
    double sdp_secrecy = 0.0;
  };
  const auto refined = [&]() {
    Candidate c;
    c.sdp_secrecy = sr;
    c.beam_vector = rank1_refine(beam);
    c.state.beam_cov = c.beam_vector * c.beam_vector.adjoint();
    c.state.noise_cov = noise;
    c.state.pa_x = pa_x;
    c.rates = secrecy_rate(h_bob, h_eve, c.state, p);
    return c;
  };

  // The jamming-free alternation runs first in every mode.  With artificial
  // noise enabled the alternation then continues from that design with the
  // jamming block released, and the better of the two refined designs is
  // returned, so enabling the jammer never yields a lower reported rate than
  // disabling it on the same scenario and configuration.
  res.converged = run_alternation(false);
  Candidate best = refined();
  if (config.with_artificial_noise) {
    res.converged = run_alternation(true) && res.converged;
    Candidate cand = refined();
    if (cand.rates.secrecy_unclamped > best.rates.secrecy_unclamped) {
      best = std::move(cand);
    }
  }

  res.sdp_secrecy = best.sdp_secrecy;
  res.beam_vector = std::move(best.beam_vector);
  res.state = std::move(best.state);
  res.rates = best.rates;
  return res;
}

}  // namespace pasec
