#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "pasec/model.hpp"
#include "pasec/rates.hpp"
#include "pasec/sdp.hpp"

namespace pasec {

enum class PositionInit { BobAligned, Midpoint, UniformRandom };

struct MultiSolveConfig {
  double grid_step = 0.05;   // m
  double outer_tol = 1e-4;   // bps/Hz per outer round
  double inner_tol = 1e-4;   // bps/Hz per beamforming round
  int max_outer_iters = 30;
  int max_inner_iters = 50;
  PositionInit position_init = PositionInit::BobAligned;
  std::uint64_t position_seed = 0;  // UniformRandom only
  bool with_artificial_noise = true;
  // Exhaustive search over position pairs instead of coordinate sweeps.
  // Only accepted for num_waveguides <= 2.
  bool joint_position_search = false;
  SdpOptions sdp;
};

// Slack turning the eavesdropper rate constraint linear: at the current
// (W, R) the maximizing value is 1 + Tr(H_E W) / (Tr(H_E R) + noise_eve).
double gamma_star(const Eigen::MatrixXcd& beam_cov, const Eigen::MatrixXcd& noise_cov,
                  const Eigen::MatrixXcd& eve_outer, double noise_eve_mw);

struct FixedGammaResult {
  Eigen::MatrixXcd beam_cov;
  Eigen::MatrixXcd noise_cov;  // zero when solved without artificial noise
  double objective = 0.0;      // log2 of the optimized rate ratio
  SdpStatus status = SdpStatus::MaxIters;
};

// Fixed-slack beamforming subproblem: maximize Bob's SINR numerator over
// (W, R) under the power budget Tr(W + R) = power and the eavesdropper
// constraint, via the ratio-normalizing change of variables that makes it a
// linear SDP.  with_an == false removes the R block entirely.
FixedGammaResult solve_fixed_gamma(double gamma, const Eigen::MatrixXcd& bob_outer,
                                   const Eigen::MatrixXcd& eve_outer,
                                   double noise_bob_mw, double noise_eve_mw,
                                   double power, bool with_an = true,
                                   const SdpOptions& opts = {});

// Dominant-eigenpair beam vector w = sqrt(lambda_max) u, with the phase fixed
// so the largest-magnitude entry is real positive.
Eigen::VectorXcd rank1_refine(const Eigen::MatrixXcd& beam_cov);

// Cyclic per-element sweeps over the grid {0, grid_step, ..., D} (current
// positions included as candidates), maximizing the unclamped secrecy rate at
// fixed (W, R).  Stops when a full cycle improves by <= 1e-9.  Ties toward
// smaller x.
std::vector<double> grid_search_positions(const Eigen::MatrixXcd& beam_cov,
                                          const Eigen::MatrixXcd& noise_cov,
                                          std::span<const double> start,
                                          const WaveguideLayout& layout,
                                          const Scenario& scen, double grid_step);

struct MultiSolveResult {
  BeamformingState state;        // rank-1-refined beam covariance
  Eigen::VectorXcd beam_vector;
  RatePair rates;                // at the refined state
  double sdp_secrecy = 0.0;      // unclamped, at the unrefined SDP covariance
  IterationTrace trace;
  bool converged = false;
  int outer_iterations = 0;      // total outer rounds, both passes combined
  int inner_iterations = 0;      // total inner rounds, both passes combined
};

// Alternates the slack/beamforming inner loop with the position step.  Every
// sub-step is accepted only if it does not decrease the unclamped secrecy
// rate, so the trace is nondecreasing by construction; a pass that exhausts
// max_outer_iters returns the best iterate found with converged = false.
// The jamming-free alternation always runs first; when artificial noise is
// enabled a second pass continues from that design with the jamming block
// released and the better refined design wins, so enabling the jammer never
// reports a lower rate than disabling it on the same scenario and config.
MultiSolveResult solve_multi(const Scenario& scen, double power,
                             const MultiSolveConfig& config = {});

}  // namespace pasec
