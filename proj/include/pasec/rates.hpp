#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pasec/model.hpp"

namespace pasec {

// Transmit-side design variables: signal covariance W, artificial-noise
// covariance R (both Hermitian PSD, mW), and the element x-positions.
struct BeamformingState {
  Eigen::MatrixXcd beam_cov;
  Eigen::MatrixXcd noise_cov;
  std::vector<double> pa_x;
};

struct RatePair {
  double rate_bob = 0.0;
  double rate_eve = 0.0;
  double secrecy = 0.0;            // max(0, rate_bob - rate_eve)
  double secrecy_unclamped = 0.0;  // rate_bob - rate_eve
};

Eigen::MatrixXcd outer_product(const Eigen::VectorXcd& h);

// log2(1 + Tr(H W) / (Tr(H R) + noise_mw)) with H = h h^H supplied directly.
// Negative traces below a PSD rounding tolerance throw std::domain_error.
double rate(const Eigen::MatrixXcd& channel_outer, const Eigen::MatrixXcd& beam_cov,
            const Eigen::MatrixXcd& noise_cov, double noise_mw);

// Same rate through the vector form log2(1 + |h^H w|^2 / (h^H R h + noise)).
double rate_vector_form(const Eigen::VectorXcd& h, const Eigen::VectorXcd& w,
                        const Eigen::MatrixXcd& noise_cov, double noise_mw);

RatePair secrecy_rate(const Eigen::VectorXcd& h_bob, const Eigen::VectorXcd& h_eve,
                      const BeamformingState& state, const SystemParams& params);

// One entry per optimization sub-step; secrecy values are unclamped so
// monotonicity of the underlying objective is visible even below zero.
struct IterationStep {
  std::string label;
  double secrecy = 0.0;
};
using IterationTrace = std::vector<IterationStep>;

}  // namespace pasec
