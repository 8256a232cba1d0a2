#include "pasec/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pasec {

namespace {

// Tolerance for traces that should be nonnegative but carry PSD rounding
// noise: scaled by the magnitudes involved.
double psd_slack(const Eigen::MatrixXcd& channel_outer, const Eigen::MatrixXcd& cov) {
  return 1e-9 * (1.0 + channel_outer.norm() * cov.norm());
}

double real_trace_product(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a.cwiseProduct(b.conjugate()).sum().real();  // Re Tr(A B) for Hermitian A, B
}

}  // namespace

Eigen::MatrixXcd outer_product(const Eigen::VectorXcd& h) {
  return h * h.adjoint();
}

double rate(const Eigen::MatrixXcd& channel_outer, const Eigen::MatrixXcd& beam_cov,
            const Eigen::MatrixXcd& noise_cov, double noise_mw) {
  if (!(noise_mw > 0.0)) {
    throw std::domain_error("rate: receiver noise must be positive");
  }
  double signal = real_trace_product(channel_outer, beam_cov);
  double leak = real_trace_product(channel_outer, noise_cov);
  if (signal < -psd_slack(channel_outer, beam_cov) ||
      leak < -psd_slack(channel_outer, noise_cov)) {
    throw std::domain_error("rate: negative received power, covariance not PSD");
  }
  signal = std::max(signal, 0.0);
  leak = std::max(leak, 0.0);
  return std::log2(1.0 + signal / (leak + noise_mw));
}

double rate_vector_form(const Eigen::VectorXcd& h, const Eigen::VectorXcd& w,
                        const Eigen::MatrixXcd& noise_cov, double noise_mw) {
  if (!(noise_mw > 0.0)) {
    throw std::domain_error("rate_vector_form: receiver noise must be positive");
  }
  const double signal = std::norm(h.dot(w));  // |h^H w|^2
  const double leak = std::max(0.0, (h.adjoint() * noise_cov * h)(0).real());
  return std::log2(1.0 + signal / (leak + noise_mw));
}

RatePair secrecy_rate(const Eigen::VectorXcd& h_bob, const Eigen::VectorXcd& h_eve,
                      const BeamformingState& state, const SystemParams& params) {
  const Eigen::MatrixXcd bob_outer = outer_product(h_bob);
  const Eigen::MatrixXcd eve_outer = outer_product(h_eve);
  RatePair out;
  out.rate_bob = rate(bob_outer, state.beam_cov, state.noise_cov, params.noise_bob);
  out.rate_eve = rate(eve_outer, state.beam_cov, state.noise_cov, params.noise_eve);
  out.secrecy_unclamped = out.rate_bob - out.rate_eve;
  out.secrecy = std::max(0.0, out.secrecy_unclamped);
  return out;
}

}  // namespace pasec
