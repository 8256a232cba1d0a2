// Brute-force reference implementations used only by the tests.  These stay
// independent of the closed-form code paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace testing_oracles {

// Real roots via the companion-matrix eigenproblem.  Eigenvalues of badly
// scaled companion matrices carry absolute error well above root spacing, so
// each one is refined by a plain Newton loop on the polynomial itself.
inline std::vector<double> companion_real_roots(std::span<const double> coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && coeffs[deg] == 0.0) --deg;
  if (deg <= 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion);

  const auto horner = [&](double x, double& value, double& slope) {
    value = 0.0;
    slope = 0.0;
    for (int k = deg; k >= 0; --k) {
      slope = slope * x + value;
      value = value * x + coeffs[k];
    }
  };

  std::vector<double> out;
  for (int i = 0; i < deg; ++i) {
    const std::complex<double> z = es.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-8 * (1.0 + std::abs(z.real()))) continue;
    double x = z.real();
    double value, slope;
    horner(x, value, slope);
    for (int step = 0; step < 8 && slope != 0.0; ++step) {
      const double next = x - value / slope;
      double nvalue, nslope;
      horner(next, nvalue, nslope);
      if (!(std::abs(nvalue) < std::abs(value))) break;
      x = next;
      value = nvalue;
      slope = nslope;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Roots of the oracle separated from every other oracle root by at least
// `gap`; multiplicities collapse under eigen rounding, so only these are
// meaningful for exact matching.
inline std::vector<double> well_separated(const std::vector<double>& roots,
                                          double gap) {
  std::vector<double> out;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    bool isolated = true;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (i != j && std::abs(roots[i] - roots[j]) < gap) isolated = false;
    }
    if (isolated) out.push_back(roots[i]);
  }
  return out;
}

inline double min_distance(double x, const std::vector<double>& ys) {
  double best = std::numeric_limits<double>::infinity();
  for (double y : ys) best = std::min(best, std::abs(x - y));
  return best;
}

}  // namespace testing_oracles
