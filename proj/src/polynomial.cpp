#include "pasec/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pasec {

double polynomial_value(std::span<const double> coeffs, double x) {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

double polynomial_derivative_value(std::span<const double> coeffs, double x) {
  double v = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    v = v * x + static_cast<double>(k) * coeffs[k];
  }
  return v;
}

double newton_polish(std::span<const double> coeffs, double x0, int steps) {
  double x = x0;
  double fx = std::abs(polynomial_value(coeffs, x));
  for (int i = 0; i < steps; ++i) {
    const double d = polynomial_derivative_value(coeffs, x);
    if (d == 0.0) break;
    const double xn = x - polynomial_value(coeffs, x) / d;
    if (!std::isfinite(xn)) break;
    const double fn = std::abs(polynomial_value(coeffs, xn));
    if (fn > fx) break;
    const bool tiny_step = std::abs(xn - x) < 1e-16 * (1.0 + std::abs(xn));
    x = xn;
    fx = fn;
    if (tiny_step) break;
  }
  return x;
}

namespace {

constexpr double kPi = std::numbers::pi;

void push_quadratic(double a, double b, double c, std::vector<double>& out) {
  // a y^2 + b y + c with a != 0; stable split through q = -(b + sgn(b) sqrt)/2
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
  if (q != 0.0) {
    out.push_back(q / a);
    out.push_back(c / q);
  } else {
    out.push_back(0.0);
    out.push_back(-b / a);
  }
}

// All real roots of a3 x^3 + a2 x^2 + a1 x + a0, a3 != 0.  Records the
// depressed-cubic intermediates when a trace is supplied.
std::vector<double> roots_cubic(double a3, double a2, double a1, double a0,
                                FerrariIntermediates* trace) {
  const double b = a2 / a3, c = a1 / a3, d = a0 / a3;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double disc = 0.25 * q * q + p * p * p / 27.0;
  if (trace) {
    trace->beta1p = p;
    trace->beta0p = q;
    trace->discriminant = disc;
  }
  std::vector<double> out;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double z = std::cbrt(-0.5 * q + sq) + std::cbrt(-0.5 * q - sq);
    if (trace) trace->z = z;
    out.push_back(z - b / 3.0);
  } else if (p == 0.0) {
    // triple root of the depressed cubic
    if (trace) trace->z = 0.0;
    out.push_back(-b / 3.0);
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg);
    if (trace) trace->theta = theta;
    for (int k = 0; k < 3; ++k) {
      const double z = m * std::cos((theta - 2.0 * kPi * k) / 3.0);
      if (trace && k == 0) trace->z = z;
      out.push_back(z - b / 3.0);
    }
  }
  return out;
}

// Real roots of the depressed quartic y^4 + A y^2 + B y + C through the
// resolvent cubic l^3 + 2A l^2 + (A^2 - 4C) l - B^2 = 0, l = omega^2.
std::vector<double> roots_depressed_quartic(double A, double B, double C,
                                            FerrariIntermediates* trace) {
  std::vector<double> out;
  const double scale = std::max({1.0, std::abs(A), std::abs(B), std::abs(C)});
  if (std::abs(B) <= 1e-14 * scale) {
    // biquadratic: z^2 + A z + C with y = +-sqrt(z)
    std::vector<double> zs;
    push_quadratic(1.0, A, C, zs);
    for (double z : zs) {
      if (z >= -1e-14 * scale) {
        const double r = std::sqrt(std::max(z, 0.0));
        out.push_back(r);
        out.push_back(-r);
      }
    }
    return out;
  }

  const double beta2 = 2.0 * A;
  const double beta1 = A * A - 4.0 * C;
  const double beta0 = -B * B;
  if (trace) {
    trace->beta2 = beta2;
    trace->beta1 = beta1;
    trace->beta0 = beta0;
  }
  // beta0 < 0 guarantees a strictly positive real root.
  double l = 0.0;
  for (double root : roots_cubic(1.0, beta2, beta1, beta0, trace)) l = std::max(l, root);
  if (l <= 0.0) return out;
  const double omega = std::sqrt(l);
  const double p0 = 0.5 * (A + l - B / omega);
  const double q0 = 0.5 * (A + l + B / omega);
  if (trace) {
    trace->l = l;
    trace->omega = omega;
    trace->p1 = omega;
    trace->p0 = p0;
    trace->q1 = -omega;
    trace->q0 = q0;
  }
  push_quadratic(1.0, omega, p0, out);
  push_quadratic(1.0, -omega, q0, out);
  return out;
}

std::vector<double> roots_quartic(double a4, double a3, double a2, double a1,
                                  double a0, FerrariIntermediates* trace) {
  const double a = a3 / a4, b = a2 / a4, c = a1 / a4, d = a0 / a4;
  const double shift = a / 4.0;  // x = y - shift
  const double A = b - 3.0 * a * a / 8.0;
  const double B = c - a * b / 2.0 + a * a * a / 8.0;
  const double C = d - a * c / 4.0 + a * a * b / 16.0 - 3.0 * a * a * a * a / 256.0;
  if (trace) {
    trace->shift = shift;
    trace->a2p = A;
    trace->a1p = B;
    trace->a0p = C;
  }
  std::vector<double> out = roots_depressed_quartic(A, B, C, trace);
  for (double& y : out) y -= shift;
  return out;
}

// Any real root of an odd-degree polynomial, by bisection inside the Cauchy
// bound.  coeffs ascending with nonzero leading term.
double bracketed_odd_root(std::span<const double> coeffs) {
  const std::size_t n = coeffs.size() - 1;
  double bound = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    bound = std::max(bound, std::abs(coeffs[k] / coeffs[n]));
  }
  bound += 1.0;
  double lo = -bound, hi = bound;
  double flo = polynomial_value(coeffs, lo);
  const double fhi = polynomial_value(coeffs, hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  // Odd degree: signs at the bound differ.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = polynomial_value(coeffs, mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * (1.0 + std::abs(lo) + std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> real_roots_closed_form(std::span<const double> coeffs,
                                           double x_scale,
                                           FerrariIntermediates* trace) {
  const double X = std::max(x_scale, 1e-300);
  // Drop leading coefficients that are negligible for |x| ~ x_scale.
  double weight_max = 0.0;
  double pw = 1.0;
  std::vector<double> weights(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    weights[k] = std::abs(coeffs[k]) * pw;
    weight_max = std::max(weight_max, weights[k]);
    pw *= X;
  }
  if (weight_max == 0.0) return {};
  std::size_t degree = coeffs.size() - 1;
  while (degree > 0 && weights[degree] < 1e-12 * weight_max) --degree;

  std::vector<double> roots;
  switch (degree) {
    case 0:
      break;
    case 1:
      roots.push_back(-coeffs[0] / coeffs[1]);
      break;
    case 2:
      push_quadratic(coeffs[2], coeffs[1], coeffs[0], roots);
      break;
    case 3:
      roots = roots_cubic(coeffs[3], coeffs[2], coeffs[1], coeffs[0], trace);
      break;
    case 4:
      roots = roots_quartic(coeffs[4], coeffs[3], coeffs[2], coeffs[1], coeffs[0],
                            trace);
      break;
    case 5: {
      const std::array<double, 6> quintic = {coeffs[0], coeffs[1], coeffs[2],
                                             coeffs[3], coeffs[4], coeffs[5]};
      const double r = newton_polish(quintic, bracketed_odd_root(quintic));
      // Synthetic division by (x - r), top down.
      std::array<double, 5> quot{};
      double carry = quintic[5];
      for (int k = 4; k >= 0; --k) {
        quot[k] = carry;
        carry = quintic[k] + carry * r;
      }
      roots = roots_quartic(quot[4], quot[3], quot[2], quot[1], quot[0], trace);
      roots.push_back(r);
      break;
    }
    default:
      break;
  }

  std::span<const double> effective(coeffs.data(), degree + 1);
  for (double& r : roots) r = newton_polish(effective, r);
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace pasec
