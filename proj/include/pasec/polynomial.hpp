#pragma once

#include <span>
#include <vector>

namespace pasec {

// Intermediates of the quartic factorization into two quadratics via the
// resolvent cubic.  Recorded for diagnostics when requested.
struct FerrariIntermediates {
  double shift = 0.0;  // depression offset, roots of the original = y - shift
  double a2p = 0.0, a1p = 0.0, a0p = 0.0;     // depressed quartic coefficients
  double beta2 = 0.0, beta1 = 0.0, beta0 = 0.0;    // resolvent cubic in l
  double beta1p = 0.0, beta0p = 0.0;               // depressed resolvent
  double discriminant = 0.0;  // (beta0p/2)^2 + (beta1p/3)^3
  double theta = 0.0;         // trigonometric branch angle (three real roots)
  double z = 0.0;             // depressed-cubic root actually used
  double l = 0.0;             // positive resolvent root, l = omega^2
  double omega = 0.0;
  double p1 = 0.0, p0 = 0.0;  // y^2 + p1 y + p0 factor
  double q1 = 0.0, q0 = 0.0;  // y^2 + q1 y + q0 factor
};

double polynomial_value(std::span<const double> coeffs, double x);
double polynomial_derivative_value(std::span<const double> coeffs, double x);

// A few Newton steps on the full polynomial; returns the start point when the
// iteration does not reduce the residual.
double newton_polish(std::span<const double> coeffs, double x0, int steps = 8);

// All real roots of sum_k coeffs[k] x^k, coeffs ascending, degree <= 5.
// Degrees up to 4 are fully closed form (Cardano / Ferrari); degree 5 brackets
// one real root, deflates, and factors the remaining quartic.  Leading
// coefficients that are negligible at the scale x ~ x_scale are dropped.
// Roots are polished against the original polynomial and returned sorted.
std::vector<double> real_roots_closed_form(std::span<const double> coeffs,
                                           double x_scale = 1.0,
                                           FerrariIntermediates* trace = nullptr);

}  // namespace pasec
