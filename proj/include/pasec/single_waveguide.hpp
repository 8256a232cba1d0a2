#pragma once

#include <array>
#include <utility>
#include <vector>

#include "pasec/model.hpp"
#include "pasec/polynomial.hpp"
#include "pasec/rates.hpp"

namespace pasec {

// Single-waveguide instance (params.num_waveguides == 1): the element moves
// along y = 0 at height d, scalar beam power w2 and noise power rm share the
// budget.  power is the total transmit budget P in mW.
struct ScalarScenario {
  Position bob;
  Position eve;
  SystemParams params;
  double power = 0.0;
};

double bob_range_sq(const ScalarScenario& scen, double pa_x);
double eve_range_sq(const ScalarScenario& scen, double pa_x);

// Stationarity polynomial of the secrecy rate in the element position x and
// the factorization intermediates behind its closed-form roots.
struct QuarticWorkspace {
  double k1_bob = 0.0;  // w2 * eta / noise_bob
  double k1_eve = 0.0;  // w2 * eta / noise_eve
  double k2 = 0.0;      // |bob|^2 + d^2 + eta * rm / noise_bob
  double k3 = 0.0;      // |eve|^2 + d^2 + eta * rm / noise_eve
  std::array<double, 6> coeffs{};  // ascending; degree 5 only for unequal noise
  int degree = 0;
  FerrariIntermediates ferrari;
};

// Real stationary points of the unclamped secrecy rate over x, for fixed
// (w2, rm).  Not restricted to [0, D]; degenerate objectives (w2 == 0 or
// coincident users) yield an empty list.
std::vector<double> quartic_position_candidates(double w2, double rm,
                                                const ScalarScenario& scen,
                                                QuarticWorkspace* ws = nullptr);

// Unclamped secrecy rate at fixed (w2, rm, pa_x).
double scalar_secrecy_rate(double w2, double rm, double pa_x,
                           const ScalarScenario& scen);

// Best x in [0, D] among interior stationary points and both endpoints;
// ties resolve toward smaller x.
double optimal_position_single(double w2, double rm, const ScalarScenario& scen);

// Unclamped secrecy rate at w2 = P - rm for fixed position, as a function of
// the noise share rm in [0, P].
double sr_closed_form(double rm, double pa_x, const ScalarScenario& scen);

// Optimal (w2, rm) for fixed position: the full-budget split lands on an
// endpoint, (P, 0) when Bob's effective link is the stronger one, else (0, P).
std::pair<double, double> optimal_power_split(double pa_x, const ScalarScenario& scen);

struct SingleSolveResult {
  BeamformingState state;  // 1x1 covariances
  RatePair rates;
  IterationTrace trace;
  bool converged = false;
  int iterations = 0;  // alternation rounds completed
};

// Alternates the closed-form position step with the endpoint power split from
// x = clamp(bob.x, 0, D), (w2, rm) = (P, 0).  The unclamped objective is
// nondecreasing across sub-steps.
SingleSolveResult solve_single(const ScalarScenario& scen, double tol = 1e-9,
                               int max_iters = 50);

}  // namespace pasec
