#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pasec/rng.hpp"
#include "pasec/single_waveguide.hpp"

#include "oracles.hpp"

using namespace pasec;

namespace {

ScalarScenario base_scenario(double noise_bob_dbm = -90.0,
                             double noise_eve_dbm = -90.0) {
  ScalarScenario scen;
  scen.params = make_params(28e9, 1.4, 3.0, 30.0, 1, noise_bob_dbm, noise_eve_dbm);
  scen.bob = {10.0, 5.0, 0.0};
  scen.eve = {20.0, 25.0, 0.0};
  scen.power = 100.0;
  return scen;
}

double grid_max_position(const ScalarScenario& scen, double w2, double rm,
                         double step) {
  const int n = static_cast<int>(std::lround(scen.params.region_side / step));
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    best = std::max(best, scalar_secrecy_rate(w2, rm, i * step, scen));
  }
  return best;
}

}  // namespace

TEST_CASE("shared user x is a stationary point and the optimum") {
  ScalarScenario scen = base_scenario();
  scen.bob = {10.0, 2.0, 0.0};
  scen.eve = {10.0, 8.0, 0.0};

  const std::vector<double> cand = quartic_position_candidates(100.0, 0.0, scen);
  CHECK(testing_oracles::min_distance(10.0, cand) <= 1e-6);

  // the rate difference depends on x only through (x - 10)^2 here
  const double x = optimal_position_single(100.0, 0.0, scen);
  CHECK(x == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("equal noise cancels the quintic term exactly") {
  ScalarScenario scen = base_scenario();
  QuarticWorkspace ws;
  quartic_position_candidates(100.0, 7.0, scen, &ws);
  CHECK(ws.coeffs[5] == 0.0);
  CHECK(ws.degree == 4);
  CHECK(ws.k1_bob == ws.k1_eve);

  ScalarScenario uneq = base_scenario(-90.0, -85.0);
  QuarticWorkspace ws5;
  quartic_position_candidates(100.0, 7.0, uneq, &ws5);
  CHECK(ws5.coeffs[5] != 0.0);
  CHECK(ws5.degree == 5);
}

TEST_CASE("quartic factorization intermediates are consistent") {
  ScalarScenario scen = base_scenario();
  QuarticWorkspace ws;
  quartic_position_candidates(100.0, 0.0, scen, &ws);
  REQUIRE(ws.degree == 4);
  const auto& f = ws.ferrari;

  if (f.omega != 0.0) {
    CHECK(f.l == doctest::Approx(f.omega * f.omega).epsilon(1e-9));
    CHECK(f.p1 == doctest::Approx(-f.q1));

    // resolvent cubic evaluated at the chosen root
    const double resv =
        ((f.l + f.beta2) * f.l + f.beta1) * f.l + f.beta0;
    const double scale = std::max({std::abs(f.beta0), std::abs(f.beta1 * f.l),
                                   std::abs(f.beta2 * f.l * f.l),
                                   std::abs(f.l * f.l * f.l)});
    CHECK(std::abs(resv) <= 1e-9 * scale);

    // (y^2 + p1 y + p0)(y^2 + q1 y + q0) reproduces the depressed quartic
    const double c2 = f.p0 + f.q0 + f.p1 * f.q1;
    const double c1 = f.p1 * f.q0 + f.q1 * f.p0;
    const double c0 = f.p0 * f.q0;
    const double cs = std::max({std::abs(f.a2p), std::abs(f.a1p),
                                std::abs(f.a0p), 1e-300});
    CHECK(std::abs(c2 - f.a2p) <= 1e-8 * cs);
    CHECK(std::abs(c1 - f.a1p) <= 1e-8 * cs);
    CHECK(std::abs(c0 - f.a0p) <= 1e-8 * cs);
  }
}

TEST_CASE("position candidates agree with the companion-matrix oracle") {
  RandomStream rng(404, 0);
  for (int trial = 0; trial < 60; ++trial) {
    ScalarScenario scen = base_scenario(-90.0, trial % 2 ? -90.0 : -87.0);
    scen.bob = {30.0 * rng.next_unit(), 30.0 * rng.next_unit(), 0.0};
    scen.eve = {30.0 * rng.next_unit(), 30.0 * rng.next_unit(), 0.0};
    const double w2 = 1.0 + 99.0 * rng.next_unit();
    const double rm = scen.power - w2 > 0.0 ? (scen.power - w2) * rng.next_unit() : 0.0;

    QuarticWorkspace ws;
    const std::vector<double> cand = quartic_position_candidates(w2, rm, scen, &ws);
    std::span<const double> coeffs(ws.coeffs.data(), ws.degree + 1);

    for (double r : cand) {
      double mag = 0.0, pw = 1.0;
      for (double c : coeffs) {
        mag += std::abs(c) * pw;
        pw *= std::max(1.0, std::abs(r));
      }
      CHECK(std::abs(polynomial_value(coeffs, r)) <= 1e-7 * mag);
    }

    // match only roots separated from their neighbors relative to their own
    // magnitude; merged near-double pairs are ill-conditioned in both methods
    const std::vector<double> oracle = testing_oracles::companion_real_roots(coeffs);
    for (double r : oracle) {
      bool isolated = true;
      for (double other : oracle) {
        if (other != r && std::abs(other - r) < 1e-3 * (1.0 + std::abs(r))) {
          isolated = false;
        }
      }
      if (isolated) {
        CHECK(testing_oracles::min_distance(r, cand) <= 1e-6 * (1.0 + std::abs(r)));
      }
    }
  }
}

TEST_CASE("closed-form position beats a fine grid") {
  ScalarScenario scen = base_scenario();
  const double x = optimal_position_single(100.0, 0.0, scen);
  const double sr = scalar_secrecy_rate(100.0, 0.0, x, scen);
  CHECK(sr - grid_max_position(scen, 100.0, 0.0, 1e-3) >= -1e-9);

  RandomStream rng(505, 0);
  for (int trial = 0; trial < 10; ++trial) {
    ScalarScenario rnd = base_scenario(-90.0, trial % 2 ? -90.0 : -88.0);
    rnd.bob = {30.0 * rng.next_unit(), 30.0 * rng.next_unit(), 0.0};
    rnd.eve = {30.0 * rng.next_unit(), 30.0 * rng.next_unit(), 0.0};
    const double w2 = 60.0;
    const double rm = 40.0;
    const double xr = optimal_position_single(w2, rm, rnd);
    const double srr = scalar_secrecy_rate(w2, rm, xr, rnd);
    CHECK(srr - grid_max_position(rnd, w2, rm, 1e-3) >= -1e-8);
  }
}

TEST_CASE("zero beam power degenerates cleanly") {
  ScalarScenario scen = base_scenario();
  CHECK(quartic_position_candidates(0.0, 50.0, scen).empty());
  // constant-zero objective: ties resolve toward the smaller endpoint
  CHECK(optimal_position_single(0.0, 50.0, scen) == 0.0);
}

TEST_CASE("full-noise split gives exactly zero") {
  ScalarScenario scen = base_scenario();
  CHECK(sr_closed_form(scen.power, 12.0, scen) == 0.0);
}

TEST_CASE("equidistant users give zero for every split") {
  ScalarScenario scen = base_scenario();
  scen.bob = {10.0, 5.0, 0.0};
  scen.eve = {10.0, -5.0, 0.0};
  for (double rm : {0.0, 25.0, 80.0, 100.0}) {
    CHECK(sr_closed_form(rm, 4.0, scen) == 0.0);
  }
}

TEST_CASE("noise share outside the budget is rejected") {
  ScalarScenario scen = base_scenario();
  CHECK_THROWS_AS(sr_closed_form(-0.1, 5.0, scen), std::domain_error);
  CHECK_THROWS_AS(sr_closed_form(scen.power * 1.01, 5.0, scen), std::domain_error);
}

TEST_CASE("split objective matches the generic evaluator") {
  ScalarScenario scen = base_scenario(-90.0, -86.0);
  RandomStream rng(606, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const double rm = scen.power * rng.next_unit();
    const double x = scen.params.region_side * rng.next_unit();
    const double a = sr_closed_form(rm, x, scen);
    const double b = scalar_secrecy_rate(scen.power - rm, rm, x, scen);
    CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("power split lands on the favorable endpoint") {
  ScalarScenario scen = base_scenario();

  // Bob nearer the element than Eve
  auto [w_b, r_b] = optimal_power_split(10.0, scen);
  CHECK(w_b == scen.power);
  CHECK(r_b == 0.0);

  // Eve nearer: everything into the jamming term
  ScalarScenario close_eve = scen;
  close_eve.eve = {25.0, 2.0, 0.0};
  auto [w_e, r_e] = optimal_power_split(25.0, close_eve);
  CHECK(w_e == 0.0);
  CHECK(r_e == scen.power);

  // equidistant tie keeps the beam
  ScalarScenario tie = scen;
  tie.eve = {10.0, -5.0, 0.0};
  auto [w_t, r_t] = optimal_power_split(3.0, tie);
  CHECK(w_t == scen.power);
  CHECK(r_t == 0.0);
}

TEST_CASE("alternation converges and the trace is nondecreasing") {
  ScalarScenario scen = base_scenario();
  const SingleSolveResult res = solve_single(scen);
  CHECK(res.converged);
  CHECK(res.iterations <= 10);
  REQUIRE(res.trace.size() >= 3);
  CHECK(res.trace.front().label == "init");
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    CHECK(res.trace[i].secrecy >= res.trace[i - 1].secrecy);
  }

  // budget is split exactly, covariances are scalar
  const double w2 = res.state.beam_cov(0, 0).real();
  const double rm = res.state.noise_cov(0, 0).real();
  CHECK(w2 + rm == scen.power);
  CHECK(res.state.pa_x.size() == 1);

  // reported rates agree with the scalar objective at the final point
  const double sr = scalar_secrecy_rate(w2, rm, res.state.pa_x[0], scen);
  CHECK(res.rates.secrecy_unclamped == doctest::Approx(sr).epsilon(1e-9));
  CHECK(res.rates.secrecy == doctest::Approx(std::max(0.0, sr)));
}

TEST_CASE("dominant eavesdropper drives the beam power to zero") {
  ScalarScenario scen = base_scenario();
  scen.bob = {15.0, 20.0, 0.0};
  scen.eve = {15.0, 1.0, 0.0};
  const SingleSolveResult res = solve_single(scen);
  CHECK(res.converged);
  CHECK(res.state.beam_cov(0, 0).real() == 0.0);
  CHECK(res.state.noise_cov(0, 0).real() == scen.power);
  CHECK(res.rates.secrecy == 0.0);
  CHECK(res.rates.secrecy_unclamped == 0.0);
}

TEST_CASE("alternation result is globally optimal on a 2-D grid") {
  RandomStream rng(707, 0);
  for (int trial = 0; trial < 6; ++trial) {
    ScalarScenario scen = base_scenario();
    scen.bob = {30.0 * rng.next_unit(), 30.0 * rng.next_unit(), 0.0};
    scen.eve = {30.0 * rng.next_unit(), 30.0 * rng.next_unit(), 0.0};

    const SingleSolveResult res = solve_single(scen);
    const double w2 = res.state.beam_cov(0, 0).real();
    const double rm = res.state.noise_cov(0, 0).real();
    const double sr = scalar_secrecy_rate(w2, rm, res.state.pa_x[0], scen);

    double grid_best = -std::numeric_limits<double>::infinity();
    for (int xi = 0; xi <= 300; ++xi) {
      for (int si = 0; si <= 100; ++si) {
        const double share = scen.power * si / 100.0;
        grid_best = std::max(grid_best, scalar_secrecy_rate(scen.power - share,
                                                            share, xi * 0.1, scen));
      }
    }
    CHECK(sr - grid_best >= -1e-9);
  }
}

TEST_CASE("infinite tolerance stops after one round") {
  ScalarScenario scen = base_scenario();
  const SingleSolveResult res =
      solve_single(scen, std::numeric_limits<double>::infinity());
  CHECK(res.converged);
  CHECK(res.iterations == 1);
}

TEST_CASE("solver validates its inputs") {
  ScalarScenario scen = base_scenario();
  scen.params = make_params(28e9, 1.4, 3.0, 30.0, 2, -90.0, -90.0);
  CHECK_THROWS_AS(solve_single(scen), std::invalid_argument);

  ScalarScenario nopower = base_scenario();
  nopower.power = 0.0;
  CHECK_THROWS_AS(solve_single(nopower), std::invalid_argument);
}

TEST_CASE("interior candidates are stationary under central differences") {
  ScalarScenario scen = base_scenario();
  const std::vector<double> cand = quartic_position_candidates(100.0, 10.0, scen);
  const double h = 1e-5;
  for (double x : cand) {
    if (x < 1.0 || x > scen.params.region_side - 1.0) continue;
    const double deriv = (scalar_secrecy_rate(100.0, 10.0, x + h, scen) -
                          scalar_secrecy_rate(100.0, 10.0, x - h, scen)) /
                         (2.0 * h);
    CHECK(std::abs(deriv) <= 1e-6);
  }
}
