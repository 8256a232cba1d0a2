// Command-line driver: Monte Carlo sweeps, outage CDFs, one-off solves, and
// brute-force cross-checks of the closed-form machinery.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pasec/experiments.hpp"
#include "pasec/rng.hpp"
#include "pasec/sdp.hpp"
#include "pasec/single_waveguide.hpp"

namespace {

pasec::ExperimentConfig config_from(const std::optional<std::string>& path) {
  if (path) return pasec::load_config(*path);
  return {};
}

bool parse_pair(const std::string& text, pasec::Position& out) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return false;
  try {
    std::size_t a = 0, b = 0;
    const std::string xs = text.substr(0, comma);
    const std::string ys = text.substr(comma + 1);
    out.x = std::stod(xs, &a);
    out.y = std::stod(ys, &b);
    out.z = 0.0;
    return a == xs.size() && b == ys.size();
  } catch (const std::exception&) {
    return false;
  }
}

int run_oracle_quartic(std::uint64_t seed, int cases) {
  pasec::RandomStream rng(seed, 0);
  const pasec::SystemParams params =
      pasec::make_params(28e9, 1.4, 3.0, 30.0, 1, -90.0, -90.0);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    pasec::ScalarScenario scen;
    scen.params = params;
    scen.bob = {rng.next_unit() * 30.0, rng.next_unit() * 30.0, 0.0};
    scen.eve = {rng.next_unit() * 30.0, rng.next_unit() * 30.0, 0.0};
    scen.power = pasec::dbm_to_linear(-10.0 + 30.0 * rng.next_unit());
    const double rm = scen.power * rng.next_unit();
    const double w2 = scen.power - rm;

    const double x_closed = pasec::optimal_position_single(w2, rm, scen);
    const double sr_closed = pasec::scalar_secrecy_rate(w2, rm, x_closed, scen);
    double sr_grid = -1e300;
    for (int k = 0; k <= 30000; ++k) {
      sr_grid = std::max(sr_grid,
                         pasec::scalar_secrecy_rate(w2, rm, k * 1e-3, scen));
    }
    worst = std::min(worst, sr_closed - sr_grid);
  }
  std::printf("quartic: %d cases, worst closed-form deficit vs 1 mm grid: %.3e bps/Hz\n",
              cases, worst);
  return worst >= -1e-6 ? 0 : 1;
}

int run_oracle_power_split(std::uint64_t seed, int cases) {
  pasec::RandomStream rng(seed, 0);
  const pasec::SystemParams params =
      pasec::make_params(28e9, 1.4, 3.0, 30.0, 1, -90.0, -90.0);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    pasec::ScalarScenario scen;
    scen.params = params;
    scen.bob = {rng.next_unit() * 30.0, rng.next_unit() * 30.0, 0.0};
    scen.eve = {rng.next_unit() * 30.0, rng.next_unit() * 30.0, 0.0};
    scen.power = pasec::dbm_to_linear(-10.0 + 30.0 * rng.next_unit());
    const double x = rng.next_unit() * 30.0;

    const auto [w2, rm] = pasec::optimal_power_split(x, scen);
    const double sr_split = pasec::sr_closed_form(rm, x, scen);
    double sr_grid = -1e300;
    for (int k = 0; k <= 100; ++k) {
      sr_grid = std::max(sr_grid,
                         pasec::sr_closed_form(scen.power * k / 100.0, x, scen));
    }
    worst = std::min(worst, sr_split - sr_grid);
  }
  std::printf("power-split: %d cases, worst endpoint deficit vs 101-point split grid: %.3e bps/Hz\n",
              cases, worst);
  return worst >= -1e-9 ? 0 : 1;
}

int run_oracle_sdp(std::uint64_t seed, int cases) {
  pasec::RandomStream rng(seed, 0);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const int n = 2 + static_cast<int>(rng.next_unit() * 5.0);
    Eigen::MatrixXcd c(n, n);
    for (int r = 0; r < n; ++r) {
      for (int col = 0; col < n; ++col) {
        c(r, col) = std::complex<double>(rng.next_unit() - 0.5,
                                         rng.next_unit() - 0.5);
      }
    }
    c = 0.5 * (c + c.adjoint()).eval();
    const double lmax =
        pasec::hermitian_eig(c).eigenvalues.maxCoeff();

    pasec::SdpStandardForm problem;
    problem.block_dims = {n};
    problem.objective.push_back({0, c});
    pasec::SdpConstraint trace1;
    trace1.terms.push_back({0, Eigen::MatrixXcd::Identity(n, n)});
    trace1.rhs = 1.0;
    problem.equalities.push_back(trace1);
    const pasec::SdpSolution sol = pasec::solve_sdp(problem);
    if (sol.status != pasec::SdpStatus::Optimal) {
      std::printf("sdp: case %d did not reach optimality\n", i);
      return 1;
    }
    worst = std::max(worst, std::abs(sol.objective - lmax));
  }
  std::printf("sdp: %d cases, worst |objective - top eigenvalue|: %.3e\n", cases,
              worst);
  return worst <= 1e-7 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Artificial-noise secrecy optimization for pinching-antenna downlinks"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed_flag;
  std::optional<int> drops_flag;
  std::optional<int> threads_flag;
  std::string out_dir = "out";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "configuration file (key = value)");
    cmd->add_option("--seed", seed_flag, "override the experiment seed");
    cmd->add_option("--drops", drops_flag, "override the number of user drops");
    cmd->add_option("--threads", threads_flag, "worker threads");
    cmd->add_option("--out", out_dir, "output directory");
  };

  CLI::App* sweep = app.add_subcommand("sweep", "mean secrecy rate vs transmit power");
  add_common(sweep);

  CLI::App* cdf = app.add_subcommand("cdf", "secrecy-rate CDF at fixed power");
  add_common(cdf);
  std::optional<double> cdf_power;
  cdf->add_option("--power-dbm", cdf_power, "transmit power for the CDF run");

  CLI::App* solve = app.add_subcommand("solve", "solve one placement instance");
  std::string bob_text, eve_text, scheme_text = "pas-an";
  int solve_n = 1;
  double solve_power = 10.0;
  std::optional<double> grid_step;
  solve->add_option("--bob", bob_text, "Bob position as x,y")->required();
  solve->add_option("--eve", eve_text, "Eve position as x,y")->required();
  solve->add_option("--n", solve_n, "number of waveguides");
  solve->add_option("--power-dbm", solve_power, "transmit power in dBm");
  solve->add_option("--scheme", scheme_text, "pas-an | pas-no-an | cas-an");
  solve->add_option("--grid-step", grid_step, "position grid step in meters");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "brute-force cross-checks of the closed-form solvers");
  std::string suite;
  std::uint64_t oracle_seed = 1;
  int oracle_cases = 100;
  oracle->add_option("--suite", suite, "quartic | sdp | power-split")->required();
  oracle->add_option("--seed", oracle_seed, "oracle seed");
  oracle->add_option("--cases", oracle_cases, "number of random cases");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed() || cdf->parsed()) {
      pasec::ExperimentConfig cfg = config_from(config_path);
      if (seed_flag) cfg.seed = *seed_flag;
      if (threads_flag) cfg.threads = *threads_flag;
      if (sweep->parsed()) {
        if (drops_flag) cfg.sweep_drops = *drops_flag;
        const pasec::SweepResult result = pasec::run_sweep(cfg);
        pasec::write_sweep_outputs(result, out_dir);
        std::printf("sweep: %zu records -> %s\n", result.records.size(),
                    out_dir.c_str());
      } else {
        if (drops_flag) cfg.cdf_drops = *drops_flag;
        if (cdf_power) cfg.cdf_power_dbm = *cdf_power;
        const pasec::CdfResult result = pasec::run_cdf(cfg);
        pasec::write_cdf_outputs(result, out_dir);
        std::printf("cdf: %zu records -> %s\n", result.records.size(),
                    out_dir.c_str());
      }
      return 0;
    }

    if (solve->parsed()) {
      pasec::ScenarioSample sample;
      if (!parse_pair(bob_text, sample.bob) || !parse_pair(eve_text, sample.eve)) {
        std::fprintf(stderr, "solve: positions must be given as x,y\n");
        return 1;
      }
      const auto scheme = pasec::parse_scheme(scheme_text);
      if (!scheme) {
        std::fprintf(stderr, "solve: unknown scheme '%s'\n", scheme_text.c_str());
        return 1;
      }
      pasec::ExperimentConfig cfg = config_from(config_path);
      if (grid_step) cfg.solver.grid_step = *grid_step;
      const pasec::ResultRecord rec =
          pasec::solve_scheme(*scheme, sample, solve_n, solve_power, cfg);
      std::printf("scheme: %s\nwaveguides: %d\npower_dbm: %g\n",
                  std::string(pasec::scheme_name(*scheme)).c_str(), solve_n,
                  solve_power);
      std::printf("secrecy_bps_hz: %.9f\nconverged: %s\niterations: %d\n",
                  rec.secrecy, rec.converged ? "yes" : "no", rec.iterations);
      return 0;
    }

    if (oracle->parsed()) {
      if (suite == "quartic") return run_oracle_quartic(oracle_seed, oracle_cases);
      if (suite == "power-split") return run_oracle_power_split(oracle_seed, oracle_cases);
      if (suite == "sdp") return run_oracle_sdp(oracle_seed, oracle_cases);
      std::fprintf(stderr, "oracle: unknown suite '%s'\n", suite.c_str());
      return 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
