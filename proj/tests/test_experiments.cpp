#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pasec/experiments.hpp"
#include "pasec/single_waveguide.hpp"

using namespace pasec;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig fast_config() {
  ExperimentConfig cfg;
  cfg.solver.grid_step = 0.25;
  cfg.solver.outer_tol = 1e-3;
  cfg.solver.inner_tol = 1e-3;
  return cfg;
}

}  // namespace

TEST_CASE("fixed-array positions are half-wavelength spaced around the center") {
  const SystemParams p2 = make_params(28e9, 1.4, 3.0, 30.0, 2, -90.0, -90.0);
  const std::vector<double> xs2 = cas_positions(p2);
  REQUIRE(xs2.size() == 2);
  CHECK(xs2[0] == doctest::Approx(14.997323281625).epsilon(1e-12));
  CHECK(xs2[1] == doctest::Approx(15.002676718375).epsilon(1e-12));

  const SystemParams p1 = make_params(28e9, 1.4, 3.0, 30.0, 1, -90.0, -90.0);
  const std::vector<double> xs1 = cas_positions(p1);
  REQUIRE(xs1.size() == 1);
  CHECK(xs1[0] == 15.0);

  const SystemParams p4 = make_params(28e9, 1.4, 3.0, 30.0, 4, -90.0, -90.0);
  const std::vector<double> xs4 = cas_positions(p4);
  REQUIRE(xs4.size() == 4);
  double mean = 0.0;
  for (double x : xs4) mean += x / 4.0;
  CHECK(mean == doctest::Approx(15.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) {
    CHECK(xs4[i] - xs4[i - 1] ==
          doctest::Approx(0.5 * p4.wavelength).epsilon(1e-12));
  }
}

TEST_CASE("scenario drops are deterministic and inside the region") {
  const ScenarioSample a = sample_scenario(7, 3, 30.0);
  const ScenarioSample b = sample_scenario(7, 3, 30.0);
  CHECK(a.bob.x == b.bob.x);
  CHECK(a.bob.y == b.bob.y);
  CHECK(a.eve.x == b.eve.x);
  CHECK(a.eve.y == b.eve.y);
  CHECK(a.drop_index == 3);

  for (int drop = 0; drop < 50; ++drop) {
    const ScenarioSample s = sample_scenario(7, drop, 30.0);
    for (double v : {s.bob.x, s.bob.y, s.eve.x, s.eve.y}) {
      CHECK(v >= 0.0);
      CHECK(v < 30.0);
    }
    CHECK(s.bob.z == 0.0);
    CHECK(s.eve.z == 0.0);
  }

  const ScenarioSample c = sample_scenario(7, 4, 30.0);
  CHECK(a.bob.x != c.bob.x);
  const ScenarioSample d = sample_scenario(8, 3, 30.0);
  CHECK(a.bob.x != d.bob.x);
}

TEST_CASE("scheme names round trip") {
  for (Scheme s : {Scheme::PasAn, Scheme::PasNoAn, Scheme::CasAn}) {
    const auto parsed = parse_scheme(scheme_name(s));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == s);
  }
  CHECK(!parse_scheme("bogus").has_value());
}

TEST_CASE("config parsing covers every key") {
  const std::string text =
      "# experiment setup\n"
      "carrier_hz = 28e9\n"
      "n_eff = 1.4\n"
      "height = 3\n"
      "region_side = 30\n"
      "noise_dbm = -90\n"
      "sweep_powers_dbm = -10, 0, 10\n"
      "cdf_power_dbm = 5\n"
      "sweep_drops = 7\n"
      "cdf_drops = 9\n"
      "seed = 42   # trailing comment\n"
      "threads = 2\n"
      "schemes = pas-an, cas-an\n"
      "waveguide_counts = 2, 4\n"
      "grid_step = 0.2\n"
      "outer_tol = 1e-3\n"
      "inner_tol = 1e-3\n"
      "max_outer_iters = 8\n"
      "max_inner_iters = 12\n";
  const ExperimentConfig cfg = parse_config(text);
  CHECK(cfg.carrier_hz == 28e9);
  CHECK(cfg.n_eff == 1.4);
  CHECK(cfg.height == 3.0);
  CHECK(cfg.region_side == 30.0);
  CHECK(cfg.noise_dbm == -90.0);
  CHECK(cfg.sweep_powers_dbm == std::vector<double>{-10.0, 0.0, 10.0});
  CHECK(cfg.cdf_power_dbm == 5.0);
  CHECK(cfg.sweep_drops == 7);
  CHECK(cfg.cdf_drops == 9);
  CHECK(cfg.seed == 42);
  CHECK(cfg.threads == 2);
  REQUIRE(cfg.schemes.size() == 2);
  CHECK(cfg.schemes[0] == Scheme::PasAn);
  CHECK(cfg.schemes[1] == Scheme::CasAn);
  CHECK(cfg.waveguide_counts == std::vector<int>{2, 4});
  CHECK(cfg.solver.grid_step == 0.2);
  CHECK(cfg.solver.outer_tol == 1e-3);
  CHECK(cfg.solver.inner_tol == 1e-3);
  CHECK(cfg.solver.max_outer_iters == 8);
  CHECK(cfg.solver.max_inner_iters == 12);
}

TEST_CASE("config parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_config("mystery_key = 1\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("sweep_drops = soon\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("just some words\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("schemes = pas-an, gps\n"), std::runtime_error);
}

TEST_CASE("empirical distribution construction") {
  const std::vector<double> v = {3.0, 1.0, 2.0, 4.0};
  const CdfCurve c = make_cdf(v);
  CHECK(c.values == std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK(c.levels == std::vector<double>{0.25, 0.5, 0.75, 1.0});

  const std::vector<double> zeros = {0.0, 0.0, 0.0};
  const CdfCurve z = make_cdf(zeros);
  CHECK(z.values == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(z.levels.back() == 1.0);
  CHECK(z.levels.front() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("beam-only single-waveguide scheme matches the closed form") {
  const ExperimentConfig cfg = fast_config();
  const ScenarioSample sample = sample_scenario(cfg.seed, 0, cfg.region_side);
  const ResultRecord rec = solve_scheme(Scheme::PasNoAn, sample, 1, 10.0, cfg);
  CHECK(rec.converged);
  CHECK(rec.iterations == 1);
  CHECK(rec.scheme == Scheme::PasNoAn);
  CHECK(rec.num_waveguides == 1);
  CHECK(rec.power_dbm == 10.0);
  CHECK(rec.drop_index == 0);

  const SystemParams params = make_params(cfg.carrier_hz, cfg.n_eff, cfg.height,
                                          cfg.region_side, 1, cfg.noise_dbm,
                                          cfg.noise_dbm);
  const double power = dbm_to_linear(10.0);
  const ScalarScenario scen{sample.bob, sample.eve, params, power};
  const double x = optimal_position_single(power, 0.0, scen);
  CHECK(rec.secrecy == std::max(0.0, scalar_secrecy_rate(power, 0.0, x, scen)));
}

TEST_CASE("per-drop solves are bitwise reproducible") {
  const ExperimentConfig cfg = fast_config();
  const ScenarioSample sample = sample_scenario(1, 2, cfg.region_side);
  const ResultRecord a = solve_scheme(Scheme::PasAn, sample, 2, 10.0, cfg);
  const ResultRecord b = solve_scheme(Scheme::PasAn, sample, 2, 10.0, cfg);
  CHECK(a.secrecy == b.secrecy);
  CHECK(a.iterations == b.iterations);
  CHECK(a.converged == b.converged);

  const ResultRecord c = solve_scheme(Scheme::CasAn, sample, 2, 10.0, cfg);
  const ResultRecord d = solve_scheme(Scheme::CasAn, sample, 2, 10.0, cfg);
  CHECK(c.secrecy == d.secrecy);
}

TEST_CASE("sweep grid layout and means") {
  ExperimentConfig cfg = fast_config();
  cfg.sweep_powers_dbm = {0.0, 20.0};
  cfg.sweep_drops = 3;
  cfg.schemes = {Scheme::PasAn, Scheme::PasNoAn};
  cfg.waveguide_counts = {2};

  const SweepResult res = run_sweep(cfg);
  REQUIRE(res.records.size() == 2 * 2 * 3);
  REQUIRE(res.curves.size() == 2);

  const std::size_t per_combo = 2 * 3;
  for (std::size_t ci = 0; ci < 2; ++ci) {
    const Scheme expect = cfg.schemes[ci];
    for (std::size_t pi = 0; pi < 2; ++pi) {
      double sum = 0.0;
      for (std::size_t d = 0; d < 3; ++d) {
        const ResultRecord& r = res.records[ci * per_combo + pi * 3 + d];
        CHECK(r.scheme == expect);
        CHECK(r.num_waveguides == 2);
        CHECK(r.power_dbm == cfg.sweep_powers_dbm[pi]);
        CHECK(r.drop_index == static_cast<int>(d));
        CHECK(r.secrecy >= 0.0);
        sum += r.secrecy;
      }
      CHECK(res.curves[ci].mean_secrecy[pi] == doctest::Approx(sum / 3.0));
      CHECK(res.curves[ci].powers_dbm[pi] == cfg.sweep_powers_dbm[pi]);
    }
    CHECK(res.curves[ci].scheme == expect);
  }

  // same drops, same budget: jamming-capable optimization cannot do worse
  for (std::size_t pi = 0; pi < 2; ++pi) {
    for (std::size_t d = 0; d < 3; ++d) {
      const double with_an = res.records[0 * per_combo + pi * 3 + d].secrecy;
      const double without = res.records[1 * per_combo + pi * 3 + d].secrecy;
      CHECK(with_an >= without - 1e-6);
    }
  }

  // more transmit power should raise the averaged rate on this small set
  CHECK(res.curves[0].mean_secrecy[1] >= res.curves[0].mean_secrecy[0] - 1e-3);
}

TEST_CASE("sweep input validation") {
  ExperimentConfig cfg = fast_config();
  cfg.schemes = {};
  CHECK_THROWS_AS(run_sweep(cfg), std::runtime_error);

  ExperimentConfig nodrops = fast_config();
  nodrops.sweep_drops = 0;
  CHECK_THROWS_AS(run_sweep(nodrops), std::runtime_error);

  ExperimentConfig nopower = fast_config();
  nopower.sweep_powers_dbm = {};
  CHECK_THROWS_AS(run_sweep(nopower), std::runtime_error);
}

TEST_CASE("distribution run produces one sorted curve per combo") {
  ExperimentConfig cfg = fast_config();
  cfg.cdf_drops = 4;
  cfg.cdf_power_dbm = 10.0;
  cfg.schemes = {Scheme::PasNoAn};
  cfg.waveguide_counts = {1};

  const CdfResult res = run_cdf(cfg);
  REQUIRE(res.records.size() == 4);
  REQUIRE(res.curves.size() == 1);
  const CdfCurve& c = res.curves[0];
  CHECK(c.power_dbm == 10.0);
  CHECK(c.num_waveguides == 1);
  REQUIRE(c.values.size() == 4);
  CHECK(c.levels.back() == 1.0);
  for (std::size_t i = 1; i < c.values.size(); ++i) {
    CHECK(c.values[i] >= c.values[i - 1]);
    CHECK(c.levels[i] > c.levels[i - 1]);
  }
}

TEST_CASE("table serialization is exact and deterministic") {
  const fs::path dir = fresh_dir("pasec_emit_test");
  DatTable table;
  table.columns = {"power_dbm", "mean_secrecy_bps_hz"};
  table.rows = {{0.0, 1.5}, {10.0, 2.25}};
  emit_dat(table, dir / "t.dat");
  CHECK(read_file(dir / "t.dat") ==
        "# power_dbm mean_secrecy_bps_hz\n0 1.5\n10 2.25\n");
  emit_dat(table, dir / "t2.dat");
  CHECK(read_file(dir / "t.dat") == read_file(dir / "t2.dat"));

  ResultRecord rec;
  rec.drop_index = 0;
  rec.scheme = Scheme::PasAn;
  rec.num_waveguides = 2;
  rec.power_dbm = 10.0;
  rec.secrecy = 1.25;
  rec.converged = true;
  rec.iterations = 3;
  rec.wall_seconds = 123.0;  // timing must never reach the serialized output
  const std::vector<ResultRecord> recs = {rec};
  emit_csv(recs, dir / "r.csv");
  CHECK(read_file(dir / "r.csv") ==
        "drop_index,scheme,num_waveguides,power_dbm,secrecy_bps_hz,converged,"
        "iterations\n0,pas-an,2,10,1.25,1,3\n");
}

TEST_CASE("output file naming") {
  CHECK(mean_dat_name(Scheme::PasAn, 2) == "mean_sr_pas-an_N2.dat");
  CHECK(mean_dat_name(Scheme::PasNoAn, 6) == "mean_sr_pas-no-an_N6.dat");
  CHECK(cdf_dat_name(Scheme::CasAn, 1, 10.0) == "cdf_cas-an_N1_P10.dat");
  CHECK(cdf_dat_name(Scheme::PasAn, 4, -5.0) == "cdf_pas-an_N4_P-5.dat");
  CHECK(cdf_dat_name(Scheme::PasAn, 2, 2.5) == "cdf_pas-an_N2_P2.5.dat");
}

TEST_CASE("sweep outputs are byte-identical across thread counts") {
  ExperimentConfig cfg = fast_config();
  cfg.sweep_powers_dbm = {0.0, 10.0};
  cfg.sweep_drops = 6;
  cfg.schemes = {Scheme::PasNoAn, Scheme::CasAn};
  cfg.waveguide_counts = {1};

  cfg.threads = 1;
  const SweepResult serial = run_sweep(cfg);
  const fs::path dir1 = fresh_dir("pasec_sweep_serial");
  write_sweep_outputs(serial, dir1);

  cfg.threads = 3;
  const SweepResult threaded = run_sweep(cfg);
  const fs::path dir2 = fresh_dir("pasec_sweep_threaded");
  write_sweep_outputs(threaded, dir2);

  const std::vector<std::string> names = {
      "records.csv", mean_dat_name(Scheme::PasNoAn, 1),
      mean_dat_name(Scheme::CasAn, 1)};
  for (const auto& name : names) {
    CHECK(read_file(dir1 / name) == read_file(dir2 / name));
  }

  // the distribution writer shares the same record serialization
  ExperimentConfig ccfg = fast_config();
  ccfg.cdf_drops = 5;
  ccfg.schemes = {Scheme::PasNoAn};
  ccfg.waveguide_counts = {1};
  const CdfResult cres = run_cdf(ccfg);
  const fs::path dir3 = fresh_dir("pasec_cdf_out");
  write_cdf_outputs(cres, dir3);
  CHECK(fs::exists(dir3 / cdf_dat_name(Scheme::PasNoAn, 1, ccfg.cdf_power_dbm)));
  CHECK(fs::exists(dir3 / "records.csv"));
  const std::string dat =
      read_file(dir3 / cdf_dat_name(Scheme::PasNoAn, 1, ccfg.cdf_power_dbm));
  CHECK(dat.rfind("# secrecy_bps_hz cdf\n", 0) == 0);
}
