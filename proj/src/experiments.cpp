#include "pasec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pasec/rng.hpp"
#include "pasec/single_waveguide.hpp"

namespace pasec {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::PasAn: return "pas-an";
    case Scheme::PasNoAn: return "pas-no-an";
    case Scheme::CasAn: return "cas-an";
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "pas-an") return Scheme::PasAn;
  if (name == "pas-no-an") return Scheme::PasNoAn;
  if (name == "cas-an") return Scheme::CasAn;
  return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad number for '" + key + "': " + value);
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad integer for '" + key + "': " + value);
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

void format_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  out += buf;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t start = 0;
  int lineno = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line =
        text.substr(start, nl == std::string_view::npos ? text.size() - start
                                                        : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    if (key == "carrier_hz") {
      cfg.carrier_hz = parse_double(key, value);
    } else if (key == "n_eff") {
      cfg.n_eff = parse_double(key, value);
    } else if (key == "height") {
      cfg.height = parse_double(key, value);
    } else if (key == "region_side") {
      cfg.region_side = parse_double(key, value);
    } else if (key == "noise_dbm") {
      cfg.noise_dbm = parse_double(key, value);
    } else if (key == "cdf_power_dbm") {
      cfg.cdf_power_dbm = parse_double(key, value);
    } else if (key == "sweep_powers_dbm") {
      cfg.sweep_powers_dbm.clear();
      for (const auto& item : split_list(value)) {
        cfg.sweep_powers_dbm.push_back(parse_double(key, item));
      }
    } else if (key == "sweep_drops") {
      cfg.sweep_drops = static_cast<int>(parse_long(key, value));
    } else if (key == "cdf_drops") {
      cfg.cdf_drops = static_cast<int>(parse_long(key, value));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_long(key, value));
    } else if (key == "schemes") {
      cfg.schemes.clear();
      for (const auto& item : split_list(value)) {
        const auto s = parse_scheme(item);
        if (!s) throw std::runtime_error("config: unknown scheme '" + item + "'");
        cfg.schemes.push_back(*s);
      }
    } else if (key == "waveguide_counts") {
      cfg.waveguide_counts.clear();
      for (const auto& item : split_list(value)) {
        cfg.waveguide_counts.push_back(static_cast<int>(parse_long(key, item)));
      }
    } else if (key == "grid_step") {
      cfg.solver.grid_step = parse_double(key, value);
    } else if (key == "outer_tol") {
      cfg.solver.outer_tol = parse_double(key, value);
    } else if (key == "inner_tol") {
      cfg.solver.inner_tol = parse_double(key, value);
    } else if (key == "max_outer_iters") {
      cfg.solver.max_outer_iters = static_cast<int>(parse_long(key, value));
    } else if (key == "max_inner_iters") {
      cfg.solver.max_inner_iters = static_cast<int>(parse_long(key, value));
    } else {
      throw std::runtime_error("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ScenarioSample sample_scenario(std::uint64_t seed, int drop_index,
                               double region_side) {
  RandomStream stream(seed, static_cast<std::uint64_t>(drop_index));
  ScenarioSample s;
  s.drop_index = drop_index;
  s.bob.x = stream.next_unit() * region_side;
  s.bob.y = stream.next_unit() * region_side;
  s.eve.x = stream.next_unit() * region_side;
  s.eve.y = stream.next_unit() * region_side;
  return s;
}

std::vector<double> cas_positions(const SystemParams& params) {
  const int n = params.num_waveguides;
  const double spacing = 0.5 * params.wavelength;
  const double center = 0.5 * params.region_side;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = center + (i - 0.5 * (n - 1)) * spacing;
  }
  return xs;
}

namespace {

ResultRecord solve_cas(const ScenarioSample& sample, const SystemParams& params,
                       double power, const MultiSolveConfig& solver) {
  const std::vector<double> xs = cas_positions(params);
  const int n = params.num_waveguides;
  Eigen::VectorXcd h_bob(n), h_eve(n);
  for (int i = 0; i < n; ++i) {
    const Position pa{xs[i], 0.0, params.height};
    h_bob(i) = channel_coeff(sample.bob, pa, pa, params);
    h_eve(i) = channel_coeff(sample.eve, pa, pa, params);
  }
  const Eigen::MatrixXcd bob_outer = outer_product(h_bob);
  const Eigen::MatrixXcd eve_outer = outer_product(h_eve);

  BeamformingState state;
  const double hb2 = h_bob.squaredNorm();
  state.beam_cov = hb2 > 0.0
                       ? Eigen::MatrixXcd((power / hb2) * bob_outer)
                       : Eigen::MatrixXcd((power / n) *
                                          Eigen::MatrixXcd::Identity(n, n));
  state.noise_cov = Eigen::MatrixXcd::Zero(n, n);
  state.pa_x = xs;
  double sr = secrecy_rate(h_bob, h_eve, state, params).secrecy_unclamped;

  ResultRecord rec;
  rec.iterations = 0;
  for (int inner = 1; inner <= solver.max_inner_iters; ++inner) {
    rec.iterations = inner;
    const double g = gamma_star(state.beam_cov, state.noise_cov, eve_outer,
                                params.noise_eve);
    const FixedGammaResult fg =
        solve_fixed_gamma(g, bob_outer, eve_outer, params.noise_bob,
                          params.noise_eve, power, true, solver.sdp);
    BeamformingState cand = state;
    cand.beam_cov = fg.beam_cov;
    cand.noise_cov = fg.noise_cov;
    const double sr_cand = secrecy_rate(h_bob, h_eve, cand, params).secrecy_unclamped;
    const double improve = sr_cand - sr;
    if (sr_cand > sr) {
      state = cand;
      sr = sr_cand;
    }
    if (improve <= solver.inner_tol) {
      rec.converged = true;
      break;
    }
  }
  rec.secrecy = std::max(0.0, sr);
  return rec;
}

}  // namespace

ResultRecord solve_scheme(Scheme scheme, const ScenarioSample& sample,
                          int num_waveguides, double power_dbm,
                          const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams params =
      make_params(config.carrier_hz, config.n_eff, config.height,
                  config.region_side, num_waveguides, config.noise_dbm,
                  config.noise_dbm);
  const double power = dbm_to_linear(power_dbm);

  ResultRecord rec;
  rec.drop_index = sample.drop_index;
  rec.scheme = scheme;
  rec.num_waveguides = num_waveguides;
  rec.power_dbm = power_dbm;

  switch (scheme) {
    case Scheme::PasAn: {
      if (num_waveguides == 1) {
        const ScalarScenario scen{sample.bob, sample.eve, params, power};
        const SingleSolveResult res = solve_single(scen);
        rec.secrecy = res.rates.secrecy;
        rec.converged = res.converged;
        rec.iterations = res.iterations;
      } else {
        MultiSolveConfig solver = config.solver;
        solver.with_artificial_noise = true;
        const Scenario scen{sample.bob, sample.eve, params};
        const MultiSolveResult res = solve_multi(scen, power, solver);
        rec.secrecy = res.rates.secrecy;
        rec.converged = res.converged;
        rec.iterations = res.outer_iterations;
      }
      break;
    }
    case Scheme::PasNoAn: {
      if (num_waveguides == 1) {
        // With the whole budget on the beam the position step is exact in one
        // pass; there is nothing to alternate.
        const ScalarScenario scen{sample.bob, sample.eve, params, power};
        const double x = optimal_position_single(power, 0.0, scen);
        rec.secrecy = std::max(0.0, scalar_secrecy_rate(power, 0.0, x, scen));
        rec.converged = true;
        rec.iterations = 1;
      } else {
        MultiSolveConfig solver = config.solver;
        solver.with_artificial_noise = false;
        const Scenario scen{sample.bob, sample.eve, params};
        const MultiSolveResult res = solve_multi(scen, power, solver);
        rec.secrecy = res.rates.secrecy;
        rec.converged = res.converged;
        rec.iterations = res.outer_iterations;
      }
      break;
    }
    case Scheme::CasAn: {
      const ResultRecord cas = solve_cas(sample, params, power, config.solver);
      rec.secrecy = cas.secrecy;
      rec.converged = cas.converged;
      rec.iterations = cas.iterations;
      break;
    }
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

namespace {

struct Combo {
  Scheme scheme;
  int num_waveguides;
};

std::vector<Combo> combos_of(const ExperimentConfig& cfg) {
  std::vector<Combo> out;
  for (Scheme s : cfg.schemes) {
    for (int n : cfg.waveguide_counts) out.push_back({s, n});
  }
  if (out.empty()) throw std::runtime_error("experiment: no scheme/waveguide combos");
  return out;
}

// Runs every (combo, power, drop) cell into a dense record array whose layout
// does not depend on the number of worker threads.
std::vector<ResultRecord> run_grid(const ExperimentConfig& cfg,
                                   const std::vector<Combo>& combos,
                                   const std::vector<double>& powers, int drops) {
  if (drops < 1) throw std::runtime_error("experiment: need at least one drop");
  const std::size_t per_combo = powers.size() * static_cast<std::size_t>(drops);
  std::vector<ResultRecord> records(combos.size() * per_combo);

  auto run_cell = [&](std::size_t flat) {
    const std::size_t ci = flat / per_combo;
    const std::size_t rem = flat % per_combo;
    const std::size_t pi = rem / drops;
    const int drop = static_cast<int>(rem % drops);
    const ScenarioSample sample = sample_scenario(cfg.seed, drop, cfg.region_side);
    ResultRecord& rec = records[flat];
    try {
      rec = solve_scheme(combos[ci].scheme, sample, combos[ci].num_waveguides,
                         powers[pi], cfg);
    } catch (const std::exception&) {
      rec = ResultRecord{};
      rec.drop_index = drop;
      rec.scheme = combos[ci].scheme;
      rec.num_waveguides = combos[ci].num_waveguides;
      rec.power_dbm = powers[pi];
      rec.secrecy = 0.0;
      rec.converged = false;
    }
  };

  const int nthreads = std::max(1, cfg.threads);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < records.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= records.size()) break;
          run_cell(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return records;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg) {
  const std::vector<Combo> combos = combos_of(cfg);
  if (cfg.sweep_powers_dbm.empty()) {
    throw std::runtime_error("experiment: empty power sweep");
  }
  SweepResult out;
  out.records = run_grid(cfg, combos, cfg.sweep_powers_dbm, cfg.sweep_drops);

  const std::size_t drops = cfg.sweep_drops;
  const std::size_t per_combo = cfg.sweep_powers_dbm.size() * drops;
  for (std::size_t ci = 0; ci < combos.size(); ++ci) {
    MeanCurve curve;
    curve.scheme = combos[ci].scheme;
    curve.num_waveguides = combos[ci].num_waveguides;
    for (std::size_t pi = 0; pi < cfg.sweep_powers_dbm.size(); ++pi) {
      double sum = 0.0;
      for (std::size_t d = 0; d < drops; ++d) {
        sum += out.records[ci * per_combo + pi * drops + d].secrecy;
      }
      curve.powers_dbm.push_back(cfg.sweep_powers_dbm[pi]);
      curve.mean_secrecy.push_back(sum / static_cast<double>(drops));
    }
    out.curves.push_back(std::move(curve));
  }
  return out;
}

CdfResult run_cdf(const ExperimentConfig& cfg) {
  const std::vector<Combo> combos = combos_of(cfg);
  const std::vector<double> powers = {cfg.cdf_power_dbm};
  CdfResult out;
  out.records = run_grid(cfg, combos, powers, cfg.cdf_drops);

  const std::size_t drops = cfg.cdf_drops;
  for (std::size_t ci = 0; ci < combos.size(); ++ci) {
    std::vector<double> values(drops);
    for (std::size_t d = 0; d < drops; ++d) {
      values[d] = out.records[ci * drops + d].secrecy;
    }
    CdfCurve curve = make_cdf(values);
    curve.scheme = combos[ci].scheme;
    curve.num_waveguides = combos[ci].num_waveguides;
    curve.power_dbm = cfg.cdf_power_dbm;
    out.curves.push_back(std::move(curve));
  }
  return out;
}

CdfCurve make_cdf(std::span<const double> values) {
  CdfCurve curve;
  curve.values.assign(values.begin(), values.end());
  std::sort(curve.values.begin(), curve.values.end());
  const double m = static_cast<double>(curve.values.size());
  curve.levels.resize(curve.values.size());
  for (std::size_t k = 0; k < curve.values.size(); ++k) {
    curve.levels[k] = static_cast<double>(k + 1) / m;
  }
  return curve;
}

void emit_dat(const DatTable& table, const std::filesystem::path& path) {
  std::string out = "#";
  for (const auto& c : table.columns) {
    out += ' ';
    out += c;
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ' ';
      format_number(out, row[i]);
    }
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_dat: cannot open " + path.string());
  f << out;
}

void emit_csv(std::span<const ResultRecord> records,
              const std::filesystem::path& path) {
  std::string out =
      "drop_index,scheme,num_waveguides,power_dbm,secrecy_bps_hz,converged,"
      "iterations\n";
  for (const auto& r : records) {
    out += std::to_string(r.drop_index);
    out += ',';
    out += scheme_name(r.scheme);
    out += ',';
    out += std::to_string(r.num_waveguides);
    out += ',';
    format_number(out, r.power_dbm);
    out += ',';
    format_number(out, r.secrecy);
    out += ',';
    out += r.converged ? '1' : '0';
    out += ',';
    out += std::to_string(r.iterations);
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_csv: cannot open " + path.string());
  f << out;
}

std::string mean_dat_name(Scheme s, int num_waveguides) {
  std::string out = "mean_sr_";
  out += scheme_name(s);
  out += "_N" + std::to_string(num_waveguides) + ".dat";
  return out;
}

std::string cdf_dat_name(Scheme s, int num_waveguides, double power_dbm) {
  char p[32];
  std::snprintf(p, sizeof(p), "%g", power_dbm);
  std::string out = "cdf_";
  out += scheme_name(s);
  out += "_N" + std::to_string(num_waveguides) + "_P" + p + ".dat";
  return out;
}

void write_sweep_outputs(const SweepResult& result,
                         const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& curve : result.curves) {
    DatTable table;
    table.columns = {"power_dbm", "mean_secrecy_bps_hz"};
    for (std::size_t i = 0; i < curve.powers_dbm.size(); ++i) {
      table.rows.push_back({curve.powers_dbm[i], curve.mean_secrecy[i]});
    }
    emit_dat(table, out_dir / mean_dat_name(curve.scheme, curve.num_waveguides));
  }
  emit_csv(result.records, out_dir / "records.csv");
}

void write_cdf_outputs(const CdfResult& result,
                       const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& curve : result.curves) {
    DatTable table;
    table.columns = {"secrecy_bps_hz", "cdf"};
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
      table.rows.push_back({curve.values[i], curve.levels[i]});
    }
    emit_dat(table, out_dir / cdf_dat_name(curve.scheme, curve.num_waveguides,
                                           curve.power_dbm));
  }
  emit_csv(result.records, out_dir / "records.csv");
}

}  // namespace pasec
