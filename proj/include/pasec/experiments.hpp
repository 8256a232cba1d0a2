#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pasec/model.hpp"
#include "pasec/multi_waveguide.hpp"

namespace pasec {

enum class Scheme { PasAn, PasNoAn, CasAn };

std::string_view scheme_name(Scheme s);                      // "pas-an", ...
std::optional<Scheme> parse_scheme(std::string_view name);

struct ExperimentConfig {
  double carrier_hz = 28e9;
  double n_eff = 1.4;
  double height = 3.0;       // m
  double region_side = 30.0; // m
  double noise_dbm = -90.0;  // both receivers
  std::vector<double> sweep_powers_dbm = {-10, -5, 0, 5, 10, 15, 20};
  double cdf_power_dbm = 10.0;
  int sweep_drops = 200;
  int cdf_drops = 500;
  std::uint64_t seed = 1;
  std::vector<Scheme> schemes = {Scheme::PasAn, Scheme::PasNoAn, Scheme::CasAn};
  std::vector<int> waveguide_counts = {2};
  int threads = 1;  // worker threads for the drop loop
  MultiSolveConfig solver;
};

// key = value per line, '#' comments; unknown keys throw std::runtime_error.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::string_view text);

struct ScenarioSample {
  Position bob;
  Position eve;
  int drop_index = 0;
};

// Drop positions are uniform over the region square at receiver height 0 and
// depend only on (seed, drop_index): every scheme, waveguide count, and power
// sees the same user placements.
ScenarioSample sample_scenario(std::uint64_t seed, int drop_index,
                               double region_side);

struct ResultRecord {
  int drop_index = 0;
  Scheme scheme = Scheme::PasAn;
  int num_waveguides = 0;
  double power_dbm = 0.0;
  double secrecy = 0.0;  // clamped
  bool converged = false;
  int iterations = 0;
  double wall_seconds = 0.0;  // in-memory diagnostic, never serialized
};

// Antenna x-positions of the fixed half-wavelength array centered at the
// region midpoint (y = 0, height d).
std::vector<double> cas_positions(const SystemParams& params);

// Runs one scheme on one drop.  Solver failures surface as converged = false
// with the best iterate's rate rather than as exceptions.
ResultRecord solve_scheme(Scheme scheme, const ScenarioSample& sample,
                          int num_waveguides, double power_dbm,
                          const ExperimentConfig& config);

struct MeanCurve {
  Scheme scheme = Scheme::PasAn;
  int num_waveguides = 0;
  std::vector<double> powers_dbm;
  std::vector<double> mean_secrecy;
};

struct SweepResult {
  std::vector<ResultRecord> records;  // ordered by (scheme, N, power, drop)
  std::vector<MeanCurve> curves;
};

SweepResult run_sweep(const ExperimentConfig& config);

struct CdfCurve {
  Scheme scheme = Scheme::PasAn;
  int num_waveguides = 0;
  double power_dbm = 0.0;
  std::vector<double> values;  // sorted secrecy rates
  std::vector<double> levels;  // (k + 1) / M
};

struct CdfResult {
  std::vector<ResultRecord> records;
  std::vector<CdfCurve> curves;
};

CdfResult run_cdf(const ExperimentConfig& config);

// Empirical distribution of `values`: sorted copy with levels (k + 1) / M.
CdfCurve make_cdf(std::span<const double> values);

struct DatTable {
  std::vector<std::string> columns;           // first column is the x axis
  std::vector<std::vector<double>> rows;
};

// Whitespace-separated numeric table with a '#'-prefixed header line.
// Formatting is locale-independent and deterministic.
void emit_dat(const DatTable& table, const std::filesystem::path& path);
void emit_csv(std::span<const ResultRecord> records,
              const std::filesystem::path& path);

// File naming used by the command-line driver.
std::string mean_dat_name(Scheme s, int num_waveguides);
std::string cdf_dat_name(Scheme s, int num_waveguides, double power_dbm);

void write_sweep_outputs(const SweepResult& result,
                         const std::filesystem::path& out_dir);
void write_cdf_outputs(const CdfResult& result,
                       const std::filesystem::path& out_dir);

}  // namespace pasec
