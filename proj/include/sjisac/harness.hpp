// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sjisac/frontend.hpp"
#include "sjisac/ofdm.hpp"
#include "sjisac/radar.hpp"

namespace sjisac {

enum class SweepKind { Comm, Radar };

struct RadarSettings {
  std::vector<Target> targets{{10.0, 0.0, {1.0, 0.0}}};
  WindowSpec cut_window{WindowType::Rectangular, 0.0};
  int cut_zp = 8;
  WindowSpec image_window{WindowType::Chebyshev, 100.0};
  int image_zp = 4;
  bool cuts = true;
  bool image_metrics = true;
  bool save_images = false;
};

struct SweepSpec {
  SweepKind kind = SweepKind::Comm;
  std::vector<double> rms_sj_s;
  std::vector<int> eta{1};
  std::vector<int> N{256};
  std::vector<std::string> n_cp{"0"};  // "0", "N/4" or "N"
  std::vector<Modulation> modulation{Modulation::QPSK};
  std::vector<SamplingMode> mode{SamplingMode::BB};
  Engine engine = Engine::FineGrid;
  ConverterModel converter;
  int M = 128;
  double B_hz = 500e6;
  double f_if_hz = 1e9;
  int seeds = 1;
  std::uint64_t base_seed = 1;
  std::filesystem::path mask_path;  // empty: shipped default
  bool per_subcarrier = false;      // sidecar (k, evm_db) files
  RadarSettings radar;

  static std::vector<double> default_rms_grid();
  /// Parameter domains and cross-field constraints; throws ConfigError.
  void validate() const;
};

SweepSpec load_sweep(const std::filesystem::path& path);
SweepSpec parse_sweep(std::string_view json_text, const std::filesystem::path& base_dir = {});

struct Tuple {
  SamplingMode mode;
  int eta;
  int N;
  int N_cp;
  Modulation modulation;
  double rms_sj_s;
  int seed_index;

  OfdmConfig ofdm(const SweepSpec& s) const;
  /// Key of the random draw: all axes except RMS and engine, so a seed's
  /// jitter shape and data are shared along the RMS axis.
  std::string draw_key() const;
  std::string config_key(Engine e) const;
};

std::vector<Tuple> expand(const SweepSpec& spec);

/// splitmix64 over (base, FNV-1a(key), FNV-1a(role)).
std::uint64_t derive_seed(std::uint64_t base, std::string_view key, std::string_view role);

inline constexpr int kSchemaVersion = 1;

struct ResultRow {
  std::string kind;
  SamplingMode mode;
  Engine engine;
  int eta, N, N_cp, M;
  Modulation modulation;
  double rms_sj_s;
  int seed_index;
  std::uint64_t seed_dac, seed_adc;
  double mean_evm_db, sir_db, mean_evm_cpe_db, sir_cpe_db;
  double pplr_db, pslr_range_db, pslr_doppler_db, islr_range_db, islr_doppler_db;
  double image_sir_mean_db, image_sir_min_db, stripe_mean_db, stripe_max_db;
  double runtime_s;
  rvec evm_per_subcarrier_db;  // sidecar only
};

struct RunOptions {
  int workers = 1;
  std::filesystem::path image_dir;  // radar image output when save_images
  std::function<void(std::size_t done, std::size_t total)> progress;
};

std::vector<ResultRow> run_comm(const SweepSpec& spec, const RunOptions& opt = {});
std::vector<ResultRow> run_radar(const SweepSpec& spec, const RunOptions& opt = {});

/// Single-tuple entry points, also used by the acceptance suite.
ResultRow run_comm_tuple(const SweepSpec& spec, const Tuple& t, const PsdMask& mask);
ResultRow run_radar_tuple(const SweepSpec& spec, const Tuple& t, const PsdMask& mask,
                          const std::filesystem::path& image_dir = {});

const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string csv_row(const ResultRow& r);

/// Rows aggregated over seeds: arithmetic mean of each dB column per config.
std::vector<ResultRow> aggregate(const std::vector<ResultRow>& rows);

/// results.csv, aggregate.csv, summary.json (+ evm_per_subcarrier/*.csv).
void report(const std::vector<ResultRow>& rows, const SweepSpec& spec, const std::filesystem::path& out_dir);

}  // namespace sjisac
