// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sjisac/types.hpp"

namespace sjisac {

struct PsdPoint {
  double offset_hz;
  double level_dbc_hz;  // may be -inf for an empty band
};

// Double-sided phase-noise PSD, piecewise linear in (log10 f, dB).
// Constant extrapolation below the first and above the last breakpoint.
class PsdMask {
 public:
  explicit PsdMask(std::vector<PsdPoint> points);

  static PsdMask flat(double level_dbc_hz);
  static PsdMask load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  double level_db(double f_hz) const;
  double density(double f_hz) const;  // rad^2/Hz
  const std::vector<PsdPoint>& points() const { return points_; }

 private:
  std::vector<PsdPoint> points_;
};

struct PnTrace {
  rvec samples;  // rad
  double fs_hz = 0.0;
  std::uint64_t seed = 0;
};

struct JitterTrace {
  rvec samples;  // seconds, positional: sample nu <-> nominal instant nu/fs
  double fs_hz = 0.0;
  double rms_s = 0.0;
  std::uint64_t seed = 0;
};

double rms(std::span<const double> x);

/// Stationary Gaussian phase noise with the mask's PSD, by frequency-domain shaping.
PnTrace synth_pn(const PsdMask& mask, double fs_hz, std::size_t length, std::uint64_t seed);

JitterTrace pn_to_jitter(const PnTrace& pn, double fs_eta_hz);

JitterTrace scale_to_rms(const JitterTrace& j, double target_rms_s);

/// 10 log10 of the PSD integrated over +-[f_lo, f_hi]. Zero width gives kFloorDb.
double integrated_pn_level(const PsdMask& mask, double f_lo, double f_hi,
                           std::size_t nodes = 4096);

/// synth_pn -> pn_to_jitter -> scale_to_rms in one call.
JitterTrace make_jitter(const PsdMask& mask, double fs_hz, std::size_t length,
                        std::uint64_t seed, double target_rms_s);

void write_trace(const std::filesystem::path& path, const JitterTrace& trace);
JitterTrace read_trace(const std::filesystem::path& path);

/// The shipped LMX2594-shaped default mask.
PsdMask default_mask();

}  // namespace sjisac
