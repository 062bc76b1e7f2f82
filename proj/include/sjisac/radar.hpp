// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sjisac/ofdm.hpp"

namespace sjisac {

struct Target {
  double range_m = 0.0;       // bistatic, tau = range / c
  double doppler_norm = 0.0;  // f_D / delta_f
  cplx amplitude{1.0, 0.0};
};

enum class WindowType { Rectangular, Chebyshev };

struct WindowSpec {
  WindowType type = WindowType::Rectangular;
  double sidelobe_db = 100.0;  // Chebyshev attenuation
};

WindowSpec parse_window(const std::string& s);
std::string to_string(const WindowSpec& w);

/// Length-n window, peak normalized to 1. Chebyshev follows the usual
/// Dolph construction (same values as scipy.signal.windows.chebwin).
rvec make_window(const WindowSpec& w, int n);

/// Half width of the window's mainlobe to the first spectral null, in DFT bins.
double mainlobe_halfwidth_bins(const WindowSpec& w, int n);

SymbolGrid apply_targets(const SymbolGrid& tx, std::span<const Target> targets, const OfdmConfig& cfg);

// Power over (range bin p, Doppler bin q); q is centered so q = Q/2 is zero Doppler.
struct RadarImage {
  int P = 0;
  int Q = 0;
  int zp = 1;
  double range_step_m = 0.0;
  double doppler_step_norm = 0.0;
  WindowSpec window_range;
  WindowSpec window_doppler;
  std::vector<float> power;  // row-major: power[p*Q + q]

  float at(int p, int q) const { return power[static_cast<std::size_t>(p) * Q + q]; }
  double range_of(int p) const { return p * range_step_m; }
  double doppler_of(int q) const { return (q - Q / 2) * doppler_step_norm; }
  int range_bin(double range_m) const;
  int doppler_bin(double doppler_norm) const;
};

RadarImage range_doppler(const SymbolGrid& rx, const SymbolGrid& tx, const WindowSpec& w_range,
                         const WindowSpec& w_doppler, int zp, const OfdmConfig& cfg);

struct Peak {
  int p = 0;
  int q = 0;
  double power = 0.0;
};

Peak find_peak(const RadarImage& img);

/// Local maximum within half a nominal resolution cell of the expected
/// coordinates; DetectionError if the maximum sits on the search border.
Peak locate_target(const RadarImage& img, const Target& t);

enum class CutAxis { Range, Doppler };

double pplr(const RadarImage& img, const RadarImage& reference);

/// Cut metrics through `peak`. Mainlobe ends at the first local minimum on
/// each side; cuts are circular. kFloorDb when there is no sidelobe power.
double pslr_cut(const RadarImage& img, const Peak& peak, CutAxis axis);
double islr_cut(const RadarImage& img, const Peak& peak, CutAxis axis);
double pslr_1d(std::span<const double> cut, int peak);
double islr_1d(std::span<const double> cut, int peak);

struct Exclusion {
  int range_bins = 0;    // half width
  int doppler_bins = 0;  // half width
};

/// Max of two nominal cells and the window mainlobe, per dimension, times zp.
Exclusion default_exclusion(const RadarImage& img, const OfdmConfig& cfg);

struct ImageSir {
  double mean_db = 0.0;
  double min_db = 0.0;
};

ImageSir image_sir(const RadarImage& img, std::span<const Peak> targets, const Exclusion& ex);

struct StripeMetric {
  double ridge_mean_db = 0.0;  // mean ridge power over the floor median
  double ridge_max_db = 0.0;   // max ridge power over the floor median
};

/// Doppler-direction ridge at each target's range bin, outside all exclusion
/// zones, relative to the median of the off-target pixels. Worst target wins.
StripeMetric stripe_metric(const RadarImage& img, std::span<const Peak> targets, const Exclusion& ex);

/// Binary float64 grid with a text header file alongside (path + ".hdr").
void write_image(const std::filesystem::path& path, const RadarImage& img);

}  // namespace sjisac
