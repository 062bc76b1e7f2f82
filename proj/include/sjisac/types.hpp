// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sjisac {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;

// Sentinels used wherever a dB quantity has no finite value.
inline constexpr double kFloorDb = -300.0;
inline constexpr double kCeilDb = 300.0;

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct FramingError : std::length_error {
  using std::length_error::length_error;
};
struct DetectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double power_db(double ratio) {
  if (!(ratio > 0.0)) return kFloorDb;
  if (std::isinf(ratio)) return kCeilDb;
  return std::clamp(10.0 * std::log10(ratio), kFloorDb, kCeilDb);
}

enum class Domain { BasebandComplex, IfReal };

struct FrameLayout {
  int eta = 1;
  int N = 0;
  int N_cp = 0;
  int M = 0;
  std::size_t length() const {
    return static_cast<std::size_t>(M) * eta * (N + N_cp);
  }
};

// Time samples at rate_hz. IF-real streams keep a zero imaginary part.
struct SampleStream {
  cvec data;
  double rate_hz = 0.0;
  Domain domain = Domain::BasebandComplex;
  std::optional<FrameLayout> layout;

  std::size_t size() const { return data.size(); }
  double period() const { return 1.0 / rate_hz; }
};

}  // namespace sjisac
