// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>

#include "sjisac/types.hpp"

namespace sjisac {

inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double a = kPi * x;
  return std::sin(a) / a;
}

/// Cubic Lagrange interpolation of x at fractional index pos, in Farrow form.
/// Taps outside [0, n) are clamped to the end samples.
template <class T>
T farrow_cubic(const T* x, std::ptrdiff_t n, double pos) {
  const double fl = std::floor(pos);
  const double mu = pos - fl;
  const auto b = static_cast<std::ptrdiff_t>(fl);
  auto at = [&](std::ptrdiff_t i) { return x[std::clamp<std::ptrdiff_t>(i, 0, n - 1)]; };
  const T xm1 = at(b - 1), x0 = at(b), x1 = at(b + 1), x2 = at(b + 2);
  const T c1 = x1 - xm1 / 3.0 - x0 / 2.0 - x2 / 6.0;
  const T c2 = (xm1 + x1) / 2.0 - x0;
  const T c3 = (x2 - xm1) / 6.0 + (x0 - x1) / 2.0;
  return ((c3 * mu + c2) * mu + c1) * mu + x0;
}

/// Band-limited interpolant of s at absolute times t_query (seconds), full O(L*Q) sum.
cvec sinc_eval(const SampleStream& s, std::span<const double> t_query);

/// Output nu is the cubic interpolation of s at nu*T + delay_s[nu]; |delay| < T.
SampleStream farrow_eval(const SampleStream& s, std::span<const double> delay_s);

/// Kaiser-windowed sinc low-pass for L-fold rate change, cutoff at the
/// low-rate Nyquist frequency, 2*half_taps*L + 1 taps, normalized to sum L.
/// This is the least-squares (firls) ideal-step design times a Kaiser window.
rvec design_rate_filter(int L, int half_taps, double kaiser_beta);

}  // namespace sjisac
