// SPDX-License-Identifier: Apache-2.0
#include "sjisac/resample.hpp"

#include <fmt/format.h>

namespace sjisac {

cvec sinc_eval(const SampleStream& s, std::span<const double> t_query) {
  if (s.size() < 2) throw ConfigError("sinc_eval: stream needs at least 2 samples");
  const double T = s.period();
  cvec out(t_query.size());
  for (std::size_t q = 0; q < t_query.size(); ++q) {
    const double u = t_query[q] / T;
    if (!std::isfinite(u)) throw ConfigError("sinc_eval: non-finite query time");
    // sin(pi(u - nu)) alternates sign with nu; evaluate it once.
    const double s0 = std::sin(kPi * (u - std::floor(u)));
    const auto base = static_cast<long long>(std::floor(u));
    cplx acc{};
    for (std::size_t nu = 0; nu < s.size(); ++nu) {
      const double d = u - static_cast<double>(nu);
      double k;
      if (d == 0.0) {
        k = 1.0;
      } else {
        const long long shift = base - static_cast<long long>(nu);
        k = ((shift & 1) ? -s0 : s0) / (kPi * d);
      }
      acc += s.data[nu] * k;
    }
    out[q] = acc;
  }
  return out;
}

SampleStream farrow_eval(const SampleStream& s, std::span<const double> delay_s) {
  if (delay_s.size() != s.size())
    throw ConfigError(fmt::format("farrow_eval: {} delays for {} samples", delay_s.size(), s.size()));
  const double T = s.period();
  SampleStream out = s;
  const auto n = static_cast<std::ptrdiff_t>(s.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double d = delay_s[static_cast<std::size_t>(i)] / T;
    if (!(std::abs(d) < 1.0))
      throw DomainError(fmt::format("farrow_eval: delay {:.3e} s at sample {} exceeds one sample period",
                                    delay_s[static_cast<std::size_t>(i)], i));
    out.data[static_cast<std::size_t>(i)] = farrow_cubic(s.data.data(), n, static_cast<double>(i) + d);
  }
  return out;
}

namespace {
double bessel_i0(double x) {
  // Power series; converges quickly for the beta range used by Kaiser windows.
  double sum = 1.0, term = 1.0;
  const double q = 0.25 * x * x;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}
}  // namespace

rvec design_rate_filter(int L, int half_taps, double kaiser_beta) {
  if (L < 1 || half_taps < 1) throw ConfigError("design_rate_filter: L and half_taps must be positive");
  const int len = 2 * half_taps * L + 1;
  const int mid = half_taps * L;
  rvec h(static_cast<std::size_t>(len));
  const double i0b = bessel_i0(kaiser_beta);
  double sum = 0.0;
  for (int j = 0; j < len; ++j) {
    const double r = static_cast<double>(j - mid) / mid;
    const double w = bessel_i0(kaiser_beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
    h[static_cast<std::size_t>(j)] = sinc(static_cast<double>(j - mid) / L) * w;
    sum += h[static_cast<std::size_t>(j)];
  }
  for (double& v : h) v *= L / sum;
  return h;
}

}  // namespace sjisac
