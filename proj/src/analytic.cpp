// SPDX-License-Identifier: Apache-2.0
#include "sjisac/analytic.hpp"

#include <fmt/format.h>

#include "sjisac/fft.hpp"
#include "sjisac/resample.hpp"

namespace sjisac {

namespace {

struct Frame {
  int n;    // eta * N
  int off;  // eta * N_cp
  double T;
};

Frame check(std::span<const cplx> x, std::span<const double> dac, std::span<const double> adc,
            const OfdmConfig& cfg) {
  if (cfg.N < 1 || cfg.eta < 1 || cfg.N_cp < 0) throw ConfigError("analytic: invalid frame shape");
  Frame f{cfg.eta * cfg.N, cfg.eta * cfg.N_cp, cfg.Ts() / cfg.eta};
  if (f.n > kAnalyticMaxPoints)
    throw ConfigError(fmt::format("analytic oracle limited to eta*N <= {} (got {})", kAnalyticMaxPoints, f.n));
  const auto len = static_cast<std::size_t>(f.n + f.off);
  if (x.size() != len || dac.size() != len || adc.size() != len)
    throw FramingError(fmt::format("analytic: expected {} samples per array", len));
  return f;
}

cvec unitary_dft(cvec y) {
  fft(y);
  const double s = 1.0 / std::sqrt(static_cast<double>(y.size()));
  for (auto& v : y) v *= s;
  return y;
}

}  // namespace

FirstOrderModel::FirstOrderModel(const OfdmConfig& cfg, std::span<const double> dac_s,
                                 std::span<const double> adc_s)
    : omega(kPi / (cfg.Ts() / cfg.eta)), dac(dac_s), adc(adc_s), offset(cfg.eta * cfg.N_cp) {
  if (!(omega > 0.0)) throw ConfigError("FirstOrderModel: omega must be positive");
}

double phi(int nu, int nu_prime, std::span<const double> dac_s, std::span<const double> adc_s,
           const OfdmConfig& cfg) {
  if (nu == nu_prime) return 1.0;
  const FirstOrderModel fm(cfg, dac_s, adc_s);
  const int d = nu_prime - nu;
  const double sgn = (d % 2 == 0) ? 1.0 : -1.0;
  return sgn / (kPi * d) * fm.omega * fm.delta(nu, nu_prime);
}

cvec exact_Yl(std::span<const cplx> x_cp, std::span<const double> dac_s, std::span<const double> adc_s,
              const OfdmConfig& cfg) {
  const Frame f = check(x_cp, dac_s, adc_s, cfg);
  cvec y(static_cast<std::size_t>(f.n));
  for (int np = 0; np < f.n; ++np) {
    cplx acc{};
    for (int nu = -f.off; nu < f.n; ++nu) {
      const double arg = (np - nu) + (adc_s[np + f.off] - dac_s[nu + f.off]) / f.T;
      acc += x_cp[nu + f.off] * sinc(arg);
    }
    y[static_cast<std::size_t>(np)] = acc;
  }
  return unitary_dft(std::move(y));
}

cvec first_order_Yl(std::span<const cplx> x_cp, std::span<const double> dac_s, std::span<const double> adc_s,
                    const OfdmConfig& cfg) {
  const Frame f = check(x_cp, dac_s, adc_s, cfg);
  const FirstOrderModel fm(cfg, dac_s, adc_s);
  cvec y(static_cast<std::size_t>(f.n));
  for (int np = 0; np < f.n; ++np) {
    cplx ici{};
    for (int nu = -f.off; nu < f.n; ++nu) {
      if (nu == np) continue;
      const int d = np - nu;
      const double k = ((d % 2 == 0) ? 1.0 : -1.0) / (kPi * d) * fm.omega * fm.delta(nu, np);
      ici += x_cp[nu + f.off] * k;
    }
    y[static_cast<std::size_t>(np)] = x_cp[np + f.off] + ici;
  }
  return unitary_dft(std::move(y));
}

}  // namespace sjisac
