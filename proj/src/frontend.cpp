// SPDX-License-Identifier: Apache-2.0
#include "sjisac/frontend.hpp"

#include <fmt/format.h>

#include "sjisac/fft.hpp"
#include "sjisac/resample.hpp"

namespace sjisac {

std::string_view to_string(SamplingMode m) { return m == SamplingMode::BB ? "BB" : "BP"; }

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::Farrow: return "farrow";
    case Engine::SincOracle: return "sinc-oracle";
    case Engine::FineGrid: return "fine-grid";
  }
  return "?";
}

SamplingMode parse_mode(std::string_view s) {
  if (s == "BB") return SamplingMode::BB;
  if (s == "BP") return SamplingMode::BP;
  throw ConfigError(fmt::format("unknown sampling mode '{}'", s));
}

Engine parse_engine(std::string_view s) {
  if (s == "farrow") return Engine::Farrow;
  if (s == "sinc-oracle") return Engine::SincOracle;
  if (s == "fine-grid") return Engine::FineGrid;
  throw ConfigError(fmt::format("unknown engine '{}'", s));
}

namespace {

constexpr std::size_t kOracleMaxSamples = 1u << 16;

void check_bound(std::span<const double> d, const char* side) {
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!(std::abs(d[i]) < 1.0))
      throw DomainError(fmt::format("{} jitter of {:.3f} samples at index {} exceeds one sample period", side,
                                    d[i], i));
}

template <class T>
std::vector<T> farrow_engine(std::span<const T> x, std::span<const double> dd, std::span<const double> da) {
  check_bound(dd, "DAC");
  check_bound(da, "ADC");
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<T> v(x.size()), y(x.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) v[i] = farrow_cubic(x.data(), n, i - dd[i]);
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = farrow_cubic(v.data(), n, i + da[i]);
  return y;
}

template <class T>
std::vector<T> sinc_engine(std::span<const T> x, std::span<const double> dd, std::span<const double> da) {
  check_bound(dd, "DAC");
  check_bound(da, "ADC");
  if (x.size() > kOracleMaxSamples)
    throw ConfigError(fmt::format("sinc-oracle engine limited to {} samples (got {})", kOracleMaxSamples,
                                  x.size()));
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<T> y(x.size());
  for (std::ptrdiff_t o = 0; o < n; ++o) {
    T acc{};
    for (std::ptrdiff_t i = 0; i < n; ++i) acc += x[i] * sinc(static_cast<double>(o - i) + da[o] - dd[i]);
    y[o] = acc;
  }
  return y;
}

// Converter model on a grid L times finer than the converter rate:
//   u = interpolate(x)                 reconstruction filter
//   v(i) = u(i - L*dDAC(i/L))          DAC emits late by dDAC
//   w = lowpass(v)                     anti-aliasing filter
//   y[n] = w(L*(n + dADC[n]))          ADC samples late by dADC
// Samples outside the stream are zero (burst). Processing is chunked so the
// fine-rate signal is never materialized over the whole stream.
template <class T>
std::vector<T> fine_grid_engine(std::span<const T> x, std::span<const double> dd, std::span<const double> da,
                                const ConverterModel& cm) {
  const int L = cm.upsample;
  const std::ptrdiff_t KL = static_cast<std::ptrdiff_t>(cm.half_taps) * L;
  const rvec h = design_rate_filter(L, cm.half_taps, cm.kaiser_beta);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<T> y(x.size());
  if (n == 0) return y;

  auto dac_at = [&](std::ptrdiff_t i) {
    double t = std::clamp(static_cast<double>(i) / L, 0.0, static_cast<double>(n - 1));
    auto b = static_cast<std::ptrdiff_t>(t);
    double f = t - static_cast<double>(b);
    return b + 1 < n ? dd[b] * (1.0 - f) + dd[b + 1] * f : dd[n - 1];
  };
  auto u_at = [&](std::ptrdiff_t i) {
    // nu with 0 <= i - nu*L + KL <= 2KL
    std::ptrdiff_t lo = (i - KL + L - 1 >= 0) ? (i - KL + L - 1) / L : -((KL - i) / L);
    std::ptrdiff_t hi = (i + KL >= 0) ? (i + KL) / L : -((-(i + KL) + L - 1) / L);
    lo = std::max<std::ptrdiff_t>(lo, 0);
    hi = std::min<std::ptrdiff_t>(hi, n - 1);
    T acc{};
    for (std::ptrdiff_t nu = lo; nu <= hi; ++nu) acc += x[nu] * h[i - nu * L + KL];
    return acc;
  };

  constexpr std::ptrdiff_t kChunk = 4096;
  std::vector<double> pos, q;
  std::vector<T> ubuf, vbuf, wbuf;
  std::vector<char> wdone;
  const double invL = 1.0 / L;

  for (std::ptrdiff_t a = 0; a < n; a += kChunk) {
    const std::ptrdiff_t b = std::min(n, a + kChunk);
    pos.resize(static_cast<std::size_t>(b - a));
    double pmin = 1e300, pmax = -1e300;
    for (std::ptrdiff_t o = a; o < b; ++o) {
      double p = L * (static_cast<double>(o) + da[o]);
      pos[o - a] = p;
      pmin = std::min(pmin, p);
      pmax = std::max(pmax, p);
    }
    const auto wlo = static_cast<std::ptrdiff_t>(std::floor(pmin)) - 1;
    const auto whi = static_cast<std::ptrdiff_t>(std::floor(pmax)) + 2;
    const std::ptrdiff_t vlo = wlo - KL, vhi = whi + KL;

    q.resize(static_cast<std::size_t>(vhi - vlo + 1));
    double qmin = 1e300, qmax = -1e300;
    for (std::ptrdiff_t i = vlo; i <= vhi; ++i) {
      double v = static_cast<double>(i) - L * dac_at(i);
      q[i - vlo] = v;
      qmin = std::min(qmin, v);
      qmax = std::max(qmax, v);
    }
    const auto ulo = static_cast<std::ptrdiff_t>(std::floor(qmin)) - 1;
    const auto uhi = static_cast<std::ptrdiff_t>(std::floor(qmax)) + 2;

    ubuf.resize(static_cast<std::size_t>(uhi - ulo + 1));
    for (std::ptrdiff_t i = ulo; i <= uhi; ++i) ubuf[i - ulo] = u_at(i);

    vbuf.resize(q.size());
    const auto un = static_cast<std::ptrdiff_t>(ubuf.size());
    for (std::size_t i = 0; i < q.size(); ++i) vbuf[i] = farrow_cubic(ubuf.data(), un, q[i] - ulo);

    wbuf.assign(static_cast<std::size_t>(whi - wlo + 1), T{});
    wdone.assign(wbuf.size(), 0);
    auto w_at = [&](std::ptrdiff_t i) -> const T& {
      auto& slot = wbuf[i - wlo];
      if (!wdone[i - wlo]) {
        const T* src = vbuf.data() + (i - KL - vlo);  // h is symmetric
        T acc{};
        for (std::ptrdiff_t j = 0; j <= 2 * KL; ++j) acc += src[j] * h[j];
        slot = acc * invL;
        wdone[i - wlo] = 1;
      }
      return slot;
    };
    for (std::ptrdiff_t o = a; o < b; ++o) {
      const double p = pos[o - a];
      const auto fl = static_cast<std::ptrdiff_t>(std::floor(p));
      T taps[4] = {w_at(fl - 1), w_at(fl), w_at(fl + 1), w_at(fl + 2)};
      y[o] = farrow_cubic(taps, 4, p - static_cast<double>(fl) + 1.0);
    }
  }
  return y;
}

// An empty trace means an ideal converter.
rvec positional_delays(const JitterTrace& j, std::size_t n, double rate_hz, const char* side) {
  if (j.samples.empty()) return rvec(n, 0.0);
  if (j.samples.size() < n)
    throw ConfigError(fmt::format("{} jitter trace has {} samples, stream needs {}", side, j.samples.size(), n));
  rvec d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = j.samples[i] * rate_hz;
  return d;
}

}  // namespace

template <class T>
std::vector<T> run_engine(std::span<const T> x, std::span<const double> dac_delay,
                          std::span<const double> adc_delay, Engine engine, const ConverterModel& conv) {
  if (dac_delay.size() < x.size() || adc_delay.size() < x.size())
    throw ConfigError("run_engine: delay arrays shorter than the stream");
  dac_delay = dac_delay.first(x.size());
  adc_delay = adc_delay.first(x.size());
  switch (engine) {
    case Engine::Farrow: return farrow_engine(x, dac_delay, adc_delay);
    case Engine::SincOracle: return sinc_engine(x, dac_delay, adc_delay);
    case Engine::FineGrid: return fine_grid_engine(x, dac_delay, adc_delay, conv);
  }
  throw ConfigError("unknown engine");
}

template std::vector<double> run_engine(std::span<const double>, std::span<const double>,
                                        std::span<const double>, Engine, const ConverterModel&);
template std::vector<cplx> run_engine(std::span<const cplx>, std::span<const double>, std::span<const double>,
                                      Engine, const ConverterModel&);

SampleStream bb_chain(const SampleStream& tx, const FrontendConfig& cfg) {
  if (!(tx.rate_hz > 0.0)) throw ConfigError("bb_chain: stream rate must be positive");
  const std::size_t n = tx.size();
  const rvec dd = positional_delays(cfg.dac_jitter, n, tx.rate_hz, "DAC");
  const rvec da = positional_delays(cfg.adc_jitter, n, tx.rate_hz, "ADC");
  SampleStream out = tx;
  if (tx.domain == Domain::IfReal) {
    rvec re(n);
    for (std::size_t i = 0; i < n; ++i) re[i] = tx.data[i].real();
    rvec y = run_engine<double>(re, dd, da, cfg.engine, cfg.converter);
    for (std::size_t i = 0; i < n; ++i) out.data[i] = cplx(y[i], 0.0);
  } else {
    out.data = run_engine<cplx>(tx.data, dd, da, cfg.engine, cfg.converter);
  }
  return out;
}

SampleStream bp_chain(const SampleStream& tx, const FrontendConfig& cfg) {
  if (tx.domain != Domain::BasebandComplex) throw ConfigError("bp_chain: expects a complex baseband stream");
  const double fs = tx.rate_hz;
  if (!(fs > 2.0 * (cfg.f_if_hz + cfg.B_hz / 2.0)))
    throw ConfigError(fmt::format("bp_chain: rate {:.3g} Hz cannot hold an IF band up to {:.3g} Hz", fs,
                                  cfg.f_if_hz + cfg.B_hz / 2.0));
  const std::size_t n = tx.size();
  const double cyc = cfg.f_if_hz / fs;
  auto carrier = [&](std::size_t i, double sign) {
    double turns = std::fmod(cyc * static_cast<double>(i), 1.0);
    return std::polar(1.0, sign * 2.0 * kPi * turns);
  };

  SampleStream ifs = tx;
  ifs.domain = Domain::IfReal;
  for (std::size_t i = 0; i < n; ++i)
    ifs.data[i] = cplx(std::numbers::sqrt2 * (tx.data[i] * carrier(i, +1.0)).real(), 0.0);

  SampleStream rx = bb_chain(ifs, cfg);

  rx.domain = Domain::BasebandComplex;
  for (std::size_t i = 0; i < n; ++i) rx.data[i] = std::numbers::sqrt2 * rx.data[i].real() * carrier(i, -1.0);

  // Brick wall per FFT window when the symbol layout is known, so a jitter-free
  // chain stays transparent; the whole stream otherwise.
  const double cutoff = 0.5 * cfg.B_hz * (1.0 + cfg.ddc_guard);
  auto brickwall = [&](std::span<cplx> blk) {
    const std::size_t m = blk.size();
    fft(blk);
    for (std::size_t k = 0; k < m; ++k) {
      const double f = (k <= m / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(m)) * fs / m;
      if (std::abs(f) > cutoff) blk[k] = cplx{};
    }
    ifft_unscaled(blk);
    const double inv = 1.0 / static_cast<double>(m);
    for (auto& v : blk) v *= inv;
  };
  if (tx.layout && tx.layout->length() == n && tx.layout->N > 0) {
    const auto& L = *tx.layout;
    const std::size_t body = static_cast<std::size_t>(L.eta) * L.N;
    const std::size_t cp = static_cast<std::size_t>(L.eta) * L.N_cp;
    cvec head(body);
    for (std::size_t s0 = 0; s0 < n; s0 += cp + body) {
      // CP samples come from a window starting at the symbol start.
      if (cp > 0) {
        std::copy_n(rx.data.begin() + static_cast<std::ptrdiff_t>(s0), body, head.begin());
        brickwall(head);
      }
      brickwall(std::span<cplx>(rx.data).subspan(s0 + cp, body));
      std::copy_n(head.begin(), cp, rx.data.begin() + static_cast<std::ptrdiff_t>(s0));
    }
  } else {
    brickwall(rx.data);
  }
  return rx;
}

SampleStream frontend_chain(const SampleStream& tx, const FrontendConfig& cfg) {
  return cfg.mode == SamplingMode::BB ? bb_chain(tx, cfg) : bp_chain(tx, cfg);
}

}  // namespace sjisac
