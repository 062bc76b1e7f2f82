// SPDX-License-Identifier: Apache-2.0
#include "sjisac/radar.hpp"

#include <fstream>

#include <fmt/format.h>

#include "sjisac/fft.hpp"

namespace sjisac {

WindowSpec parse_window(const std::string& s) {
  if (s == "rect" || s == "rectangular") return {WindowType::Rectangular, 0.0};
  if (s.rfind("cheb", 0) == 0) {
    WindowSpec w{WindowType::Chebyshev, 100.0};
    if (auto colon = s.find(':'); colon != std::string::npos) w.sidelobe_db = std::stod(s.substr(colon + 1));
    if (!(w.sidelobe_db > 0.0)) throw ConfigError("Chebyshev attenuation must be positive");
    return w;
  }
  throw ConfigError(fmt::format("unknown window '{}'", s));
}

std::string to_string(const WindowSpec& w) {
  return w.type == WindowType::Rectangular ? std::string("rect") : fmt::format("cheb:{:g}", w.sidelobe_db);
}

rvec make_window(const WindowSpec& w, int n) {
  if (n < 1) throw ConfigError("window length must be positive");
  rvec out(static_cast<std::size_t>(n), 1.0);
  if (w.type == WindowType::Rectangular || n == 1) return out;

  const double order = n - 1.0;
  const double beta = std::cosh(std::acosh(std::pow(10.0, w.sidelobe_db / 20.0)) / order);
  cvec p(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double x = beta * std::cos(kPi * k / n);
    double v;
    if (x > 1.0)
      v = std::cosh(order * std::acosh(x));
    else if (x < -1.0)
      v = (n % 2 ? 1.0 : -1.0) * std::cosh(order * std::acosh(-x));
    else
      v = std::cos(order * std::acos(x));
    p[static_cast<std::size_t>(k)] = (n % 2) ? cplx(v, 0.0) : v * std::polar(1.0, kPi / n * k);
  }
  fft(p);
  if (n % 2) {
    const int h = (n + 1) / 2;
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(std::abs(i - (h - 1)))].real();
  } else {
    const int h = n / 2;
    for (int i = 0; i < h; ++i) out[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(h - i)].real();
    for (int i = 0; i < h; ++i) out[static_cast<std::size_t>(h + i)] = p[static_cast<std::size_t>(i + 1)].real();
  }
  const double mx = *std::max_element(out.begin(), out.end());
  for (double& v : out) v /= mx;
  return out;
}

double mainlobe_halfwidth_bins(const WindowSpec& w, int n) {
  constexpr int kOver = 16;
  const rvec win = make_window(w, n);
  cvec spec(static_cast<std::size_t>(n) * kOver);
  for (int i = 0; i < n; ++i) spec[static_cast<std::size_t>(i)] = win[static_cast<std::size_t>(i)];
  fft(spec);
  std::size_t i = 1;
  while (i + 1 < spec.size() / 2 && std::abs(spec[i + 1]) < std::abs(spec[i])) ++i;
  return static_cast<double>(i) / kOver;
}

SymbolGrid apply_targets(const SymbolGrid& tx, std::span<const Target> targets, const OfdmConfig& cfg) {
  if (tx.N != cfg.N || tx.M != cfg.M) throw FramingError("apply_targets: grid does not match config");
  const double df = cfg.delta_f();
  const double tsym = cfg.T_sym();
  const double cp_s = cfg.N_cp * cfg.Ts();
  for (const auto& t : targets) {
    const double tau = t.range_m / kSpeedOfLight;
    if (t.range_m < 0.0 || tau > cp_s)
      throw ConfigError(fmt::format("target at {} m (delay {:.4g} s) does not fit the {:.4g} s cyclic prefix",
                                    t.range_m, tau, cp_s));
    if (!(std::abs(t.doppler_norm) < 0.5)) throw ConfigError("target Doppler must satisfy |f_D/delta_f| < 0.5");
  }
  SymbolGrid out(tx.N, tx.M, GridRole::Rx);
  for (const auto& t : targets) {
    const double tau = t.range_m / kSpeedOfLight;
    const double fd = t.doppler_norm * df;
    for (int m = 0; m < tx.M; ++m) {
      const cplx dop = t.amplitude * std::polar(1.0, 2.0 * kPi * std::fmod(fd * m * tsym, 1.0));
      for (int k = 0; k < tx.N; ++k) {
        const double fk = (k - tx.N / 2) * df;
        out.at(k, m) += tx.at(k, m) * dop * std::polar(1.0, -2.0 * kPi * std::fmod(fk * tau, 1.0));
      }
    }
  }
  return out;
}

int RadarImage::range_bin(double range_m) const {
  int p = static_cast<int>(std::lround(range_m / range_step_m)) % P;
  return p < 0 ? p + P : p;
}

int RadarImage::doppler_bin(double doppler_norm) const {
  int q = static_cast<int>(std::lround(doppler_norm / doppler_step_norm)) + Q / 2;
  return ((q % Q) + Q) % Q;
}

RadarImage range_doppler(const SymbolGrid& rx, const SymbolGrid& tx, const WindowSpec& w_range,
                         const WindowSpec& w_doppler, int zp, const OfdmConfig& cfg) {
  if (rx.N != tx.N || rx.M != tx.M || rx.N != cfg.N || rx.M != cfg.M)
    throw FramingError("range_doppler: grid shapes differ");
  if (zp < 1) throw ConfigError("zero-padding factor must be >= 1");
  const int N = cfg.N, M = cfg.M;
  const int P = zp * N, Q = zp * M;
  const rvec wr = make_window(w_range, N);
  const rvec wd = make_window(w_doppler, M);

  RadarImage img;
  img.P = P;
  img.Q = Q;
  img.zp = zp;
  img.range_step_m = kSpeedOfLight / (P * cfg.delta_f());
  img.doppler_step_norm = 1.0 / (Q * cfg.T_sym() * cfg.delta_f());
  img.window_range = w_range;
  img.window_doppler = w_doppler;
  img.power.resize(static_cast<std::size_t>(P) * Q);

  // Range profiles, one column per symbol.
  cvec prof(static_cast<std::size_t>(P) * M);
  cvec buf(static_cast<std::size_t>(P));
  for (int m = 0; m < M; ++m) {
    std::fill(buf.begin(), buf.end(), cplx{});
    for (int k = 0; k < N; ++k) {
      const cplx x = tx.at(k, m);
      if (x == cplx{}) throw DomainError("range_doppler: zero transmit symbol");
      int bin = k - N / 2;
      if (bin < 0) bin += P;
      buf[static_cast<std::size_t>(bin)] = rx.at(k, m) / x * wr[static_cast<std::size_t>(k)] *
                                           wd[static_cast<std::size_t>(m)];
    }
    ifft_unscaled(buf);
    for (int p = 0; p < P; ++p) prof[static_cast<std::size_t>(p) * M + m] = buf[static_cast<std::size_t>(p)];
  }
  cvec dbuf(static_cast<std::size_t>(Q));
  for (int p = 0; p < P; ++p) {
    std::fill(dbuf.begin(), dbuf.end(), cplx{});
    std::copy_n(prof.begin() + static_cast<std::ptrdiff_t>(p) * M, M, dbuf.begin());
    fft(dbuf);
    float* row = img.power.data() + static_cast<std::size_t>(p) * Q;
    for (int q = 0; q < Q; ++q) row[(q + Q / 2) % Q] = static_cast<float>(std::norm(dbuf[static_cast<std::size_t>(q)]));
  }
  return img;
}

Peak find_peak(const RadarImage& img) {
  auto it = std::max_element(img.power.begin(), img.power.end());
  if (it == img.power.end() || !(*it > 0.0f)) throw DetectionError("image has no peak");
  const auto idx = static_cast<std::size_t>(it - img.power.begin());
  return {static_cast<int>(idx / img.Q), static_cast<int>(idx % img.Q), *it};
}

Peak locate_target(const RadarImage& img, const Target& t) {
  const int half = std::max(1, img.zp / 2);
  const int p0 = img.range_bin(t.range_m);
  const int q0 = img.doppler_bin(t.doppler_norm);
  Peak best{p0, q0, -1.0};
  for (int dp = -half; dp <= half; ++dp)
    for (int dq = -half; dq <= half; ++dq) {
      const int p = ((p0 + dp) % img.P + img.P) % img.P;
      const int q = ((q0 + dq) % img.Q + img.Q) % img.Q;
      if (img.at(p, q) > best.power) best = {p, q, img.at(p, q)};
    }
  if (!(best.power > 0.0)) throw DetectionError("no target power near expected coordinates");
  for (int dp = -1; dp <= 1; ++dp)
    for (int dq = -1; dq <= 1; ++dq) {
      const int p = ((best.p + dp) % img.P + img.P) % img.P;
      const int q = ((best.q + dq) % img.Q + img.Q) % img.Q;
      if (img.at(p, q) > best.power)
        throw DetectionError(fmt::format("no local maximum within half a cell of ({} m, {})", t.range_m,
                                         t.doppler_norm));
    }
  return best;
}

double pplr(const RadarImage& img, const RadarImage& reference) {
  const Peak a = find_peak(img);
  const Peak b = find_peak(reference);
  return 10.0 * std::log10(a.power / b.power);
}

namespace {

rvec extract_cut(const RadarImage& img, const Peak& peak, CutAxis axis, int& idx) {
  rvec cut;
  if (axis == CutAxis::Range) {
    cut.resize(static_cast<std::size_t>(img.P));
    for (int p = 0; p < img.P; ++p) cut[static_cast<std::size_t>(p)] = img.at(p, peak.q);
    idx = peak.p;
  } else {
    cut.resize(static_cast<std::size_t>(img.Q));
    for (int q = 0; q < img.Q; ++q) cut[static_cast<std::size_t>(q)] = img.at(peak.p, q);
    idx = peak.q;
  }
  return cut;
}

// Mainlobe [peak - left, peak + right] (circular), walking to the first minimum.
void mainlobe_extent(std::span<const double> c, int peak, int& left, int& right) {
  const int n = static_cast<int>(c.size());
  auto at = [&](int i) { return c[static_cast<std::size_t>(((i % n) + n) % n)]; };
  right = 0;
  while (right < n - 1 && at(peak + right + 1) < at(peak + right)) ++right;
  left = 0;
  while (left < n - 1 - right && at(peak - left - 1) < at(peak - left)) ++left;
}

}  // namespace

double pslr_1d(std::span<const double> cut, int peak) {
  const int n = static_cast<int>(cut.size());
  if (n == 0) throw DetectionError("empty cut");
  int l = 0, r = 0;
  mainlobe_extent(cut, peak, l, r);
  double side = 0.0;
  for (int i = r + 1; i < n - l; ++i) side = std::max(side, cut[static_cast<std::size_t>((peak + i) % n)]);
  const double main = cut[static_cast<std::size_t>(peak)];
  if (!(side > 0.0) || !(main > 0.0)) return kFloorDb;
  return 10.0 * std::log10(side / main);
}

double islr_1d(std::span<const double> cut, int peak) {
  const int n = static_cast<int>(cut.size());
  if (n == 0) throw DetectionError("empty cut");
  int l = 0, r = 0;
  mainlobe_extent(cut, peak, l, r);
  double main = 0.0, side = 0.0;
  for (int i = -l; i <= r; ++i) main += cut[static_cast<std::size_t>(((peak + i) % n + n) % n)];
  for (int i = r + 1; i < n - l; ++i) side += cut[static_cast<std::size_t>((peak + i) % n)];
  if (!(side > 0.0) || !(main > 0.0)) return kFloorDb;
  return 10.0 * std::log10(side / main);
}

double pslr_cut(const RadarImage& img, const Peak& peak, CutAxis axis) {
  int idx = 0;
  rvec c = extract_cut(img, peak, axis, idx);
  return pslr_1d(c, idx);
}

double islr_cut(const RadarImage& img, const Peak& peak, CutAxis axis) {
  int idx = 0;
  rvec c = extract_cut(img, peak, axis, idx);
  return islr_1d(c, idx);
}

Exclusion default_exclusion(const RadarImage& img, const OfdmConfig& cfg) {
  const double cr = std::max(2.0, std::ceil(mainlobe_halfwidth_bins(img.window_range, cfg.N)));
  const double cd = std::max(2.0, std::ceil(mainlobe_halfwidth_bins(img.window_doppler, cfg.M)));
  return {static_cast<int>(cr) * img.zp, static_cast<int>(cd) * img.zp};
}

namespace {

int circ_dist(int a, int b, int n) {
  int d = std::abs(a - b) % n;
  return std::min(d, n - d);
}

bool excluded(const RadarImage& img, std::span<const Peak> targets, const Exclusion& ex, int p, int q) {
  for (const auto& t : targets)
    if (circ_dist(p, t.p, img.P) <= ex.range_bins && circ_dist(q, t.q, img.Q) <= ex.doppler_bins) return true;
  return false;
}

}  // namespace

ImageSir image_sir(const RadarImage& img, std::span<const Peak> targets, const Exclusion& ex) {
  if (targets.empty()) throw ConfigError("image_sir: no targets");
  double peak = 0.0;
  for (const auto& t : targets) peak = std::max(peak, static_cast<double>(img.at(t.p, t.q)));
  double sum = 0.0, mx = 0.0;
  std::size_t count = 0;
  for (int p = 0; p < img.P; ++p)
    for (int q = 0; q < img.Q; ++q) {
      if (excluded(img, targets, ex, p, q)) continue;
      const double v = img.at(p, q);
      sum += v;
      mx = std::max(mx, v);
      ++count;
    }
  if (count == 0) throw ConfigError("image_sir: exclusion zones cover the whole image");
  return {power_db(peak / (sum / static_cast<double>(count))), power_db(peak / mx)};
}

StripeMetric stripe_metric(const RadarImage& img, std::span<const Peak> targets, const Exclusion& ex) {
  std::vector<float> floor;
  floor.reserve(img.power.size());
  for (int p = 0; p < img.P; ++p)
    for (int q = 0; q < img.Q; ++q)
      if (!excluded(img, targets, ex, p, q)) floor.push_back(img.at(p, q));
  if (floor.empty()) throw ConfigError("stripe_metric: no off-target pixels");
  auto mid = floor.begin() + static_cast<std::ptrdiff_t>(floor.size() / 2);
  std::nth_element(floor.begin(), mid, floor.end());
  const double median = *mid;

  StripeMetric out{kFloorDb, kFloorDb};
  for (const auto& t : targets) {
    double sum = 0.0, mx = 0.0;
    int count = 0;
    for (int q = 0; q < img.Q; ++q) {
      if (excluded(img, targets, ex, t.p, q)) continue;
      const double v = img.at(t.p, q);
      sum += v;
      mx = std::max(mx, v);
      ++count;
    }
    if (count == 0) continue;
    out.ridge_mean_db = std::max(out.ridge_mean_db, power_db(sum / count / median));
    out.ridge_max_db = std::max(out.ridge_max_db, power_db(mx / median));
  }
  return out;
}

void write_image(const std::filesystem::path& path, const RadarImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write image '{}'", path.string()));
  std::vector<double> tmp(img.power.begin(), img.power.end());
  out.write(reinterpret_cast<const char*>(tmp.data()), static_cast<std::streamsize>(tmp.size() * sizeof(double)));
  std::ofstream hdr(path.string() + ".hdr");
  hdr << fmt::format(
      "format float64-le row-major [range][doppler]\nrows {}\ncols {}\nzp {}\nrange_step_m {:.10g}\n"
      "doppler_step_norm {:.10g}\ndoppler_zero_col {}\nwindow_range {}\nwindow_doppler {}\n",
      img.P, img.Q, img.zp, img.range_step_m, img.doppler_step_norm, img.Q / 2, to_string(img.window_range),
      to_string(img.window_doppler));
  if (!out || !hdr) throw std::runtime_error(fmt::format("short write on image '{}'", path.string()));
}

}  // namespace sjisac
