// SPDX-License-Identifier: Apache-2.0
#include "sjisac/jitter.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "sjisac/fft.hpp"

namespace sjisac {

static_assert(std::endian::native == std::endian::little,
              "binary trace format assumes a little-endian host");

PsdMask::PsdMask(std::vector<PsdPoint> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw ConfigError("PSD mask needs at least 2 points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!(p.offset_hz > 0.0) || !std::isfinite(p.offset_hz))
      throw ConfigError(fmt::format("PSD mask offset #{} must be positive", i));
    if (std::isnan(p.level_dbc_hz) || p.level_dbc_hz == std::numeric_limits<double>::infinity())
      throw ConfigError(fmt::format("PSD mask level #{} is not a valid dB value", i));
    if (i > 0 && !(p.offset_hz > points_[i - 1].offset_hz))
      throw ConfigError("PSD mask offsets must be strictly increasing");
  }
}

PsdMask PsdMask::flat(double level_dbc_hz) {
  return PsdMask({{1.0, level_dbc_hz}, {2.0, level_dbc_hz}});
}

double PsdMask::level_db(double f) const {
  if (f <= points_.front().offset_hz) return points_.front().level_dbc_hz;
  if (f >= points_.back().offset_hz) return points_.back().level_dbc_hz;
  auto it = std::upper_bound(points_.begin(), points_.end(), f,
                             [](double v, const PsdPoint& p) { return v < p.offset_hz; });
  const PsdPoint& hi = *it;
  const PsdPoint& lo = *(it - 1);
  if (std::isinf(lo.level_dbc_hz) || std::isinf(hi.level_dbc_hz))
    return -std::numeric_limits<double>::infinity();
  double t = (std::log10(f) - std::log10(lo.offset_hz)) /
             (std::log10(hi.offset_hz) - std::log10(lo.offset_hz));
  return lo.level_dbc_hz + t * (hi.level_dbc_hz - lo.level_dbc_hz);
}

double PsdMask::density(double f) const {
  double db = level_db(f);
  return std::isinf(db) ? 0.0 : std::pow(10.0, db / 10.0);
}

PsdMask PsdMask::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open PSD mask '{}'", path.string()));
  std::vector<PsdPoint> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string f_txt, l_txt;
    if (!(ss >> f_txt)) continue;
    if (!(ss >> l_txt))
      throw ConfigError(fmt::format("{}:{}: expected 'offset_hz level_dbc_hz'", path.string(), lineno));
    try {
      pts.push_back({std::stod(f_txt), std::stod(l_txt)});
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("{}:{}: malformed number", path.string(), lineno));
    }
  }
  return PsdMask(std::move(pts));
}

void PsdMask::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << "# offset_hz level_dbc_hz (double-sided)\n";
  for (const auto& p : points_) out << fmt::format("{:.6e} {:.4f}\n", p.offset_hz, p.level_dbc_hz);
}

PsdMask default_mask() {
  return PsdMask::load(std::filesystem::path(SJISAC_CONFIG_DIR) / "lmx2594.mask");
}

double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  long double acc = 0.0L;
  for (double v : x) acc += static_cast<long double>(v) * v;
  return static_cast<double>(std::sqrt(acc / static_cast<long double>(x.size())));
}

PnTrace synth_pn(const PsdMask& mask, double fs_hz, std::size_t length, std::uint64_t seed) {
  if (length < 2) throw ConfigError("synth_pn: length must be at least 2");
  if (!(fs_hz > 0.0)) throw ConfigError("synth_pn: fs_hz must be positive");

  // theta[n] = (1/L) sum_k A_k Z_k e^{+j2pi kn/L} with E|Z_k|^2 = 1 and
  // A_k^2 = S(f_k) fs L, so that var(theta) = sum_k S(f_k) fs/L.
  const std::size_t L = length;
  const double dfs = fs_hz / static_cast<double>(L);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  cvec spec(L, cplx{});
  const std::size_t half = L / 2;
  for (std::size_t k = 1; k <= half; ++k) {
    double amp = std::sqrt(mask.density(k * dfs) * fs_hz * static_cast<double>(L));
    double g1 = gauss(rng);
    double g2 = gauss(rng);
    if (2 * k == L) {
      spec[k] = amp * g1;  // Nyquist bin must be real
    } else {
      cplx z = cplx(g1, g2) * std::numbers::sqrt2 * 0.5;
      spec[k] = amp * z;
      spec[L - k] = std::conj(spec[k]);
    }
  }
  ifft_unscaled(spec);

  PnTrace out;
  out.fs_hz = fs_hz;
  out.seed = seed;
  out.samples.resize(L);
  const double inv = 1.0 / static_cast<double>(L);
  for (std::size_t n = 0; n < L; ++n) out.samples[n] = spec[n].real() * inv;
  return out;
}

JitterTrace pn_to_jitter(const PnTrace& pn, double fs_eta_hz) {
  if (!(fs_eta_hz > 0.0)) throw ConfigError("pn_to_jitter: fs_eta_hz must be positive");
  JitterTrace j;
  j.fs_hz = pn.fs_hz;
  j.seed = pn.seed;
  j.samples.resize(pn.samples.size());
  const double k = 1.0 / (2.0 * kPi * fs_eta_hz);
  for (std::size_t n = 0; n < pn.samples.size(); ++n) j.samples[n] = pn.samples[n] * k;
  j.rms_s = rms(j.samples);
  return j;
}

JitterTrace scale_to_rms(const JitterTrace& j, double target_rms_s) {
  if (target_rms_s < 0.0) throw ConfigError("scale_to_rms: target must be non-negative");
  JitterTrace out = j;
  if (target_rms_s == 0.0) {
    std::fill(out.samples.begin(), out.samples.end(), 0.0);
    out.rms_s = 0.0;
    return out;
  }
  double current = rms(j.samples);
  if (!(current > 0.0)) throw DomainError("scale_to_rms: zero-RMS trace cannot reach a nonzero target");
  const double g = target_rms_s / current;
  for (double& v : out.samples) v *= g;
  out.rms_s = rms(out.samples);
  return out;
}

double integrated_pn_level(const PsdMask& mask, double f_lo, double f_hi, std::size_t nodes) {
  if (!(f_lo > 0.0) || !(f_hi > 0.0)) throw ConfigError("integrated_pn_level: bounds must be positive");
  if (f_lo > f_hi) throw ConfigError("integrated_pn_level: f_lo must not exceed f_hi");
  if (f_lo == f_hi) return kFloorDb;
  nodes = std::max<std::size_t>(nodes, 1024);
  const double a = std::log10(f_lo);
  const double b = std::log10(f_hi);
  double acc = 0.0;
  double f_prev = f_lo;
  double s_prev = mask.density(f_lo);
  for (std::size_t i = 1; i < nodes; ++i) {
    double f = (i + 1 == nodes) ? f_hi : std::pow(10.0, a + (b - a) * i / (nodes - 1));
    double s = mask.density(f);
    acc += 0.5 * (s + s_prev) * (f - f_prev);
    f_prev = f;
    s_prev = s;
  }
  return power_db(2.0 * acc);
}

JitterTrace make_jitter(const PsdMask& mask, double fs_hz, std::size_t length,
                        std::uint64_t seed, double target_rms_s) {
  JitterTrace j = pn_to_jitter(synth_pn(mask, fs_hz, length, seed), fs_hz);
  return scale_to_rms(j, target_rms_s);
}

namespace {
constexpr char kTraceMagic[4] = {'S', 'J', 'T', 'R'};
constexpr std::uint32_t kTraceVersion = 1;
}  // namespace

void write_trace(const std::filesystem::path& path, const JitterTrace& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write trace '{}'", path.string()));
  std::uint64_t n = t.samples.size();
  out.write(kTraceMagic, 4);
  out.write(reinterpret_cast<const char*>(&kTraceVersion), sizeof kTraceVersion);
  out.write(reinterpret_cast<const char*>(&t.fs_hz), sizeof t.fs_hz);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&t.seed), sizeof t.seed);
  out.write(reinterpret_cast<const char*>(t.samples.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
  if (!out) throw std::runtime_error(fmt::format("short write on '{}'", path.string()));
}

JitterTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open trace '{}'", path.string()));
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t n = 0;
  JitterTrace t;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  if (!in || std::memcmp(magic, kTraceMagic, 4) != 0 || version != kTraceVersion)
    throw ConfigError(fmt::format("'{}' is not a version-{} trace file", path.string(), kTraceVersion));
  in.read(reinterpret_cast<char*>(&t.fs_hz), sizeof t.fs_hz);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&t.seed), sizeof t.seed);
  t.samples.resize(n);
  in.read(reinterpret_cast<char*>(t.samples.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw ConfigError(fmt::format("truncated trace file '{}'", path.string()));
  t.rms_s = rms(t.samples);
  return t;
}

}  // namespace sjisac
