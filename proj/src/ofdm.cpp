// SPDX-License-Identifier: Apache-2.0
#include "sjisac/ofdm.hpp"

#include <fstream>
#include <random>

#include <fmt/format.h>

#include "sjisac/fft.hpp"

namespace sjisac {

int bits_per_symbol(Modulation m) {
  switch (m) {
    case Modulation::QPSK: return 2;
    case Modulation::QAM16: return 4;
    case Modulation::QAM64: return 6;
    case Modulation::QAM256: return 8;
  }
  return 0;
}

std::string_view to_string(Modulation m) {
  switch (m) {
    case Modulation::QPSK: return "QPSK";
    case Modulation::QAM16: return "16QAM";
    case Modulation::QAM64: return "64QAM";
    case Modulation::QAM256: return "256QAM";
  }
  return "?";
}

Modulation parse_modulation(std::string_view s) {
  if (s == "QPSK" || s == "4QAM") return Modulation::QPSK;
  if (s == "16QAM") return Modulation::QAM16;
  if (s == "64QAM") return Modulation::QAM64;
  if (s == "256QAM") return Modulation::QAM256;
  throw ConfigError(fmt::format("unknown modulation '{}'", s));
}

void OfdmConfig::validate() const {
  if (N < 1 || (N & (N - 1)) != 0) throw ConfigError(fmt::format("N = {} is not a power of two", N));
  if (eta != 1 && eta != 2 && eta != 4 && eta != 8)
    throw ConfigError(fmt::format("eta = {} not in {{1,2,4,8}}", eta));
  if (N_cp != 0 && N_cp != N / 4 && N_cp != N)
    throw ConfigError(fmt::format("N_cp = {} not in {{0, N/4, N}}", N_cp));
  if (M < 1) throw ConfigError("M must be positive");
  if (!(B_hz > 0.0)) throw ConfigError("bandwidth must be positive");
}

namespace {

int gray_decode(int g) {
  int b = 0;
  for (; g; g >>= 1) b ^= g;
  return b;
}

struct Axis {
  int bits;
  int levels;
  double scale;
};

Axis axis_of(Modulation m) {
  const int bps = bits_per_symbol(m);
  const int lv = 1 << (bps / 2);
  return {bps / 2, lv, 1.0 / std::sqrt(2.0 * (lv * lv - 1) / 3.0)};
}

double pam(int label, const Axis& a) {
  return static_cast<double>((a.levels - 1) - 2 * gray_decode(label)) * a.scale;
}

}  // namespace

cvec alphabet(Modulation m) {
  const Axis a = axis_of(m);
  cvec pts;
  pts.reserve(static_cast<std::size_t>(a.levels) * a.levels);
  for (int i = 0; i < a.levels; ++i)
    for (int q = 0; q < a.levels; ++q) pts.emplace_back(pam(i, a), pam(q, a));
  return pts;
}

SymbolGrid map_symbols(std::span<const std::uint8_t> bits, const OfdmConfig& cfg) {
  const int bps = bits_per_symbol(cfg.modulation);
  const std::size_t cells = static_cast<std::size_t>(cfg.N) * cfg.M;
  if (bits.size() != cells * bps)
    throw ConfigError(fmt::format("map_symbols: expected {} bits, got {}", cells * bps, bits.size()));
  const Axis a = axis_of(cfg.modulation);
  SymbolGrid g(cfg.N, cfg.M, GridRole::Tx);
  for (std::size_t c = 0; c < cells; ++c) {
    const std::uint8_t* b = bits.data() + c * bps;
    int li = 0, lq = 0;
    for (int i = 0; i < a.bits; ++i) li = (li << 1) | (b[i] & 1);
    for (int i = 0; i < a.bits; ++i) lq = (lq << 1) | (b[a.bits + i] & 1);
    g.data[c] = cplx(pam(li, a), pam(lq, a));
  }
  return g;
}

std::vector<std::uint8_t> random_bits(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> bits(count);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return bits;
}

SampleStream modulate(const SymbolGrid& grid, const OfdmConfig& cfg) {
  cfg.validate();
  if (grid.N != cfg.N || grid.M != cfg.M)
    throw FramingError(fmt::format("modulate: grid {}x{} vs config {}x{}", grid.N, grid.M, cfg.N, cfg.M));
  const int n_fft = cfg.fft_size();
  const int cp = cfg.eta * cfg.N_cp;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_fft));

  SampleStream s;
  s.rate_hz = cfg.rate_hz();
  s.domain = Domain::BasebandComplex;
  s.layout = cfg.layout();
  s.data.resize(cfg.stream_length());

  cvec buf(static_cast<std::size_t>(n_fft));
  for (int m = 0; m < cfg.M; ++m) {
    std::fill(buf.begin(), buf.end(), cplx{});
    for (int k = 0; k < cfg.N; ++k) {
      int bin = k - cfg.N / 2;
      if (bin < 0) bin += n_fft;
      buf[static_cast<std::size_t>(bin)] = grid.at(k, m);
    }
    ifft_unscaled(buf);
    cplx* out = s.data.data() + static_cast<std::size_t>(m) * (n_fft + cp);
    for (int i = 0; i < cp; ++i) out[i] = buf[static_cast<std::size_t>(n_fft - cp + i)] * scale;
    for (int i = 0; i < n_fft; ++i) out[cp + i] = buf[static_cast<std::size_t>(i)] * scale;
  }
  return s;
}

SymbolGrid demodulate(const SampleStream& stream, const OfdmConfig& cfg) {
  cfg.validate();
  if (stream.size() != cfg.stream_length())
    throw FramingError(fmt::format("demodulate: stream has {} samples, layout needs {}", stream.size(),
                                   cfg.stream_length()));
  const int n_fft = cfg.fft_size();
  const int cp = cfg.eta * cfg.N_cp;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_fft));
  SymbolGrid g(cfg.N, cfg.M, GridRole::Rx);
  cvec buf(static_cast<std::size_t>(n_fft));
  for (int m = 0; m < cfg.M; ++m) {
    const cplx* in = stream.data.data() + static_cast<std::size_t>(m) * (n_fft + cp) + cp;
    std::copy(in, in + n_fft, buf.begin());
    fft(buf);
    for (int k = 0; k < cfg.N; ++k) {
      int bin = k - cfg.N / 2;
      if (bin < 0) bin += n_fft;
      g.at(k, m) = buf[static_cast<std::size_t>(bin)] * scale;
    }
  }
  return g;
}

CpeEstimate estimate_cpe(const SymbolGrid& rx, const SymbolGrid& tx) {
  if (rx.N != tx.N || rx.M != tx.M) throw FramingError("estimate_cpe: grid shapes differ");
  CpeEstimate e;
  e.phase.resize(static_cast<std::size_t>(rx.M));
  e.undefined.resize(static_cast<std::size_t>(rx.M));
  for (int m = 0; m < rx.M; ++m) {
    cplx acc{};
    for (int k = 0; k < rx.N; ++k) acc += rx.at(k, m) * std::conj(tx.at(k, m));
    const bool zero = acc == cplx{};
    e.undefined[static_cast<std::size_t>(m)] = zero;
    e.phase[static_cast<std::size_t>(m)] = zero ? 0.0 : std::arg(acc);
  }
  return e;
}

SymbolGrid correct_cpe(const SymbolGrid& rx, std::span<const double> phases) {
  if (phases.size() != static_cast<std::size_t>(rx.M)) throw FramingError("correct_cpe: one phase per symbol required");
  SymbolGrid out = rx;
  for (int m = 0; m < rx.M; ++m) {
    const cplx rot = std::polar(1.0, -phases[static_cast<std::size_t>(m)]);
    for (int k = 0; k < rx.N; ++k) out.at(k, m) *= rot;
  }
  return out;
}

void write_grid_csv(const std::filesystem::path& path, const SymbolGrid& grid) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << "k,m,re,im\n";
  for (int m = 0; m < grid.M; ++m)
    for (int k = 0; k < grid.N; ++k)
      out << fmt::format("{},{},{:.17g},{:.17g}\n", k, m, grid.at(k, m).real(), grid.at(k, m).imag());
}

void write_grid_bin(const std::filesystem::path& path, const SymbolGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  const std::int32_t hdr[3] = {grid.N, grid.M, grid.role == GridRole::Tx ? 0 : 1};
  out.write("SJGR", 4);
  out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
  out.write(reinterpret_cast<const char*>(grid.data.data()),
            static_cast<std::streamsize>(grid.data.size() * sizeof(cplx)));
}

SymbolGrid read_grid_bin(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4];
  std::int32_t hdr[3];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(hdr), sizeof hdr);
  if (!in || std::string_view(magic, 4) != "SJGR" || hdr[0] < 1 || hdr[1] < 1)
    throw ConfigError(fmt::format("'{}' is not a symbol grid file", path.string()));
  SymbolGrid g(hdr[0], hdr[1], hdr[2] == 0 ? GridRole::Tx : GridRole::Rx);
  in.read(reinterpret_cast<char*>(g.data.data()), static_cast<std::streamsize>(g.data.size() * sizeof(cplx)));
  if (!in) throw ConfigError(fmt::format("truncated grid file '{}'", path.string()));
  return g;
}

}  // namespace sjisac
