// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>

#include "sjisac/types.hpp"

namespace sjisac {

enum class Modulation { QPSK, QAM16, QAM64, QAM256 };

int bits_per_symbol(Modulation m);
std::string_view to_string(Modulation m);
Modulation parse_modulation(std::string_view s);

struct OfdmConfig {
  int N = 256;
  int eta = 1;
  int N_cp = 0;  // before oversampling
  int M = 128;
  double B_hz = 500e6;
  Modulation modulation = Modulation::QPSK;

  /// Structural checks only (N a power of two, eta in {1,2,4,8},
  /// N_cp in {0, N/4, N}); sweep-level bounds live in the harness.
  void validate() const;

  double Ts() const { return 1.0 / B_hz; }
  double rate_hz() const { return eta * B_hz; }
  double delta_f() const { return B_hz / N; }
  double T_sym() const { return (N + N_cp) * Ts(); }
  int fft_size() const { return eta * N; }
  std::size_t symbol_length() const { return static_cast<std::size_t>(eta) * (N + N_cp); }
  std::size_t stream_length() const { return symbol_length() * M; }
  FrameLayout layout() const { return {eta, N, N_cp, M}; }
};

enum class GridRole { Tx, Rx };

// N x M grid stored symbol-major: data[m*N + k]. Row k holds the subcarrier
// at offset (k - N/2) * delta_f from the carrier.
struct SymbolGrid {
  int N = 0;
  int M = 0;
  cvec data;
  GridRole role = GridRole::Tx;

  SymbolGrid() = default;
  SymbolGrid(int n, int m, GridRole r) : N(n), M(m), data(static_cast<std::size_t>(n) * m), role(r) {}

  cplx& at(int k, int m) { return data[static_cast<std::size_t>(m) * N + k]; }
  const cplx& at(int k, int m) const { return data[static_cast<std::size_t>(m) * N + k]; }
};

/// Gray-coded square QAM with unit average power. Per axis, the Gray label g
/// of sqrt(order) levels maps to amplitude (L-1) - 2*gray_decode(g); the first
/// half of each symbol's bits (MSB first) drive I, the second half Q.
/// QPSK 00 -> (1+j)/sqrt(2).
SymbolGrid map_symbols(std::span<const std::uint8_t> bits, const OfdmConfig& cfg);

std::vector<std::uint8_t> random_bits(std::size_t count, std::uint64_t seed);

/// All constellation points of m in label order.
cvec alphabet(Modulation m);

SampleStream modulate(const SymbolGrid& grid, const OfdmConfig& cfg);
SymbolGrid demodulate(const SampleStream& stream, const OfdmConfig& cfg);

struct CpeEstimate {
  rvec phase;                  // per symbol, radians
  std::vector<bool> undefined; // all-zero correlation for that symbol
};

CpeEstimate estimate_cpe(const SymbolGrid& rx, const SymbolGrid& tx);
SymbolGrid correct_cpe(const SymbolGrid& rx, std::span<const double> phases);

void write_grid_csv(const std::filesystem::path& path, const SymbolGrid& grid);
void write_grid_bin(const std::filesystem::path& path, const SymbolGrid& grid);
SymbolGrid read_grid_bin(const std::filesystem::path& path);

}  // namespace sjisac
