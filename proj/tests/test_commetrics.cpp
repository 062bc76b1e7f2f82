// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "sjisac/commetrics.hpp"

using namespace sjisac;

namespace {
SymbolGrid grid(int N, int M, Modulation mod, std::uint64_t seed) {
  OfdmConfig c;
  c.N = N;
  c.M = M;
  c.modulation = mod;
  return map_symbols(random_bits(static_cast<std::size_t>(N) * M * bits_per_symbol(mod), seed), c);
}

// Error of power p * |X|^2 on every cell, alternating in sign so that it is
// orthogonal to X over the frame (even cell count).
SymbolGrid plus_orthogonal(const SymbolGrid& X, double p) {
  SymbolGrid R = X;
  for (std::size_t i = 0; i < R.data.size(); ++i) R.data[i] += (i % 2 ? -1.0 : 1.0) * cplx(0, std::sqrt(p)) * X.data[i];
  return R;
}
}  // namespace

TEST_CASE("EVM of a perfect grid is the floor sentinel") {
  const auto X = grid(64, 8, Modulation::QAM16, 1);
  const auto e = evm(X, X, EvmReference::Raw);
  CHECK(e.mean_db <= -150.0);
  CHECK(evm(X, X).mean_db <= -150.0);
}

TEST_CASE("EVM with a known error power on every cell") {
  // QPSK cells all have unit power, so the per-cell error is exactly p.
  const auto X = grid(32, 16, Modulation::QPSK, 2);
  const double p = 1e-3;
  const auto R = plus_orthogonal(X, p);
  const auto e = evm(R, X, EvmReference::Raw);
  for (double v : e.per_subcarrier_db) CHECK(v == doctest::Approx(10.0 * std::log10(p)).epsilon(1e-9));
  CHECK(e.mean_db == doctest::Approx(-30.0).epsilon(1e-9));
}

TEST_CASE("EVM is the mean of per-subcarrier dB, not a total-power ratio") {
  const auto X = grid(4, 64, Modulation::QPSK, 3);
  SymbolGrid R = X;
  // Error 1e-2 on subcarrier 0 only, 1e-6 elsewhere.
  for (int m = 0; m < X.M; ++m)
    for (int k = 0; k < X.N; ++k) R.at(k, m) += cplx(0, 1) * X.at(k, m) * std::sqrt(k == 0 ? 1e-2 : 1e-6);
  const auto e = evm(R, X, EvmReference::Raw);
  CHECK(e.mean_db == doctest::Approx((-20.0 - 60.0 * 3) / 4.0).epsilon(1e-9));
}

TEST_CASE("gain-normalized EVM removes the frame LS gain") {
  const auto X = grid(32, 8, Modulation::QAM64, 4);
  SymbolGrid R = X;
  for (auto& v : R.data) v *= cplx(0.3, -1.1);
  CHECK(evm(R, X).mean_db <= -150.0);
  CHECK(evm(R, X, EvmReference::Raw).mean_db > 0.0);
}

TEST_CASE("SIR sentinel, known value, gain invariance") {
  const auto X = grid(64, 8, Modulation::QPSK, 5);
  SymbolGrid R2 = X;
  for (auto& v : R2.data) v *= 2.0;
  CHECK(sir(R2, X) == kCeilDb);

  const auto R = plus_orthogonal(X, 0.1);
  CHECK(sir(R, X) == doctest::Approx(10.0).epsilon(1e-9));

  SymbolGrid Rc = R;
  for (auto& v : Rc.data) v *= cplx(-0.2, 5.0);
  CHECK(sir(Rc, X) == doctest::Approx(sir(R, X)).epsilon(1e-12));

  SymbolGrid Z(64, 8, GridRole::Tx);
  CHECK_THROWS_AS(sir(R, Z), ConfigError);
}

TEST_CASE("EVM and SIR agree for spectrally flat error") {
  const auto X = grid(256, 32, Modulation::QPSK, 6);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, std::sqrt(1e-3 / 2));
  SymbolGrid R = X;
  for (auto& v : R.data) v += cplx(g(rng), g(rng));
  // Mean of dB is biased low by the chi-square spread over M = 32 symbols; half a dB covers it.
  CHECK(std::abs(evm(R, X).mean_db + sir(R, X)) < 0.5);
}

TEST_CASE("metrics are invariant to permuting symbols") {
  const auto X = grid(32, 8, Modulation::QAM16, 8);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 0.05);
  SymbolGrid R = X;
  for (auto& v : R.data) v += cplx(g(rng), g(rng));
  SymbolGrid Xp = X, Rp = R;
  for (int m = 0; m < X.M; ++m)
    for (int k = 0; k < X.N; ++k) {
      Xp.at(k, m) = X.at(k, X.M - 1 - m);
      Rp.at(k, m) = R.at(k, X.M - 1 - m);
    }
  CHECK(evm(Rp, Xp).mean_db == doctest::Approx(evm(R, X).mean_db).epsilon(1e-12));
  CHECK(sir(Rp, Xp) == doctest::Approx(sir(R, X)).epsilon(1e-12));
}

TEST_CASE("shape mismatch is a framing error") {
  CHECK_THROWS_AS(evm(grid(16, 2, Modulation::QPSK, 1), grid(16, 3, Modulation::QPSK, 1)), FramingError);
}
