// SPDX-License-Identifier: Apache-2.0
#include "sjisac/commetrics.hpp"

namespace sjisac {

namespace {
void check_shapes(const SymbolGrid& rx, const SymbolGrid& tx) {
  if (rx.N != tx.N || rx.M != tx.M) throw FramingError("grids differ in shape");
}
}  // namespace

cplx ls_gain(const SymbolGrid& rx, const SymbolGrid& tx) {
  check_shapes(rx, tx);
  cplx num{};
  double den = 0.0;
  for (std::size_t i = 0; i < tx.data.size(); ++i) {
    num += rx.data[i] * std::conj(tx.data[i]);
    den += std::norm(tx.data[i]);
  }
  if (!(den > 0.0)) throw ConfigError("transmit grid has zero power");
  return num / den;
}

EvmResult evm(const SymbolGrid& rx, const SymbolGrid& tx, EvmReference ref) {
  check_shapes(rx, tx);
  cplx g{1.0, 0.0};
  if (ref == EvmReference::GainNormalized) {
    g = ls_gain(rx, tx);
    if (g == cplx{}) g = 1.0;
  }
  const cplx inv = 1.0 / g;
  EvmResult r;
  r.per_subcarrier_db.resize(static_cast<std::size_t>(tx.N));
  double acc = 0.0;
  for (int k = 0; k < tx.N; ++k) {
    double e = 0.0, s = 0.0;
    for (int m = 0; m < tx.M; ++m) {
      e += std::norm(rx.at(k, m) * inv - tx.at(k, m));
      s += std::norm(tx.at(k, m));
    }
    const double db = s > 0.0 ? power_db(e / s) : kFloorDb;
    r.per_subcarrier_db[static_cast<std::size_t>(k)] = db;
    acc += db;
  }
  r.mean_db = acc / tx.N;
  return r;
}

double sir(const SymbolGrid& rx, const SymbolGrid& tx) {
  const cplx a = ls_gain(rx, tx);
  double sig = 0.0, err = 0.0;
  for (std::size_t i = 0; i < tx.data.size(); ++i) {
    sig += std::norm(tx.data[i]);
    err += std::norm(rx.data[i] - a * tx.data[i]);
  }
  sig *= std::norm(a);
  if (!(err > 0.0)) return kCeilDb;
  return power_db(sig / err);
}

}  // namespace sjisac
