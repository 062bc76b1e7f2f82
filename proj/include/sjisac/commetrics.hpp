// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sjisac/ofdm.hpp"

namespace sjisac {

enum class EvmReference {
  GainNormalized,  // R scaled by 1/alpha first (normalized constellation)
  Raw,             // R compared to X as received
};

struct EvmResult {
  double mean_db = 0.0;  // arithmetic mean of the per-subcarrier dB values
  rvec per_subcarrier_db;
};

/// Frame-wide least-squares gain <R,X>/<X,X>.
cplx ls_gain(const SymbolGrid& rx, const SymbolGrid& tx);

EvmResult evm(const SymbolGrid& rx, const SymbolGrid& tx,
              EvmReference ref = EvmReference::GainNormalized);

/// 10 log10(|alpha|^2 sum|X|^2 / sum|R - alpha X|^2); kCeilDb when error-free.
double sir(const SymbolGrid& rx, const SymbolGrid& tx);

}  // namespace sjisac
