// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "sjisac/ofdm.hpp"

namespace sjisac {

// One CP-prefixed OFDM symbol at the converter rate. Sample index nu runs from
// -eta*N_cp to eta*N - 1 and maps to array position nu + eta*N_cp; jitter
// arrays (seconds) use the same positions. Outputs are unitary forward DFTs
// (e^{-j}), i.e. the same bins demodulate() produces before FDZP discard.

inline constexpr int kAnalyticMaxPoints = 512;

struct FirstOrderModel {
  double omega = 0.0;  // pi / (T_s / eta)
  std::span<const double> dac;
  std::span<const double> adc;
  int offset = 0;  // eta * N_cp

  FirstOrderModel(const OfdmConfig& cfg, std::span<const double> dac_s, std::span<const double> adc_s);
  double delta(int nu, int nu_prime) const { return adc[nu_prime + offset] - dac[nu + offset]; }
};

/// First-order kernel term; 1 on the diagonal.
double phi(int nu, int nu_prime, std::span<const double> dac_s, std::span<const double> adc_s,
           const OfdmConfig& cfg);

cvec exact_Yl(std::span<const cplx> x_cp, std::span<const double> dac_s, std::span<const double> adc_s,
              const OfdmConfig& cfg);

cvec first_order_Yl(std::span<const cplx> x_cp, std::span<const double> dac_s, std::span<const double> adc_s,
                    const OfdmConfig& cfg);

}  // namespace sjisac
