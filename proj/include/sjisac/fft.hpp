// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "sjisac/types.hpp"

namespace sjisac {

// In-place unnormalized DFT. sign = -1 computes sum x e^{-j2pi kn/n},
// sign = +1 the inverse kernel. Plans are cached and shared between threads.
void dft_inplace(std::span<cplx> x, int sign);

inline void fft(std::span<cplx> x) { dft_inplace(x, -1); }
inline void ifft_unscaled(std::span<cplx> x) { dft_inplace(x, +1); }

}  // namespace sjisac
