// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string_view>

#include "sjisac/jitter.hpp"
#include "sjisac/types.hpp"

namespace sjisac {

enum class SamplingMode { BB, BP };

enum class Engine {
  Farrow,      // two cascaded base-rate Farrow passes; exact at zero jitter
  SincOracle,  // direct double sum over the jittered sinc kernel
  FineGrid,    // converter model: L-fold interpolation, jittered DAC, anti-alias, jittered ADC
};

std::string_view to_string(SamplingMode m);
std::string_view to_string(Engine e);
SamplingMode parse_mode(std::string_view s);
Engine parse_engine(std::string_view s);

// Reconstruction and anti-aliasing filters of the FineGrid engine. The
// defaults mirror a common rational resampler design: Kaiser beta 5 and
// +-10 taps at the converter rate, evaluated on an 8x finer grid.
struct ConverterModel {
  int upsample = 8;
  int half_taps = 10;
  double kaiser_beta = 5.0;
};

struct FrontendConfig {
  SamplingMode mode = SamplingMode::BB;
  double f_if_hz = 0.0;
  double B_hz = 500e6;
  JitterTrace dac_jitter;
  JitterTrace adc_jitter;
  Engine engine = Engine::Farrow;
  ConverterModel converter;
  double ddc_guard = 0.25;  // brick-wall half width B/2 * (1 + guard)
};

/// Jittered DAC then ADC on a stream at the converter rate. Works on complex
/// BB streams and on real IF streams (imaginary part ignored and kept zero).
SampleStream bb_chain(const SampleStream& tx, const FrontendConfig& cfg);

/// DUC to f_IF, bb_chain on the real IF stream, DDC with brick-wall low-pass.
SampleStream bp_chain(const SampleStream& tx, const FrontendConfig& cfg);

/// Dispatch on cfg.mode.
SampleStream frontend_chain(const SampleStream& tx, const FrontendConfig& cfg);

/// Engine kernels on raw samples. Delays are in units of the sample period.
template <class T>
std::vector<T> run_engine(std::span<const T> x, std::span<const double> dac_delay,
                          std::span<const double> adc_delay, Engine engine,
                          const ConverterModel& conv = {});

}  // namespace sjisac
