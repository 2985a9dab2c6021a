#ifndef SONIFY_GENERATOR_FILTER_HPP
#define SONIFY_GENERATOR_FILTER_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include "sonify/generator/control.hpp"

namespace sonify {

inline constexpr double min_cutoff_hz = 50.0;
inline constexpr double max_cutoff_hz = 16000.0;

/// Log map of a normalized cutoff in [0, 1] onto 50 Hz .. 16 kHz.
inline double cutoff_hz(double normalized) {
  const double c = std::clamp(normalized, 0.0, 1.0);
  return min_cutoff_hz * std::pow(max_cutoff_hz / min_cutoff_hz, c);
}

inline double one_pole_coefficient(double hz, double sample_rate) {
  return 1.0 - std::exp(-2.0 * std::numbers::pi * hz / sample_rate);
}

/// Time-varying one-pole (6 dB/oct) low-pass, in place. The state starts at
/// the first input sample so constant signals pass unchanged.
inline void apply_lowpass(std::span<double> buffer, const ControlSignal& cutoff,
                          double sample_rate) {
  if (buffer.empty()) return;
  double y = buffer.front();
  double a = one_pole_coefficient(cutoff_hz(cutoff.at(0)), sample_rate);
  for (std::size_t n = 0; n < buffer.size(); ++n) {
    if (!cutoff.is_constant())
      a = one_pole_coefficient(cutoff_hz(cutoff.at(n)), sample_rate);
    y += a * (buffer[n] - y);
    buffer[n] = y;
  }
}

inline void apply_lowpass(std::span<double> buffer, double cutoff, double sample_rate) {
  apply_lowpass(buffer, ControlSignal::constant(cutoff), sample_rate);
}

}  // namespace sonify

#endif  // SONIFY_GENERATOR_FILTER_HPP
