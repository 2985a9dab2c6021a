#ifndef SONIFY_GENERATOR_WAVEFORM_HPP
#define SONIFY_GENERATOR_WAVEFORM_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "sonify/error.hpp"
#include "sonify/rng.hpp"

namespace sonify {

enum class WaveForm { saw, square, sine, tri, noise };

inline constexpr std::array<std::string_view, 5> waveform_names{"saw", "square", "sine",
                                                                 "tri", "noise"};

inline std::string_view to_string(WaveForm f) {
  return waveform_names[static_cast<std::size_t>(f)];
}

inline WaveForm parse_waveform(std::string_view text) {
  for (std::size_t i = 0; i < waveform_names.size(); ++i)
    if (waveform_names[i] == text) return static_cast<WaveForm>(i);
  throw ConfigError("unknown oscillator form '" + std::string(text) +
                    "' (choose saw, square, sine, tri, noise)");
}

/// Oscillator phase: a fixed angle in radians or drawn per note.
struct Phase {
  std::optional<double> radians = 0.0;  // empty = random

  static Phase random() { return Phase{std::nullopt}; }
  static Phase fixed(double r) { return Phase{r}; }
  bool is_random() const { return !radians.has_value(); }

  double resolve(RandomStream& rng) const {
    return radians ? *radians : rng.phase();
  }

  friend bool operator==(const Phase&, const Phase&) = default;
};

struct OscillatorSpec {
  WaveForm form = WaveForm::saw;
  double level = 1.0;
  double detune = 0.0;  // percent of the input frequency
  Phase phase;

  double effective_frequency(double f) const { return f * (1.0 + detune / 100.0); }

  friend bool operator==(const OscillatorSpec&, const OscillatorSpec&) = default;
};

/// Periodic waveform at `cycles` (phase in cycles, any real). Naive, not
/// band-limited.
inline double periodic_wave(WaveForm form, double cycles) {
  const double frac = cycles - std::floor(cycles);
  switch (form) {
    case WaveForm::sine:
      return std::sin(2.0 * std::numbers::pi * cycles);
    case WaveForm::saw:
      return 2.0 * frac - 1.0;
    case WaveForm::square:
      return std::sin(2.0 * std::numbers::pi * cycles) < 0.0 ? -1.0 : 1.0;
    case WaveForm::tri:
      return 2.0 * std::abs(2.0 * frac - 1.0) - 1.0;
    case WaveForm::noise:
      break;
  }
  return 0.0;
}

/// One oscillator sample at time t; `phase_rad` is the resolved phase.
/// Noise draws from `rng`.
inline double osc_sample(WaveForm form, double freq, double t, double phase_rad,
                         RandomStream& rng) {
  if (form == WaveForm::noise) return rng.uniform(-1.0, 1.0);
  return periodic_wave(form, freq * t + phase_rad / (2.0 * std::numbers::pi));
}

inline double osc_sample(const OscillatorSpec& spec, double freq, double t,
                         RandomStream& rng) {
  const double phase = spec.phase.resolve(rng);
  return osc_sample(spec.form, freq, t, phase, rng);
}

}  // namespace sonify

#endif  // SONIFY_GENERATOR_WAVEFORM_HPP
