#ifndef SONIFY_GENERATOR_LFO_HPP
#define SONIFY_GENERATOR_LFO_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "sonify/generator/control.hpp"
#include "sonify/generator/envelope.hpp"
#include "sonify/generator/waveform.hpp"
#include "sonify/rng.hpp"

namespace sonify {

/// Low-frequency oscillator. `amount` is a fractional depth for volume
/// (tremolo) and semitones for pitch (vibrato).
struct LfoSpec {
  bool use = false;
  WaveForm wave = WaveForm::sine;
  double amount = 0.5;
  double freq = 3.0;
  double freq_shift = 0.0;  // semitones applied to freq
  Phase phase = Phase::random();
  EnvelopeSpec envelope{0.0, 0.1, 1.0, 0.0, 0.0, 0.0, 0.0};
  double level = 1.0;

  friend bool operator==(const LfoSpec&, const LfoSpec&) = default;
};

/// Per-note overrides for the evolvable LFO fields.
struct LfoControls {
  std::optional<ControlSignal> amount;
  std::optional<ControlSignal> freq_shift;
};

/// Raw LFO trajectory over a note: waveform value w, LFO envelope level and
/// effective depth (amount x level) per sample.
struct LfoTrace {
  std::vector<double> wave;
  std::vector<double> envelope;
  std::vector<double> depth;
};

inline LfoTrace trace_lfo(const LfoSpec& lfo, std::size_t samples, double sample_rate,
                          double note_length, RandomStream& rng,
                          const LfoControls& controls = {}) {
  LfoTrace trace;
  trace.wave.resize(samples);
  trace.envelope.resize(samples);
  trace.depth.resize(samples);
  double cycles = lfo.phase.resolve(rng) / (2.0 * std::numbers::pi);
  for (std::size_t n = 0; n < samples; ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    const double shift = controls.freq_shift ? controls.freq_shift->at(n) : lfo.freq_shift;
    const double amount = controls.amount ? controls.amount->at(n) : lfo.amount;
    trace.wave[n] = lfo.wave == WaveForm::noise ? rng.uniform(-1.0, 1.0)
                                                : periodic_wave(lfo.wave, cycles);
    trace.envelope[n] = envelope_value(lfo.envelope, t, note_length);
    trace.depth[n] = std::max(amount, 0.0) * lfo.level;
    cycles += lfo.freq * std::exp2(shift / 12.0) / sample_rate;
    cycles -= std::floor(cycles);
  }
  return trace;
}

/// Tremolo: scales each sample by 1 - depth * (1 - w) / 2 * env, a gain in
/// [0, 1], so the output never exceeds the input peak.
inline void apply_volume_lfo(std::span<double> buffer, const LfoSpec& lfo,
                             double sample_rate, double note_length, RandomStream& rng,
                             const LfoControls& controls = {}) {
  if (!lfo.use) return;
  const auto tr = trace_lfo(lfo, buffer.size(), sample_rate, note_length, rng, controls);
  for (std::size_t n = 0; n < buffer.size(); ++n) {
    const double depth = std::min(tr.depth[n], 1.0);
    const double gain = 1.0 - depth * (1.0 - tr.wave[n]) / 2.0 * tr.envelope[n];
    buffer[n] *= std::clamp(gain, 0.0, 1.0);
  }
}

/// Vibrato as a semitone offset per sample: depth * w * env.
inline std::vector<double> pitch_lfo_semitones(const LfoSpec& lfo, std::size_t samples,
                                               double sample_rate, double note_length,
                                               RandomStream& rng,
                                               const LfoControls& controls = {}) {
  std::vector<double> out(samples, 0.0);
  if (!lfo.use) return out;
  const auto tr = trace_lfo(lfo, samples, sample_rate, note_length, rng, controls);
  for (std::size_t n = 0; n < samples; ++n)
    out[n] = tr.depth[n] * tr.wave[n] * tr.envelope[n];
  return out;
}

}  // namespace sonify

#endif  // SONIFY_GENERATOR_LFO_HPP
