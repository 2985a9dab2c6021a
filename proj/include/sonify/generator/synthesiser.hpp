#ifndef SONIFY_GENERATOR_SYNTHESISER_HPP
#define SONIFY_GENERATOR_SYNTHESISER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sonify/buffer.hpp"
#include "sonify/error.hpp"
#include "sonify/generator/config.hpp"
#include "sonify/generator/control.hpp"
#include "sonify/generator/envelope.hpp"
#include "sonify/generator/filter.hpp"
#include "sonify/generator/lfo.hpp"
#include "sonify/generator/sampler.hpp"
#include "sonify/generator/spectraliser.hpp"
#include "sonify/generator/waveform.hpp"
#include "sonify/rng.hpp"

namespace sonify {

/// Time-varying inputs for one note. Unset signals fall back to the
/// generator configuration.
struct NoteControls {
  double note_length = 1.0;  // seconds until release
  std::optional<ControlSignal> pitch_shift;  // semitones
  std::optional<ControlSignal> cutoff;       // normalized [0, 1]
  std::optional<ControlSignal> volume;       // source volume [0, 1]
  LfoControls volume_lfo;
  LfoControls pitch_lfo;
};

inline std::size_t sample_count(double duration, double sample_rate) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(duration * sample_rate)));
}

namespace detail {

// Stream indices keep every consumer of randomness independent of the others.
inline constexpr std::uint64_t pitch_lfo_stream = 1000;
inline constexpr std::uint64_t volume_lfo_stream = 1001;
inline constexpr std::uint64_t spectrum_stream = 1002;

inline std::vector<double> pitch_offsets(const GeneratorConfig& cfg, const NoteControls& ctl,
                                         std::size_t n, double sample_rate,
                                         RandomStream& rng) {
  auto lfo_rng = rng.fork(pitch_lfo_stream);
  auto offsets = pitch_lfo_semitones(cfg.pitch_lfo, n, sample_rate, ctl.note_length,
                                     lfo_rng, ctl.pitch_lfo);
  if (ctl.pitch_shift)
    for (std::size_t i = 0; i < n; ++i) offsets[i] += ctl.pitch_shift->at(i);
  return offsets;
}

/// Additive oscillator bank with phase accumulation, normalized by the
/// summed levels.
inline MonoBuffer oscillator_bank(const GeneratorConfig& cfg, double freq,
                                  std::span<const double> offsets, std::size_t n,
                                  double sample_rate, RandomStream& rng) {
  double total_level = 0.0;
  for (const auto& o : cfg.oscillators) total_level += o.level;
  if (!(total_level > 0.0)) throw ConfigError("all oscillator levels are zero");

  MonoBuffer out(n, 0.0);
  for (std::size_t k = 0; k < cfg.oscillators.size(); ++k) {
    const auto& osc = cfg.oscillators[k];
    auto osc_rng = rng.fork(k);
    if (osc.level == 0.0) continue;
    const double f = osc.effective_frequency(freq);
    double cycles = osc.phase.resolve(osc_rng) / (2.0 * std::numbers::pi);
    cycles -= std::floor(cycles);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = osc.form == WaveForm::noise ? osc_rng.uniform(-1.0, 1.0)
                                                   : periodic_wave(osc.form, cycles);
      out[i] += osc.level * v;
      const double inc = offsets[i] == 0.0 ? f : f * std::exp2(offsets[i] / 12.0);
      cycles += inc / sample_rate;
      cycles -= std::floor(cycles);
    }
  }
  for (double& v : out) v /= total_level;
  return out;
}

/// Shared modulation chain after the raw signal: filter, volume LFO,
/// envelope, then source and master volume.
inline void modulate(MonoBuffer& buf, const GeneratorConfig& cfg, const NoteControls& ctl,
                     double sample_rate, RandomStream& rng) {
  if (cfg.filter_on)
    apply_lowpass(buf, ctl.cutoff ? *ctl.cutoff : ControlSignal::constant(cfg.cutoff),
                  sample_rate);
  auto lfo_rng = rng.fork(volume_lfo_stream);
  apply_volume_lfo(buf, cfg.volume_lfo, sample_rate, ctl.note_length, lfo_rng,
                   ctl.volume_lfo);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double source_volume = ctl.volume ? std::clamp(ctl.volume->at(i), 0.0, 1.0) : 1.0;
    buf[i] *= envelope_value(cfg.envelope, t, ctl.note_length) * cfg.volume * source_volume;
  }
}

}  // namespace detail

/// Synthesiser voice: oscillators -> pitch modulation -> filter -> volume
/// LFO -> envelope -> master volume. Returns round(duration * rate) samples.
inline MonoBuffer synthesize(const GeneratorConfig& cfg, double freq, double duration,
                             double sample_rate, const NoteControls& ctl, RandomStream& rng) {
  if (!(duration > 0.0)) throw ConfigError("note duration must be positive");
  if (!(freq > 0.0)) throw ConfigError("note frequency must be positive");
  const std::size_t n = sample_count(duration, sample_rate);
  const auto offsets = detail::pitch_offsets(cfg, ctl, n, sample_rate, rng);
  auto buf = detail::oscillator_bank(cfg, freq, offsets, n, sample_rate, rng);
  detail::modulate(buf, cfg, ctl, sample_rate, rng);
  return buf;
}

/// Everything that identifies one note to render.
struct NoteRequest {
  double midi = 69.0;  // fractional MIDI pitch of the base note
  double duration = 1.0;
  double sample_rate = 44100.0;
  NoteControls controls;
};

/// Inputs beyond the config that some generator kinds need.
struct GeneratorResources {
  const SampleBank* bank = nullptr;
  std::span<const double> spectrum;
};

/// Renders one note with whichever generator `cfg` selects.
inline MonoBuffer render_note(const GeneratorConfig& cfg, const NoteRequest& req,
                              const GeneratorResources& res, RandomStream& rng) {
  const double rate = req.sample_rate;
  switch (cfg.kind) {
    case GeneratorKind::synthesiser:
      return synthesize(cfg, midi_to_frequency(req.midi), req.duration, rate, req.controls,
                        rng);
    case GeneratorKind::sampler: {
      if (!res.bank) throw ConfigError("sampler generator needs a sample bank");
      if (res.bank->sample_rate() != rate)
        throw ConfigError("sample bank rate differs from the render rate");
      const std::size_t n = sample_count(req.duration, rate);
      const auto offsets = detail::pitch_offsets(cfg, req.controls, n, rate, rng);
      auto buf = play_sample(*res.bank, req.midi, offsets, n);
      detail::modulate(buf, cfg, req.controls, rate, rng);
      return buf;
    }
    case GeneratorKind::spectraliser: {
      if (res.spectrum.empty()) throw ConfigError("spectraliser generator needs a spectrum");
      auto spec_rng = rng.fork(detail::spectrum_stream);
      auto buf = spectralise(res.spectrum, cfg.spectrum_min_hz, cfg.spectrum_max_hz,
                             req.duration, rate, spec_rng);
      detail::modulate(buf, cfg, req.controls, rate, rng);
      return buf;
    }
  }
  throw ConfigError("unknown generator kind");
}

}  // namespace sonify

#endif  // SONIFY_GENERATOR_SYNTHESISER_HPP
