#ifndef SONIFY_GENERATOR_CONFIG_HPP
#define SONIFY_GENERATOR_CONFIG_HPP

#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sonify/error.hpp"
#include "sonify/generator/envelope.hpp"
#include "sonify/generator/lfo.hpp"
#include "sonify/generator/waveform.hpp"
#include "sonify/parameters.hpp"

namespace sonify {

enum class GeneratorKind { synthesiser, sampler, spectraliser };

inline std::string_view to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::synthesiser: return "synthesiser";
    case GeneratorKind::sampler: return "sampler";
    case GeneratorKind::spectraliser: return "spectraliser";
  }
  return "?";
}

inline GeneratorKind parse_generator_kind(std::string_view text) {
  if (text == "synthesiser" || text == "synthesizer") return GeneratorKind::synthesiser;
  if (text == "sampler") return GeneratorKind::sampler;
  if (text == "spectraliser" || text == "spectralizer") return GeneratorKind::spectraliser;
  throw ConfigError("unknown generator '" + std::string(text) + "'");
}

enum class LoopMode { off, forward, pingpong };

inline std::string_view to_string(LoopMode m) {
  switch (m) {
    case LoopMode::off: return "off";
    case LoopMode::forward: return "forward";
    case LoopMode::pingpong: return "pingpong";
  }
  return "?";
}

inline LoopMode parse_loop_mode(std::string_view text) {
  if (text == "off") return LoopMode::off;
  if (text == "forward") return LoopMode::forward;
  if (text == "pingpong") return LoopMode::pingpong;
  throw ConfigError("unknown loop mode '" + std::string(text) + "'");
}

/// Everything needed to turn a note request into a mono buffer.
struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::synthesiser;
  std::vector<OscillatorSpec> oscillators{OscillatorSpec{}};
  EnvelopeSpec envelope;
  LfoSpec volume_lfo;
  LfoSpec pitch_lfo;
  bool filter_on = false;
  double cutoff = 1.0;  // normalized, used when no data drives it
  double volume = 1.0;  // master volume
  double pitch = 0.5;   // note selector used when no data drives it
  double spectrum_min_hz = 100.0;
  double spectrum_max_hz = 8000.0;
  std::filesystem::path sample_directory;
  LoopMode loop = LoopMode::off;
  /// Parameter ranges for mappings that do not state their own.
  std::map<ParameterId, Interval> ranges;

  Interval range_for(ParameterId p) const {
    if (const auto it = ranges.find(p); it != ranges.end()) return it->second;
    return info(p).default_range;
  }

  friend bool operator==(const GeneratorConfig& a, const GeneratorConfig& b) {
    auto same_ranges = [&] {
      if (a.ranges.size() != b.ranges.size()) return false;
      for (const auto& [k, v] : a.ranges) {
        const auto it = b.ranges.find(k);
        if (it == b.ranges.end() || it->second.lo != v.lo || it->second.hi != v.hi)
          return false;
      }
      return true;
    };
    return a.kind == b.kind && a.oscillators == b.oscillators && a.envelope == b.envelope &&
           a.volume_lfo == b.volume_lfo && a.pitch_lfo == b.pitch_lfo &&
           a.filter_on == b.filter_on && a.cutoff == b.cutoff && a.volume == b.volume &&
           a.pitch == b.pitch && a.spectrum_min_hz == b.spectrum_min_hz &&
           a.spectrum_max_hz == b.spectrum_max_hz &&
           a.sample_directory == b.sample_directory && a.loop == b.loop && same_ranges();
  }
};

inline void validate(const GeneratorConfig& cfg, double sample_rate) {
  if (cfg.kind == GeneratorKind::synthesiser) {
    if (cfg.oscillators.empty()) throw ConfigError("synthesiser needs at least one oscillator");
    double total = 0.0;
    for (const auto& o : cfg.oscillators) {
      if (!(o.level >= 0.0)) throw ConfigError("oscillator level must be >= 0");
      total += o.level;
    }
    if (!(total > 0.0)) throw ConfigError("all oscillator levels are zero");
  }
  if (cfg.kind == GeneratorKind::spectraliser) {
    const double nyquist = sample_rate / 2.0;
    if (!(cfg.spectrum_min_hz > 0.0 && cfg.spectrum_min_hz < cfg.spectrum_max_hz &&
          cfg.spectrum_max_hz < nyquist))
      throw ConfigError("spectraliser range needs 0 < fmin < fmax < sample_rate/2");
  }
  for (const auto* lfo : {&cfg.volume_lfo, &cfg.pitch_lfo})
    if (lfo->use && !(lfo->freq > 0.0)) throw ConfigError("LFO in use needs freq > 0");
  if (!(cfg.volume >= 0.0 && cfg.volume <= 1.0))
    throw ConfigError("master volume must lie in [0, 1]");
}

}  // namespace sonify

#endif  // SONIFY_GENERATOR_CONFIG_HPP
