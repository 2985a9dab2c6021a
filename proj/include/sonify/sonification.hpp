#ifndef SONIFY_SONIFICATION_HPP
#define SONIFY_SONIFICATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "sonify/buffer.hpp"
#include "sonify/channels.hpp"
#include "sonify/error.hpp"
#include "sonify/generator/config.hpp"
#include "sonify/generator/control.hpp"
#include "sonify/generator/sampler.hpp"
#include "sonify/generator/synthesiser.hpp"
#include "sonify/rng.hpp"
#include "sonify/score.hpp"
#include "sonify/sources.hpp"
#include "sonify/wav.hpp"

namespace sonify {

inline constexpr double default_event_hold = 0.5;

struct RenderPlan {
  SourceSet sources;
  ScoreSpec score;
  GeneratorConfig generator;
  MicrophoneBank bank;
  double sample_rate = 44100.0;
  std::uint64_t master_seed = 0;
  std::shared_ptr<const SampleBank> samples;  // sampler generator only
  /// Sustain added after attack + decay for event notes (seconds).
  double event_hold = default_event_hold;
  /// Worker threads for note rendering; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct NoteLogEntry {
  std::size_t source = 0;
  std::string note;
  double start = 0.0;     // seconds
  double duration = 0.0;  // seconds, including release
};

struct RenderResult {
  MultichannelBuffer audio;
  std::size_t clip_count = 0;  // samples beyond +-1 before limiting
  std::vector<NoteLogEntry> notes;
  std::vector<std::size_t> notes_per_bin;  // by note index within the chord
};

inline bool is_supported_sample_rate(double rate) {
  return rate == 44100.0 || rate == 48000.0 || rate == 96000.0;
}

/// Gentle limiter: identity up to |0.99|, then a tanh knee approaching 1.
inline double soft_clip(double x) {
  constexpr double knee = 0.99;
  const double a = std::abs(x);
  if (a <= knee) return x;
  const double y = knee + (1.0 - knee) * std::tanh((a - knee) / (1.0 - knee));
  return std::copysign(y, x);
}

/// Direction of an object source at normalized time t: grid-point
/// directions joined by spherical-linear interpolation.
inline Direction evaluate_direction(const ObjectSource& src, double t) {
  const auto* az = src.evolution(ParameterId::azimuth);
  const auto* po = src.evolution(ParameterId::polar);
  auto at = [&](double x) {
    return Direction{evaluate_evolution(src, ParameterId::azimuth, x),
                     evaluate_evolution(src, ParameterId::polar, x)};
  };
  if (!az && !po) return at(t);
  std::vector<double> grid;
  if (az) grid.insert(grid.end(), az->grid.begin(), az->grid.end());
  if (po) grid.insert(grid.end(), po->grid.begin(), po->grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  t = std::clamp(t, 0.0, 1.0);
  if (t <= grid.front()) return at(grid.front());
  if (t >= grid.back()) return at(grid.back());
  const auto hi = static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), t) -
                                           grid.begin());
  const double g0 = grid[hi - 1], g1 = grid[hi];
  return slerp(at(g0), at(g1), (t - g0) / (g1 - g0));
}

namespace detail {

/// Runs job(i) for i in [begin, end) on up to `threads` workers; results are
/// written by index so the schedule cannot affect them.
inline void parallel_for(std::size_t begin, std::size_t end, unsigned threads,
                         const std::function<void(std::size_t)>& job) {
  const std::size_t count = end - begin;
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) job(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = begin + w; i < end; i += workers) job(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

inline GeneratorResources resources_for(const RenderPlan& plan, std::span<const double> spectrum) {
  return GeneratorResources{plan.samples.get(), spectrum};
}

inline void check_plan(const RenderPlan& plan) {
  if (!is_supported_sample_rate(plan.sample_rate))
    throw ConfigError("sample rate must be 44100, 48000 or 96000 Hz");
  validate(plan.generator, plan.sample_rate);
  if (plan.bank.size() == 0) throw ConfigError("microphone bank is empty");
  if (!(plan.event_hold >= 0.0)) throw ConfigError("event hold must be >= 0");

  std::span<const double> spectrum;
  if (const auto* ev = std::get_if<EventSet>(&plan.sources)) {
    if (ev->count() == 0) throw ConfigError("render plan has no sources");
    spectrum = ev->spectrum();
  } else {
    spectrum = std::get<ObjectSource>(plan.sources).spectrum();
  }
  if (plan.generator.kind == GeneratorKind::spectraliser && spectrum.empty())
    throw ConfigError("spectraliser generator needs a 'spectrum' mapping");
  if (plan.generator.kind == GeneratorKind::sampler) {
    if (!plan.samples || plan.samples->empty())
      throw ConfigError("sampler generator needs a sample bank");
    if (plan.samples->sample_rate() != plan.sample_rate)
      throw ConfigError("sample bank rate differs from the render rate");
  }
}

/// Writes once-per-source generator values (envelope, LFO rates, cutoff)
/// into a copy of the config.
template <typename Lookup>
GeneratorConfig with_source_values(GeneratorConfig cfg, Lookup&& value) {
  auto set = [&](ParameterId p, double& field) {
    if (auto v = value(p)) field = *v;
  };
  set(ParameterId::volume_envelope_attack, cfg.envelope.attack);
  set(ParameterId::volume_envelope_decay, cfg.envelope.decay);
  set(ParameterId::volume_envelope_sustain, cfg.envelope.sustain);
  set(ParameterId::volume_envelope_release, cfg.envelope.release);
  set(ParameterId::volume_lfo_freq, cfg.volume_lfo.freq);
  set(ParameterId::volume_lfo_freq_shift, cfg.volume_lfo.freq_shift);
  set(ParameterId::volume_lfo_amount, cfg.volume_lfo.amount);
  set(ParameterId::pitch_lfo_freq, cfg.pitch_lfo.freq);
  set(ParameterId::pitch_lfo_freq_shift, cfg.pitch_lfo.freq_shift);
  set(ParameterId::pitch_lfo_amount, cfg.pitch_lfo.amount);
  set(ParameterId::cutoff, cfg.cutoff);
  return cfg;
}

inline std::size_t max_chord_size(const ScoreSpec& score) {
  std::size_t n = 0;
  for (const auto& c : score.chords.chords()) n = std::max(n, c.size());
  return n;
}

/// Event sources are rendered and mixed in batches of this many.
inline constexpr std::size_t event_batch = 64;

inline void render_events(const RenderPlan& plan, const EventSet& events,
                          MultichannelBuffer& out, RenderResult& result) {
  const double rate = plan.sample_rate;
  const double duration = plan.score.duration;
  const std::size_t count = events.count();
  const std::size_t bins = max_chord_size(plan.score);
  result.notes_per_bin.assign(bins, 0);

  const bool pitch_mapped = events.is_mapped(ParameterId::pitch);
  std::vector<std::size_t> bin_of(count, 0);
  if (pitch_mapped) bin_of = assign_notes(events.mapped(ParameterId::pitch), bins);

  struct EventNote {
    std::size_t start = 0;
    Note note;
    GeneratorConfig cfg;
    NoteRequest request;
    Direction direction;
  };

  auto prepare = [&](std::size_t i) {
    auto value = [&](ParameterId p) { return events.value(p, i); };
    const double t = std::clamp(*value(ParameterId::time), 0.0, 1.0);
    const auto& chord = plan.score.chords[chord_at(plan.score, t)];
    const std::size_t index = pitch_mapped
                                  ? bin_of[i] % chord.size()
                                  : note_by_coordinate(plan.generator.pitch, chord.size());
    EventNote ev;
    ev.start = static_cast<std::size_t>(std::llround(t * duration * rate));
    ev.note = chord[index];
    ev.cfg = with_source_values(plan.generator, [&](ParameterId p) -> std::optional<double> {
      if (!events.is_mapped(p)) return std::nullopt;
      return value(p);
    });
    const auto& env = ev.cfg.envelope;
    const double note_length =
        env.attack + env.decay + std::max(0.0, plan.event_hold - env.release);
    ev.request.midi = ev.note.midi();
    ev.request.duration = note_length + env.release;
    ev.request.sample_rate = rate;
    ev.request.controls.note_length = note_length;
    if (const double shift = *value(ParameterId::pitch_shift); shift != 0.0)
      ev.request.controls.pitch_shift = ControlSignal::constant(shift);
    ev.request.controls.volume = ControlSignal::constant(*value(ParameterId::volume));
    ev.direction = Direction{*value(ParameterId::azimuth), *value(ParameterId::polar)};
    if (pitch_mapped) ++result.notes_per_bin[bin_of[i]];
    else ++result.notes_per_bin[index];
    return ev;
  };

  const auto resources = resources_for(plan, events.spectrum());
  const unsigned threads = resolve_threads(plan.threads);
  for (std::size_t begin = 0; begin < count; begin += event_batch) {
    const std::size_t end = std::min(count, begin + event_batch);
    std::vector<EventNote> batch;
    for (std::size_t i = begin; i < end; ++i) batch.push_back(prepare(i));
    std::vector<MonoBuffer> audio(batch.size());
    parallel_for(begin, end, threads, [&](std::size_t i) {
      auto& ev = batch[i - begin];
      RandomStream rng(derive_seed(plan.master_seed, i));
      audio[i - begin] = render_note(ev.cfg, ev.request, resources, rng);
    });
    for (std::size_t i = begin; i < end; ++i) {
      const auto& ev = batch[i - begin];
      mix_into(out, audio[i - begin], ev.start, ev.direction, plan.bank);
      result.notes.push_back({i, format_note(ev.note), static_cast<double>(ev.start) / rate,
                              ev.request.duration});
    }
  }
}

/// Samples an evolvable parameter every control block over [first, first + n).
inline std::optional<ControlSignal> control_for(const ObjectSource& src, ParameterId p,
                                                std::size_t first, std::size_t n,
                                                std::size_t total) {
  if (!src.evolves(p)) {
    if (const auto v = src.value_at(p, 0.0); v && src.static_values().contains(p))
      return ControlSignal::constant(*v);
    return std::nullopt;
  }
  std::vector<double> points;
  for (std::size_t k = 0; k * control_block_size < n + control_block_size; ++k) {
    const double t = static_cast<double>(first + k * control_block_size) /
                     static_cast<double>(total);
    points.push_back(evaluate_evolution(src, p, t));
  }
  return ControlSignal::sampled(std::move(points), control_block_size);
}

inline void render_object(const RenderPlan& plan, const ObjectSource& src,
                          MultichannelBuffer& out, RenderResult& result) {
  const double rate = plan.sample_rate;
  const std::size_t total = out.frames();
  const std::size_t segments = plan.score.chords.size();
  result.notes_per_bin.assign(max_chord_size(plan.score), 0);

  const GeneratorConfig cfg =
      with_source_values(plan.generator, [&](ParameterId p) -> std::optional<double> {
        if (!src.static_values().contains(p)) return std::nullopt;
        return src.static_values().at(p);
      });
  const bool moving = src.evolves(ParameterId::azimuth) || src.evolves(ParameterId::polar);
  const auto resources = resources_for(plan, src.spectrum());

  struct Voice {
    std::size_t start = 0;
    std::size_t seed = 0;
    Note note;
    NoteRequest request;
  };
  std::vector<Voice> voices;
  for (std::size_t k = 0; k < segments; ++k) {
    const std::size_t s0 = total * k / segments;
    const std::size_t s1 = total * (k + 1) / segments;
    const std::size_t n = std::max<std::size_t>(1, s1 - s0);
    const double seg = static_cast<double>(n) / rate;
    const auto& chord = plan.score.chords[k];
    for (std::size_t v = 0; v < chord.size(); ++v) {
      Voice voice;
      voice.start = s0;
      voice.seed = k * 1024 + v;
      voice.note = chord[v];
      voice.request.midi = chord[v].midi();
      voice.request.duration = seg;
      voice.request.sample_rate = rate;
      auto& ctl = voice.request.controls;
      ctl.note_length = std::max(0.0, seg - cfg.envelope.release);
      ctl.pitch_shift = control_for(src, ParameterId::pitch_shift, s0, n, total);
      ctl.cutoff = control_for(src, ParameterId::cutoff, s0, n, total);
      ctl.volume = control_for(src, ParameterId::volume, s0, n, total);
      ctl.volume_lfo.amount = control_for(src, ParameterId::volume_lfo_amount, s0, n, total);
      ctl.volume_lfo.freq_shift =
          control_for(src, ParameterId::volume_lfo_freq_shift, s0, n, total);
      ctl.pitch_lfo.amount = control_for(src, ParameterId::pitch_lfo_amount, s0, n, total);
      ctl.pitch_lfo.freq_shift = control_for(src, ParameterId::pitch_lfo_freq_shift, s0, n, total);
      voices.push_back(std::move(voice));
      ++result.notes_per_bin[v];
    }
  }

  std::vector<MonoBuffer> audio(voices.size());
  parallel_for(0, voices.size(), resolve_threads(plan.threads), [&](std::size_t i) {
    RandomStream rng(derive_seed(plan.master_seed, voices[i].seed));
    audio[i] = render_note(cfg, voices[i].request, resources, rng);
  });

  for (std::size_t i = 0; i < voices.size(); ++i) {
    const auto& voice = voices[i];
    DirectionTrack track(evaluate_direction(src, 0.0));
    if (moving) {
      std::vector<Direction> dirs(audio[i].size());
      for (std::size_t n = 0; n < dirs.size(); ++n)
        dirs[n] = evaluate_direction(
            src, static_cast<double>(voice.start + n) / static_cast<double>(total));
      track = DirectionTrack(std::move(dirs));
    }
    mix_into(out, audio[i], voice.start, track, plan.bank);
    result.notes.push_back({i, format_note(voice.note), static_cast<double>(voice.start) / rate,
                            voice.request.duration});
  }
}

}  // namespace detail

/// Renders every source through the generator, spatializes it through the
/// microphone bank and soft-limits the sum.
inline RenderResult render(const RenderPlan& plan) {
  detail::check_plan(plan);
  const auto frames = sample_count(plan.score.duration, plan.sample_rate);
  RenderResult result;
  result.audio = MultichannelBuffer(plan.bank.size(), frames, plan.sample_rate);

  if (const auto* ev = std::get_if<EventSet>(&plan.sources))
    detail::render_events(plan, *ev, result.audio, result);
  else
    detail::render_object(plan, std::get<ObjectSource>(plan.sources), result.audio, result);

  for (auto& ch : result.audio.channels)
    for (double& v : ch) {
      if (!std::isfinite(v)) throw Error("render produced a non-finite sample");
      if (std::abs(v) > 1.0) ++result.clip_count;
      v = soft_clip(v);
    }
  return result;
}

}  // namespace sonify

#endif  // SONIFY_SONIFICATION_HPP
