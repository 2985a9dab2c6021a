#ifndef SONIFY_GENERATOR_SAMPLER_HPP
#define SONIFY_GENERATOR_SAMPLER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sonify/buffer.hpp"
#include "sonify/error.hpp"
#include "sonify/generator/config.hpp"
#include "sonify/score.hpp"
#include "sonify/wav.hpp"

namespace sonify {

/// Recorded notes keyed by MIDI number, all at one sample rate.
class SampleBank {
public:
  SampleBank(double sample_rate, LoopMode loop) : sample_rate_(sample_rate), loop_(loop) {
    if (!(sample_rate > 0.0)) throw ConfigError("sample bank rate must be positive");
  }

  void add(const Note& note, MonoBuffer samples) {
    if (samples.empty())
      throw DataError("empty sample for note " + format_note(note));
    samples_[note.midi()] = std::move(samples);
  }

  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }
  double sample_rate() const { return sample_rate_; }
  LoopMode loop() const { return loop_; }
  const std::map<int, MonoBuffer>& samples() const { return samples_; }

  /// Recorded note closest in semitones to `midi`; ties go to the lower note.
  int nearest(double midi) const {
    if (samples_.empty()) throw ConfigError("sample bank is empty");
    int best = samples_.begin()->first;
    double best_dist = std::abs(midi - best);
    for (const auto& [key, buf] : samples_) {
      const double dist = std::abs(midi - key);
      if (dist < best_dist) {
        best = key;
        best_dist = dist;
      }
    }
    return best;
  }

private:
  double sample_rate_;
  LoopMode loop_;
  std::map<int, MonoBuffer> samples_;
};

/// Linear-interpolation resampling to a new rate.
inline MonoBuffer resample_linear(std::span<const double> input, double from_rate,
                                  double to_rate) {
  if (input.empty() || from_rate == to_rate) return MonoBuffer(input.begin(), input.end());
  const auto out_len = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(input.size()) * to_rate /
                                                from_rate)));
  MonoBuffer out(out_len);
  const double step = from_rate / to_rate;
  for (std::size_t n = 0; n < out_len; ++n) {
    const double pos = static_cast<double>(n) * step;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= input.size()) {
      out[n] = input.back();
      continue;
    }
    const double u = pos - static_cast<double>(i);
    out[n] = input[i] + u * (input[i + 1] - input[i]);
  }
  return out;
}

/// Loads "<Note>.wav" files (e.g. A4.wav, Db3.wav) from a directory, mixing
/// multichannel files to mono and resampling to `engine_rate`.
inline SampleBank load_sample_bank(const std::filesystem::path& dir, double engine_rate,
                                   LoopMode loop) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("sample directory not found: " + dir.string());
  SampleBank bank(engine_rate, loop);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
    if (ext == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const Note note = parse_note(f.stem().string());
    const auto wav = read_wav(f);
    MonoBuffer mono(wav.frames(), 0.0);
    for (const auto& ch : wav.channels)
      for (std::size_t n = 0; n < mono.size(); ++n)
        mono[n] += ch[n] / static_cast<double>(wav.channel_count());
    bank.add(note, resample_linear(mono, wav.sample_rate, engine_rate));
  }
  if (bank.empty()) throw IoError("no .wav samples in " + dir.string());
  return bank;
}

/// Source index for virtual position k of a looped buffer of length `len`;
/// empty past the end when looping is off.
inline std::optional<std::size_t> loop_index(std::size_t k, std::size_t len, LoopMode mode) {
  switch (mode) {
    case LoopMode::off:
      if (k < len) return k;
      return std::nullopt;
    case LoopMode::forward:
      return k % len;
    case LoopMode::pingpong: {
      const std::size_t m = k % (2 * len);
      return m < len ? m : 2 * len - 1 - m;
    }
  }
  return std::nullopt;
}

namespace detail {

inline double looped_sample(std::span<const double> src, double pos, LoopMode mode) {
  const auto k = static_cast<std::size_t>(pos);
  const double u = pos - static_cast<double>(k);
  auto at = [&](std::size_t i) {
    const auto idx = loop_index(i, src.size(), mode);
    return idx ? src[*idx] : 0.0;
  };
  const double a = at(k);
  return u == 0.0 ? a : a + u * (at(k + 1) - a);
}

}  // namespace detail

/// Plays the bank sample nearest to `midi`, pitched to `midi` plus a
/// per-sample semitone offset, filling `samples` output samples.
inline MonoBuffer play_sample(const SampleBank& bank, double midi,
                              std::span<const double> semitone_offsets, std::size_t samples) {
  const int key = bank.nearest(midi);
  const auto& src = bank.samples().at(key);
  const double base_ratio = std::exp2((midi - key) / 12.0);
  MonoBuffer out(samples, 0.0);
  double pos = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    out[n] = detail::looped_sample(src, pos, bank.loop());
    const double offset = semitone_offsets.empty() ? 0.0 : semitone_offsets[n];
    pos += offset == 0.0 ? base_ratio : base_ratio * std::exp2(offset / 12.0);
  }
  return out;
}

/// Renders `target` shifted by `semitones` for `duration` seconds at the
/// bank's rate.
inline MonoBuffer sample_note(const SampleBank& bank, const Note& target, double semitones,
                              double duration) {
  const auto n = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(duration * bank.sample_rate())));
  return play_sample(bank, target.midi() + semitones, {}, n);
}

}  // namespace sonify

#endif  // SONIFY_GENERATOR_SAMPLER_HPP
