#ifndef SONIFY_SCORE_HPP
#define SONIFY_SCORE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sonify/error.hpp"
#include "sonify/table.hpp"

namespace sonify {

inline constexpr double reference_a4_hz = 440.0;

/// Equal-tempered frequency of a MIDI note number (A4 = 69 = 440 Hz).
inline double midi_to_frequency(double midi) {
  return reference_a4_hz * std::exp2((midi - 69.0) / 12.0);
}

/// Pitch in 12-tone equal temperament.
struct Note {
  int pitch_class = 9;  // 0 = C ... 11 = B
  int octave = 4;

  int midi() const { return 12 * (octave + 1) + pitch_class; }
  double frequency() const { return midi_to_frequency(midi()); }

  friend bool operator==(const Note&, const Note&) = default;
  friend auto operator<=>(const Note& a, const Note& b) { return a.midi() <=> b.midi(); }
};

inline Note note_from_midi(int midi) {
  const int pc = ((midi % 12) + 12) % 12;
  return Note{pc, (midi - pc) / 12 - 1};
}

/// Parses names like "A4", "Db3", "C#-1", "G♭3".
inline Note parse_note(std::string_view text) {
  const std::string original(text);
  auto fail = [&](const char* why) -> Note {
    throw ConfigError("bad note name '" + original + "': " + why);
  };
  if (text.empty()) return fail("empty");

  static constexpr std::array<int, 7> letter_pc{9, 11, 0, 2, 4, 5, 7};  // A..G
  const char letter = text.front();
  int pc = 0;
  if (letter >= 'A' && letter <= 'G')
    pc = letter_pc[static_cast<std::size_t>(letter - 'A')];
  else if (letter >= 'a' && letter <= 'g')
    pc = letter_pc[static_cast<std::size_t>(letter - 'a')];
  else
    return fail("expected a letter A-G");
  text.remove_prefix(1);

  if (text.starts_with("#")) {
    ++pc;
    text.remove_prefix(1);
  } else if (text.starts_with("♯")) {
    ++pc;
    text.remove_prefix(3);
  } else if (text.starts_with("♭")) {
    --pc;
    text.remove_prefix(3);
  } else if (text.starts_with("b") && text.size() > 1) {
    --pc;
    text.remove_prefix(1);
  }

  if (text.empty()) return fail("missing octave");
  bool negative = false;
  if (text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  if (text.empty() || text.size() > 2 ||
      !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return fail("octave must be an integer");
  int octave = std::stoi(std::string(text));
  if (negative) octave = -octave;
  if (octave < -1 || octave > 9) return fail("octave outside [-1, 9]");

  // Cb and B# cross an octave boundary.
  return note_from_midi(12 * (octave + 1) + pc);
}

/// Canonical name, flats for black keys: "Db3", "A4".
inline std::string format_note(const Note& note) {
  static constexpr std::array<std::string_view, 12> names{
      "C", "Db", "D", "Eb", "E", "F", "Gb", "G", "Ab", "A", "Bb", "B"};
  return std::string(names[static_cast<std::size_t>(note.pitch_class)]) +
         std::to_string(note.octave);
}

inline double shifted_frequency(double base_hz, double semitones) {
  return base_hz * std::exp2(semitones / 12.0);
}

using Chord = std::vector<Note>;

/// Parses "Db3,Gb3,Ab3" into a chord sorted by ascending pitch.
inline Chord parse_chord(std::string_view text) {
  Chord chord;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto token = detail::trim(text.substr(start, comma - start));
    if (token.empty()) throw ConfigError("empty note in chord '" + std::string(text) + "'");
    chord.push_back(parse_note(token));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  std::stable_sort(chord.begin(), chord.end(),
                   [](const Note& a, const Note& b) { return a.midi() < b.midi(); });
  return chord;
}

class ChordSequence {
public:
  ChordSequence() = default;
  explicit ChordSequence(std::vector<Chord> chords) : chords_(std::move(chords)) {
    if (chords_.empty()) throw ConfigError("chord sequence is empty");
    for (auto& c : chords_) {
      if (c.empty()) throw ConfigError("chord with no notes");
      std::stable_sort(c.begin(), c.end(),
                       [](const Note& a, const Note& b) { return a.midi() < b.midi(); });
    }
  }

  static ChordSequence parse(std::span<const std::string> chord_texts) {
    std::vector<Chord> chords;
    for (const auto& t : chord_texts) chords.push_back(parse_chord(t));
    return ChordSequence(std::move(chords));
  }

  std::size_t size() const { return chords_.size(); }
  const Chord& operator[](std::size_t i) const { return chords_.at(i); }
  const std::vector<Chord>& chords() const { return chords_; }

private:
  std::vector<Chord> chords_;
};

struct ScoreSpec {
  ChordSequence chords;
  double duration = 1.0;

  ScoreSpec(ChordSequence seq, double seconds) : chords(std::move(seq)), duration(seconds) {
    if (chords.size() == 0) throw ConfigError("score needs at least one chord");
    if (!(duration > 0.0) || !std::isfinite(duration))
      throw ConfigError("score duration must be finite and positive");
  }
};

/// Index of the chord sounding at normalized time t: the timeline is split
/// into equal segments, one per chord.
inline std::size_t chord_at(const ScoreSpec& score, double t_norm) {
  const auto n = score.chords.size();
  const double pos = std::floor(std::clamp(t_norm, 0.0, 1.0) * static_cast<double>(n));
  return std::min(static_cast<std::size_t>(pos), n - 1);
}

/// Bins values onto `note_count` notes using note_count + 1 evenly spaced
/// percentiles: ascending values get ascending note indices. Bins are
/// right-closed ([e0, e1], (e1, e2], ...); the global maximum always joins
/// the top bin.
inline std::vector<std::size_t> assign_notes(std::span<const double> values,
                                             std::size_t note_count) {
  if (values.empty()) throw DataError("no pitch values to assign");
  if (note_count == 0) throw ConfigError("chord has no notes");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();

  // Percentile 100k/n sits at position k(m-1)/n; keep it exact in integers.
  std::vector<double> edges(note_count + 1);
  for (std::size_t k = 0; k <= note_count; ++k) {
    const std::size_t num = k * (m - 1);
    const std::size_t below = num / note_count;
    const std::size_t rem = num % note_count;
    if (rem == 0 || below + 1 >= m) {
      edges[k] = sorted[std::min(below, m - 1)];
    } else {
      const double frac = static_cast<double>(rem) / static_cast<double>(note_count);
      edges[k] = sorted[below] + frac * (sorted[below + 1] - sorted[below]);
    }
  }

  const double top = sorted.back();
  std::vector<std::size_t> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = values[i];
    if (x == top) {
      out[i] = note_count - 1;
      continue;
    }
    // first k with x <= edges[k + 1]
    const auto it = std::lower_bound(edges.begin() + 1, edges.end(), x);
    out[i] = std::min(static_cast<std::size_t>(it - (edges.begin() + 1)), note_count - 1);
  }
  return out;
}

/// Note index selected directly by a pitch coordinate in [0, 1].
inline std::size_t note_by_coordinate(double pitch, std::size_t note_count) {
  const double pos = std::floor(std::clamp(pitch, 0.0, 1.0) * static_cast<double>(note_count));
  return std::min(static_cast<std::size_t>(pos), note_count - 1);
}

}  // namespace sonify

#endif  // SONIFY_SCORE_HPP
