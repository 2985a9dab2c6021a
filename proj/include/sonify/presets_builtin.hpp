#ifndef SONIFY_PRESETS_BUILTIN_HPP
#define SONIFY_PRESETS_BUILTIN_HPP

#include <array>
#include <string_view>

namespace sonify {

// Mirrors presets/*.yml; a test keeps the two in sync.
struct BuiltinPreset {
  std::string_view name;
  std::string_view yaml;
};

inline constexpr std::array<BuiltinPreset, 3> builtin_presets{{
  {"default", R"yml(
# preset name
name: "default"

# full description
description: >-
  Default preset for the synthesizer, using three saw 
  wave oscillators, two of which are detuned slightly 
  higher and lower respectively, with lower volumes. This
  gives a harmonically rich sound, suitable for filtering, 
  with detuned unison saws removing some harshness.
# oscillator information
oscillators:
  # oscillator are denoted osc<n> with n=3 by default
  #
  # level: the intrinsic volume
  #
  # detune: the change in tuning as a percentage of the 
  # input frequency
  #
  # form: the waveform, choose from:
  # ['saw', 'square', 'sine', 'tri', 'noise']
  #
  osc1:
    form: 'saw'
    level: 1.
    detune: 0.
    phase: 0
  osc2:
    form: 'saw'
    level: 0.5
    detune: -2.
    phase: 'random'
  osc3:
    form: 'saw'
    level: 0.5
    detune: 2.
    phase: 'random'

# note envelope: attack (A), decay (D) and release (R) times in
# seconds, sustain level (S) in [0, 1]; Ac, Dc, Rc bend each
# segment (0 is a straight line)
note_envelope:
  A: 0.
  D: 0.
  S: 1.
  R: 0.
  Ac: 0.
  Dc: 0.
  Rc: 0.

# low-pass filter, cutoff normalized to [0, 1] (1 is fully open)
filter: on
cutoff: 1.

# pitch low frequency oscillator (LFO), for 'vibrato'
pitch_lfo:
  use: off
  wave: 'sine'
  amount: 0.5
  freq: 3
  freq_shift: 0
  phase: 'random'
  A: 0.
  D: 0.1
  S: 1.
  R: 0.
  Ac: 0.
  Dc: 0.
  Rc: 0.
  level: 1

# volume low frequency oscillator (LFO), for a pulsing effect
# or 'tremolo'
volume_lfo:
  use: off
  wave: 'sine'
  amount: 0.5
  freq: 3
  freq_shift: 0
  phase: 'random'
  A: 0.
  D: 0.1
  S: 1.
  R: 0.
  Ac: 0.
  Dc: 0.
  Rc: 0.
  level: 1

# Master volume
volume: 1.

# Default pitch selection
pitch: 1.
)yml"},
  {"pitch_mapper", R"yml(# preset name
name: "pitch_mapper"

# full description
description: >-
  Single triangle wave oscillator with no filter, no
  enveloping and no LFOs, for mapping data onto pitch
  shift over a three octave range.

oscillators:
  osc1:
    form: 'tri'
    level: 1.
    detune: 0.
    phase: 0

note_envelope:
  A: 0.
  D: 0.
  S: 1.
  R: 0.
  Ac: 0.
  Dc: 0.
  Rc: 0.

filter: off
cutoff: 1.

pitch_lfo:
  use: off

volume_lfo:
  use: off

# pitch shift range in semitones
ranges:
  pitch_shift: [0., 36.]

volume: 1.
pitch: 1.
)yml"},
  {"windy", R"yml(# preset name
name: "windy"

# full description
description: >-
  White noise through the low-pass filter; mapping data to
  the cutoff gives a wind-like texture.

oscillators:
  osc1:
    form: 'noise'
    level: 1.
    detune: 0.
    phase: 0

note_envelope:
  A: 0.
  D: 0.
  S: 1.
  R: 0.
  Ac: 0.
  Dc: 0.
  Rc: 0.

filter: on
cutoff: 0.5

pitch_lfo:
  use: off

volume_lfo:
  use: off

volume: 1.
pitch: 1.
)yml"},
}};

}  // namespace sonify

#endif  // SONIFY_PRESETS_BUILTIN_HPP
