#ifndef SONIFY_GENERATOR_ENVELOPE_HPP
#define SONIFY_GENERATOR_ENVELOPE_HPP

#include <algorithm>
#include <cmath>

namespace sonify {

/// ADSR amplitude envelope. Times in seconds; each segment's unit ramp u is
/// bent to u^(1 + curvature), so zero curvature is linear.
struct EnvelopeSpec {
  double attack = 0.0;
  double decay = 0.0;
  double sustain = 1.0;
  double release = 0.0;
  double attack_curve = 0.0;
  double decay_curve = 0.0;
  double release_curve = 0.0;

  friend bool operator==(const EnvelopeSpec&, const EnvelopeSpec&) = default;
};

namespace detail {

inline double bend(double u, double curvature) {
  return std::pow(std::clamp(u, 0.0, 1.0), 1.0 + curvature);
}

/// Envelope level while the note is held.
inline double held_level(const EnvelopeSpec& env, double t) {
  if (t < env.attack) return bend(t / env.attack, env.attack_curve);
  const double td = t - env.attack;
  if (td < env.decay)
    return 1.0 - (1.0 - env.sustain) * bend(td / env.decay, env.decay_curve);
  return env.sustain;
}

}  // namespace detail

/// Level at time t after note-on for a note released at `note_length`.
/// Release starts from whatever level the note had reached.
inline double envelope_value(const EnvelopeSpec& env, double t, double note_length) {
  if (t < 0.0) return 0.0;
  double level = 0.0;
  if (t < note_length) {
    level = detail::held_level(env, t);
  } else {
    const double tr = t - note_length;
    if (tr < env.release) {
      const double start = detail::held_level(env, note_length);
      level = start * (1.0 - detail::bend(tr / env.release, env.release_curve));
    }
  }
  return std::clamp(level, 0.0, 1.0);
}

}  // namespace sonify

#endif  // SONIFY_GENERATOR_ENVELOPE_HPP
