#ifndef SONIFY_PARAMETERS_HPP
#define SONIFY_PARAMETERS_HPP

#include <array>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "sonify/error.hpp"

namespace sonify {

/// Sound parameters that data can drive.
enum class ParameterId : std::size_t {
  polar,
  azimuth,
  volume,
  pitch,
  time,
  cutoff,
  time_evo,
  spectrum,
  pitch_shift,
  volume_envelope_attack,
  volume_envelope_decay,
  volume_envelope_sustain,
  volume_envelope_release,
  volume_lfo_freq,
  volume_lfo_freq_shift,
  volume_lfo_amount,
  pitch_lfo_freq,
  pitch_lfo_freq_shift,
  pitch_lfo_amount,
};

inline constexpr std::size_t parameter_count = 19;

/// Which part of the pipeline consumes a parameter.
enum class ParameterSubject { channels, sources, score, generator };

struct Interval {
  double lo;
  double hi;

  constexpr bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  constexpr bool contains(Interval other) const noexcept {
    return contains(other.lo) && contains(other.hi);
  }
};

struct ParameterInfo {
  ParameterId id;
  std::string_view name;
  ParameterSubject subject;
  bool mappable;
  bool evolvable;
  /// Legal values of the parameter itself.
  Interval domain;
  /// Parameter range used when a mapping does not give one.
  Interval default_range;
  /// Value for unmapped sources; empty when the generator config decides.
  std::optional<double> default_value;
};

namespace detail {

inline constexpr double inf = std::numeric_limits<double>::infinity();
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// clang-format off
inline constexpr std::array<ParameterInfo, parameter_count> parameter_table{{
  {ParameterId::polar, "polar", ParameterSubject::channels, true, true,
   {0.0, std::numbers::pi}, {0.0, std::numbers::pi}, std::numbers::pi / 2},
  {ParameterId::azimuth, "azimuth", ParameterSubject::channels, true, true,
   {0.0, two_pi}, {0.0, two_pi}, 0.0},
  {ParameterId::volume, "volume", ParameterSubject::sources, true, true,
   {0.0, 1.0}, {0.0, 1.0}, 1.0},
  {ParameterId::pitch, "pitch", ParameterSubject::sources, true, false,
   {0.0, 1.0}, {0.0, 1.0}, 0.5},
  {ParameterId::time, "time", ParameterSubject::score, true, false,
   {0.0, 1.0}, {0.0, 1.0}, 0.0},
  {ParameterId::cutoff, "cutoff", ParameterSubject::generator, true, true,
   {0.0, 1.0}, {0.0, 1.0}, 1.0},
  {ParameterId::time_evo, "time_evo", ParameterSubject::score, false, true,
   {0.0, 1.0}, {0.0, 1.0}, 0.0},
  {ParameterId::spectrum, "spectrum", ParameterSubject::generator, true, false,
   {0.0, inf}, {0.0, 1.0}, std::nullopt},
  {ParameterId::pitch_shift, "pitch_shift", ParameterSubject::generator, true, true,
   {-inf, inf}, {0.0, 12.0}, 0.0},
  {ParameterId::volume_envelope_attack, "volume_envelope/A", ParameterSubject::generator, true, false,
   {0.0, inf}, {0.0, 1.0}, std::nullopt},
  {ParameterId::volume_envelope_decay, "volume_envelope/D", ParameterSubject::generator, true, false,
   {0.0, inf}, {0.0, 1.0}, std::nullopt},
  {ParameterId::volume_envelope_sustain, "volume_envelope/S", ParameterSubject::generator, true, false,
   {0.0, 1.0}, {0.0, 1.0}, std::nullopt},
  {ParameterId::volume_envelope_release, "volume_envelope/R", ParameterSubject::generator, true, false,
   {0.0, inf}, {0.0, 1.0}, std::nullopt},
  {ParameterId::volume_lfo_freq, "volume_lfo/freq", ParameterSubject::generator, true, false,
   {0.0, inf}, {0.5, 10.0}, std::nullopt},
  {ParameterId::volume_lfo_freq_shift, "volume_lfo/freq_shift", ParameterSubject::generator, true, true,
   {-inf, inf}, {0.0, 12.0}, std::nullopt},
  {ParameterId::volume_lfo_amount, "volume_lfo/amount", ParameterSubject::generator, true, true,
   {0.0, inf}, {0.0, 1.0}, std::nullopt},
  {ParameterId::pitch_lfo_freq, "pitch_lfo/freq", ParameterSubject::generator, true, false,
   {0.0, inf}, {0.5, 10.0}, std::nullopt},
  {ParameterId::pitch_lfo_freq_shift, "pitch_lfo/freq_shift", ParameterSubject::generator, true, true,
   {-inf, inf}, {0.0, 12.0}, std::nullopt},
  {ParameterId::pitch_lfo_amount, "pitch_lfo/amount", ParameterSubject::generator, true, true,
   {0.0, inf}, {0.0, 1.0}, std::nullopt},
}};
// clang-format on

}  // namespace detail

inline constexpr std::span<const ParameterInfo, parameter_count> all_parameters() {
  return detail::parameter_table;
}

constexpr const ParameterInfo& info(ParameterId id) {
  return detail::parameter_table[static_cast<std::size_t>(id)];
}

constexpr std::string_view name(ParameterId id) { return info(id).name; }
constexpr bool is_mappable(ParameterId id) { return info(id).mappable; }
constexpr bool is_evolvable(ParameterId id) { return info(id).evolvable; }

inline std::optional<ParameterId> find_parameter(std::string_view text) {
  for (const auto& row : detail::parameter_table)
    if (row.name == text) return row.id;
  return std::nullopt;
}

inline ParameterId parse_parameter(std::string_view text) {
  if (auto id = find_parameter(text)) return *id;
  throw ConfigError("unknown sound parameter '" + std::string(text) + "'");
}

}  // namespace sonify

#endif  // SONIFY_PARAMETERS_HPP
