#ifndef SONIFY_SOURCES_HPP
#define SONIFY_SOURCES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sonify/diagnostics.hpp"
#include "sonify/error.hpp"
#include "sonify/interp.hpp"
#include "sonify/parameters.hpp"
#include "sonify/table.hpp"

namespace sonify {

enum class LimitMode { percentile, data_units };

/// How a range of data values maps onto a range of parameter values.
struct MapLimits {
  LimitMode mode = LimitMode::percentile;
  double lo = 0.0;
  double hi = 100.0;
  double param_lo = 0.0;
  double param_hi = 1.0;

  static MapLimits percentiles(double lo, double hi, double param_lo, double param_hi) {
    return {LimitMode::percentile, lo, hi, param_lo, param_hi};
  }
  static MapLimits data_units(double lo, double hi, double param_lo, double param_hi) {
    return {LimitMode::data_units, lo, hi, param_lo, param_hi};
  }
  /// Full data range onto the parameter's default range.
  static MapLimits full_range(ParameterId p) {
    const auto r = info(p).default_range;
    return percentiles(0.0, 100.0, r.lo, r.hi);
  }

  friend bool operator==(const MapLimits&, const MapLimits&) = default;
};

inline void validate(const MapLimits& limits) {
  const bool finite = std::isfinite(limits.lo) && std::isfinite(limits.hi) &&
                      std::isfinite(limits.param_lo) && std::isfinite(limits.param_hi);
  if (!finite) throw ConfigError("map limits must be finite");
  if (limits.mode == LimitMode::percentile &&
      !(limits.lo >= 0.0 && limits.lo < limits.hi && limits.hi <= 100.0))
    throw ConfigError("percentile limits need 0 <= lo < hi <= 100");
  if (limits.mode == LimitMode::data_units && limits.lo > limits.hi)
    throw ConfigError("data-unit limits need lo <= hi");
  if (limits.param_lo > limits.param_hi)
    throw ConfigError("parameter range needs param_lo <= param_hi");
}

inline void validate(const MapLimits& limits, ParameterId p) {
  validate(limits);
  if (!info(p).domain.contains(Interval{limits.param_lo, limits.param_hi}))
    throw ConfigError("parameter range [" + std::to_string(limits.param_lo) + ", " +
                      std::to_string(limits.param_hi) + "] lies outside the domain of '" +
                      std::string(name(p)) + "'");
}

/// Clip each value to the resolved data range [L, H] and rescale it
/// affinely onto [param_lo, param_hi].
inline std::vector<double> map_parameter(std::span<const double> data,
                                         const MapLimits& limits) {
  if (data.empty()) throw DataError("cannot map an empty data array");
  validate(limits);
  for (double x : data)
    if (!std::isfinite(x)) throw DataError("data contains a non-finite value");

  double lo = limits.lo;
  double hi = limits.hi;
  if (limits.mode == LimitMode::percentile) {
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    lo = percentile_sorted(sorted, limits.lo);
    hi = percentile_sorted(sorted, limits.hi);
  }

  std::vector<double> out(data.size(), limits.param_lo);
  if (!(hi > lo)) {
    warn("degenerate mapping range (constant data); all values mapped to " +
         std::to_string(limits.param_lo));
    return out;
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double u = (std::clamp(data[i], lo, hi) - lo) / (hi - lo);
    out[i] = std::clamp(std::lerp(limits.param_lo, limits.param_hi, u),
                        limits.param_lo, limits.param_hi);
  }
  return out;
}

/// Binds one data column to one sound parameter.
struct Mapping {
  ParameterId parameter;
  std::string column;
  MapLimits limits;

  Mapping(ParameterId p, std::string col)
      : parameter(p), column(std::move(col)), limits(MapLimits::full_range(p)) {}
  Mapping(ParameterId p, std::string col, MapLimits lim)
      : parameter(p), column(std::move(col)), limits(lim) {}
};

/// Discrete sources: one per data row, each with fixed parameter values.
class EventSet {
public:
  std::size_t count() const { return count_; }

  bool is_mapped(ParameterId p) const { return values_.contains(p); }

  std::span<const double> mapped(ParameterId p) const {
    const auto it = values_.find(p);
    if (it == values_.end()) return {};
    return it->second;
  }

  /// Mapped value, else the parameter's default, else empty (the generator
  /// configuration decides).
  std::optional<double> value(ParameterId p, std::size_t event) const {
    const auto it = values_.find(p);
    if (it != values_.end()) return it->second.at(event);
    return info(p).default_value;
  }

  /// Raw spectrum shared by all events (spectraliser input), if any.
  std::span<const double> spectrum() const { return spectrum_; }

private:
  friend EventSet build_event_set(const Table&, std::span<const Mapping>);

  std::size_t count_ = 0;
  std::map<ParameterId, std::vector<double>> values_;
  std::vector<double> spectrum_;
};

namespace detail {

inline void check_spectrum(std::span<const double> spectrum) {
  if (spectrum.size() < 2) throw DataError("spectrum needs at least 2 values");
  bool any = false;
  for (double v : spectrum) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw DataError("spectrum values must be finite and non-negative");
    any = any || v > 0.0;
  }
  if (!any) throw DataError("spectrum is all zero");
}

inline void check_unique(std::span<const Mapping> mappings) {
  for (std::size_t i = 0; i < mappings.size(); ++i)
    for (std::size_t j = i + 1; j < mappings.size(); ++j)
      if (mappings[i].parameter == mappings[j].parameter)
        throw ConfigError("parameter '" + std::string(name(mappings[i].parameter)) +
                          "' mapped more than once");
}

}  // namespace detail

inline EventSet build_event_set(const Table& columns, std::span<const Mapping> mappings) {
  detail::check_unique(mappings);
  for (const auto& m : mappings) {
    if (!is_mappable(m.parameter))
      throw ConfigError("parameter '" + std::string(name(m.parameter)) +
                        "' is not mappable");
    if (m.parameter != ParameterId::spectrum) validate(m.limits, m.parameter);
  }

  EventSet set;
  bool spectrum_only = !mappings.empty();
  for (const auto& m : mappings) {
    const auto data = columns.column(m.column);
    if (m.parameter == ParameterId::spectrum) {
      detail::check_spectrum(data);
      set.spectrum_.assign(data.begin(), data.end());
      continue;
    }
    spectrum_only = false;
    set.values_.emplace(m.parameter, map_parameter(data, m.limits));
  }
  if (columns.rows() == 0) throw DataError("event table has no rows");
  set.count_ = spectrum_only ? 1 : columns.rows();
  return set;
}

/// One parameter's trajectory over normalized time.
struct Evolution {
  std::vector<double> grid;
  std::vector<double> values;
};

/// A single persistent source whose evolvable parameters follow data series.
class ObjectSource {
public:
  const std::map<ParameterId, double>& static_values() const { return static_; }
  const std::map<ParameterId, Evolution>& evolutions() const { return evolutions_; }

  bool evolves(ParameterId p) const { return evolutions_.contains(p); }
  const Evolution* evolution(ParameterId p) const {
    const auto it = evolutions_.find(p);
    return it == evolutions_.end() ? nullptr : &it->second;
  }

  /// Evolution value at t if the parameter evolves, else its static value,
  /// else the parameter default.
  std::optional<double> value_at(ParameterId p, double t) const {
    if (const auto* evo = evolution(p)) return interpolate(evo->grid, evo->values, t);
    if (const auto it = static_.find(p); it != static_.end()) return it->second;
    return info(p).default_value;
  }

  std::span<const double> spectrum() const { return spectrum_; }

private:
  friend ObjectSource build_object_source(const Table&, std::string_view,
                                          std::span<const Mapping>,
                                          const std::map<ParameterId, double>&);

  std::map<ParameterId, double> static_;
  std::map<ParameterId, Evolution> evolutions_;
  std::vector<double> spectrum_;
};

/// Builds an object source from a series indexed by `time_column`. Series
/// mappings must target evolvable parameters (or `spectrum`, taken raw);
/// `statics` hold once-per-source values in parameter units.
inline ObjectSource build_object_source(const Table& series, std::string_view time_column,
                                        std::span<const Mapping> mappings,
                                        const std::map<ParameterId, double>& statics = {}) {
  detail::check_unique(mappings);
  for (const auto& m : mappings) {
    if (m.parameter == ParameterId::spectrum) continue;
    if (m.parameter == ParameterId::time_evo)
      throw ConfigError("time_evo is defined by the time column, not a mapping");
    if (!is_evolvable(m.parameter))
      throw ConfigError("parameter '" + std::string(name(m.parameter)) +
                        "' is not evolvable and cannot follow a series");
    validate(m.limits, m.parameter);
  }
  for (const auto& [p, v] : statics) {
    if (!is_mappable(p) || p == ParameterId::spectrum)
      throw ConfigError("parameter '" + std::string(name(p)) + "' cannot take a static value");
    if (!std::isfinite(v) || !info(p).domain.contains(v))
      throw ConfigError("static value for '" + std::string(name(p)) + "' outside its domain");
    for (const auto& m : mappings)
      if (m.parameter == p)
        throw ConfigError("parameter '" + std::string(name(p)) +
                          "' given both a static value and a series");
  }

  const auto time = series.column(time_column);
  if (time.size() < 2) throw DataError("object series needs at least 2 time points");
  const double t0 = time.front();
  const double span = time.back() - t0;
  std::vector<double> grid(time.size());
  for (std::size_t i = 0; i < time.size(); ++i) grid[i] = (time[i] - t0) / span;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i + 1] > grid[i]) || !std::isfinite(grid[i + 1]))
      throw DataError("time column '" + std::string(time_column) +
                      "' is not strictly increasing at row " + std::to_string(i + 2));
  grid.front() = 0.0;
  grid.back() = 1.0;

  ObjectSource src;
  src.static_ = statics;
  src.evolutions_.emplace(ParameterId::time_evo, Evolution{grid, grid});
  for (const auto& m : mappings) {
    const auto data = series.column(m.column);
    if (m.parameter == ParameterId::spectrum) {
      detail::check_spectrum(data);
      src.spectrum_.assign(data.begin(), data.end());
      continue;
    }
    src.evolutions_.emplace(m.parameter, Evolution{grid, map_parameter(data, m.limits)});
  }
  return src;
}

/// Value of `param` at normalized time t (clamped to [0, 1]).
inline double evaluate_evolution(const ObjectSource& src, ParameterId param, double t) {
  if (auto v = src.value_at(param, std::clamp(t, 0.0, 1.0))) return *v;
  throw ConfigError("object source has no value for '" + std::string(name(param)) + "'");
}

using SourceSet = std::variant<EventSet, ObjectSource>;

}  // namespace sonify

#endif  // SONIFY_SOURCES_HPP
