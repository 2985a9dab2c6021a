#ifndef SONIFY_CHANNELS_HPP
#define SONIFY_CHANNELS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sonify/buffer.hpp"
#include "sonify/error.hpp"

namespace sonify {

/// Point on the unit sphere. Azimuth counter-clockwise from the front
/// (pi/2 = left); polar from the zenith (pi/2 = horizon).
struct Direction {
  double azimuth = 0.0;
  double polar = std::numbers::pi / 2;

  static Direction from_degrees(double az_deg, double polar_deg) {
    return {az_deg * std::numbers::pi / 180.0, polar_deg * std::numbers::pi / 180.0};
  }

  std::array<double, 3> unit_vector() const {
    const double s = std::sin(polar);
    return {s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar)};
  }

  static Direction from_vector(const std::array<double, 3>& v) {
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (!(r > 0.0)) return {};
    double az = std::atan2(v[1], v[0]);
    if (az < 0.0) az += 2.0 * std::numbers::pi;
    return {az, std::acos(std::clamp(v[2] / r, -1.0, 1.0))};
  }
};

/// Spherical-linear interpolation between two directions, u in [0, 1].
inline Direction slerp(const Direction& a, const Direction& b, double u) {
  const auto va = a.unit_vector();
  const auto vb = b.unit_vector();
  const double dot = std::clamp(va[0] * vb[0] + va[1] * vb[1] + va[2] * vb[2], -1.0, 1.0);
  const double omega = std::acos(dot);
  std::array<double, 3> v{};
  if (omega < 1e-9) {
    for (int i = 0; i < 3; ++i) v[i] = va[i] + u * (vb[i] - va[i]);
  } else {
    const double s = std::sin(omega);
    const double wa = std::sin((1.0 - u) * omega) / s;
    const double wb = std::sin(u * omega) / s;
    for (int i = 0; i < 3; ++i) v[i] = wa * va[i] + wb * vb[i];
  }
  return Direction::from_vector(v);
}

/// Real spherical harmonic in ambiX convention (ACN order, SN3D
/// normalization, no Condon-Shortley phase).
inline double sn3d_harmonic(int acn, const Direction& dir) {
  if (acn < 0) throw ConfigError("negative ACN index");
  const int l = static_cast<int>(std::floor(std::sqrt(static_cast<double>(acn))));
  const int m = acn - l * l - l;
  const int am = std::abs(m);
  const double x = std::cos(dir.polar);  // sin(elevation)

  // Associated Legendre P_l^|m|(x) without the Condon-Shortley phase.
  double pmm = 1.0;
  const double somx2 = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  for (int i = 1; i <= am; ++i) pmm *= (2.0 * i - 1.0) * somx2;
  double plm = pmm;
  if (l > am) {
    double pm1 = x * (2.0 * am + 1.0) * pmm;
    double pm2 = pmm;
    plm = pm1;
    for (int ll = am + 2; ll <= l; ++ll) {
      plm = (x * (2.0 * ll - 1.0) * pm1 - (ll + am - 1.0) * pm2) / (ll - am);
      pm2 = pm1;
      pm1 = plm;
    }
  }

  // sqrt((2 - delta_m0) (l - |m|)! / (l + |m|)!)
  double ratio = 1.0;
  for (int i = l - am + 1; i <= l + am; ++i) ratio /= i;
  const double norm = std::sqrt((am == 0 ? 1.0 : 2.0) * ratio);

  const double trig = m > 0 ? std::cos(m * dir.azimuth)
                    : m < 0 ? std::sin(am * dir.azimuth)
                            : 1.0;
  return norm * plm * trig;
}

struct Omni {};
struct Cardioid {
  Direction axis;
};
struct SphericalHarmonic {
  int order = 1;
  int acn = 0;
};

using Pattern = std::variant<Omni, Cardioid, SphericalHarmonic>;

/// A virtual microphone: one output channel.
struct Microphone {
  Pattern pattern = Omni{};
  double gain = 1.0;
  std::string label;
};

inline double antenna_gain(const Microphone& mic, const Direction& dir) {
  struct Visitor {
    const Direction& dir;
    double operator()(const Omni&) const { return 1.0; }
    double operator()(const Cardioid& c) const {
      const auto a = c.axis.unit_vector();
      const auto d = dir.unit_vector();
      const double cos_gamma = std::clamp(a[0] * d[0] + a[1] * d[1] + a[2] * d[2], -1.0, 1.0);
      return 0.5 * (1.0 + cos_gamma);
    }
    double operator()(const SphericalHarmonic& sh) const {
      return sn3d_harmonic(sh.acn, dir);
    }
  };
  return mic.gain * std::visit(Visitor{dir}, mic.pattern);
}

struct MicrophoneBank {
  std::string system;
  std::vector<Microphone> mics;

  std::size_t size() const { return mics.size(); }

  /// Gains of every microphone for one direction.
  std::vector<double> gains(const Direction& dir) const {
    std::vector<double> g(mics.size());
    for (std::size_t j = 0; j < mics.size(); ++j) g[j] = antenna_gain(mics[j], dir);
    return g;
  }
};

inline constexpr int max_ambisonic_order = 7;

namespace detail {

inline Microphone horizon_cardioid(double az_deg, std::string label) {
  double az = std::fmod(az_deg, 360.0);
  if (az < 0.0) az += 360.0;
  return {Cardioid{Direction::from_degrees(az, 90.0)}, 1.0, std::move(label)};
}

}  // namespace detail

/// Standard audio systems: mono, stereo, 5.1, 7.1 and ambiX<n>.
inline MicrophoneBank make_bank(std::string_view system) {
  using detail::horizon_cardioid;
  MicrophoneBank bank{std::string(system), {}};
  if (system == "mono") {
    bank.mics = {{Omni{}, 1.0, "M"}};
  } else if (system == "stereo") {
    bank.mics = {horizon_cardioid(45, "L"), horizon_cardioid(-45, "R")};
  } else if (system == "5.1") {
    bank.mics = {horizon_cardioid(30, "L"),   horizon_cardioid(-30, "R"),
                 horizon_cardioid(0, "C"),    {Omni{}, 0.5, "LFE"},
                 horizon_cardioid(110, "Ls"), horizon_cardioid(-110, "Rs")};
  } else if (system == "7.1") {
    bank.mics = {horizon_cardioid(30, "L"),    horizon_cardioid(-30, "R"),
                 horizon_cardioid(0, "C"),     {Omni{}, 0.5, "LFE"},
                 horizon_cardioid(135, "Lb"),  horizon_cardioid(-135, "Rb"),
                 horizon_cardioid(90, "Ls"),   horizon_cardioid(-90, "Rs")};
  } else if (system.starts_with("ambiX") && system.size() > 5) {
    const auto digits = system.substr(5);
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
        digits.size() > 2)
      throw ConfigError("unknown audio system '" + std::string(system) + "'");
    const int order = std::stoi(std::string(digits));
    if (order < 1 || order > max_ambisonic_order)
      throw ConfigError("ambisonic order must be 1.." + std::to_string(max_ambisonic_order));
    const int count = (order + 1) * (order + 1);
    for (int a = 0; a < count; ++a)
      bank.mics.push_back({SphericalHarmonic{order, a}, 1.0, "ACN" + std::to_string(a)});
  } else {
    throw ConfigError("unknown audio system '" + std::string(system) +
                      "' (mono, stereo, 5.1, 7.1, ambiX1..ambiX" +
                      std::to_string(max_ambisonic_order) + ")");
  }
  return bank;
}

/// Where a source points over the samples of its signal.
class DirectionTrack {
public:
  DirectionTrack() = default;
  /*implicit*/ DirectionTrack(Direction fixed) : fixed_(fixed) {}
  explicit DirectionTrack(std::vector<Direction> per_sample) : series_(std::move(per_sample)) {}

  bool is_static() const { return series_.empty(); }
  std::size_t size() const { return series_.size(); }
  const Direction& at(std::size_t n) const { return is_static() ? fixed_ : series_.at(n); }

private:
  Direction fixed_;
  std::vector<Direction> series_;
};

/// Adds `signal`, spatialized by `track`, into `out` starting at frame
/// `offset`; frames past the end of `out` are dropped.
inline void mix_into(MultichannelBuffer& out, std::span<const double> signal,
                     std::size_t offset, const DirectionTrack& track,
                     const MicrophoneBank& bank) {
  if (out.channel_count() != bank.size())
    throw Error("output buffer has " + std::to_string(out.channel_count()) +
                " channels, bank has " + std::to_string(bank.size()));
  if (!track.is_static() && track.size() != signal.size())
    throw Error("direction series length differs from signal length");
  const std::size_t frames = out.frames();
  if (offset >= frames) return;
  const std::size_t count = std::min(signal.size(), frames - offset);

  if (track.is_static()) {
    const auto g = bank.gains(track.at(0));
    for (std::size_t j = 0; j < bank.size(); ++j) {
      auto& ch = out.channels[j];
      for (std::size_t n = 0; n < count; ++n) ch[offset + n] += g[j] * signal[n];
    }
    return;
  }
  for (std::size_t n = 0; n < count; ++n) {
    const auto g = bank.gains(track.at(n));
    for (std::size_t j = 0; j < bank.size(); ++j)
      out.channels[j][offset + n] += g[j] * signal[n];
  }
}

/// C_j(t) = sum_i gain_j(dir_i(t)) * S_i(t), summed in ascending source order.
inline MultichannelBuffer mix(std::span<const MonoBuffer> signals,
                              std::span<const DirectionTrack> directions,
                              const MicrophoneBank& bank, double sample_rate) {
  if (signals.size() != directions.size())
    throw Error("mix needs one direction track per signal");
  const std::size_t frames = signals.empty() ? 0 : signals.front().size();
  for (const auto& s : signals)
    if (s.size() != frames) throw Error("mix signals differ in length");
  MultichannelBuffer out(bank.size(), frames, sample_rate);
  for (std::size_t i = 0; i < signals.size(); ++i)
    mix_into(out, signals[i], 0, directions[i], bank);
  return out;
}

}  // namespace sonify

#endif  // SONIFY_CHANNELS_HPP
