#ifndef SONIFY_GENERATOR_SPECTRALISER_HPP
#define SONIFY_GENERATOR_SPECTRALISER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sonify/error.hpp"
#include "sonify/generator/fft.hpp"
#include "sonify/rng.hpp"

namespace sonify {

inline constexpr double spectraliser_peak = 0.9;

/// Magnitudes for the n/2 + 1 real-FFT bins of an n-sample buffer: the input
/// spectrum stretched linearly over [fmin, fmax], zero outside.
inline std::vector<double> spectral_magnitudes(std::span<const double> spectrum, double fmin,
                                               double fmax, std::size_t n,
                                               double sample_rate) {
  const std::size_t bins = n / 2 + 1;
  const double last = static_cast<double>(spectrum.size() - 1);
  std::vector<double> mags(bins, 0.0);
  for (std::size_t k = 0; k < bins; ++k) {
    const double f = static_cast<double>(k) * sample_rate / static_cast<double>(n);
    if (f < fmin || f > fmax) continue;
    const double x = (f - fmin) / (fmax - fmin) * last;
    const auto i = std::min(static_cast<std::size_t>(std::floor(x)), spectrum.size() - 2);
    const double u = x - static_cast<double>(i);
    mags[k] = spectrum[i] + u * (spectrum[i + 1] - spectrum[i]);
  }
  return mags;
}

/// Audio from a spectrum: magnitudes per bin, i.i.d. uniform phases, inverse
/// real FFT, peak-normalized to 0.9.
inline std::vector<double> spectralise(std::span<const double> spectrum, double fmin,
                                       double fmax, double duration, double sample_rate,
                                       RandomStream& rng) {
  if (spectrum.size() < 2) throw DataError("spectrum needs at least 2 bins");
  bool any = false;
  for (double v : spectrum) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw DataError("spectrum values must be finite and non-negative");
    any = any || v > 0.0;
  }
  if (!any) throw DataError("spectrum is all zero");
  if (!(fmin > 0.0 && fmin < fmax && fmax < sample_rate / 2.0))
    throw ConfigError("spectraliser range needs 0 < fmin < fmax < sample_rate/2");

  const auto n = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(duration * sample_rate)));
  const auto mags = spectral_magnitudes(spectrum, fmin, fmax, n, sample_rate);

  std::vector<std::complex<double>> half(mags.size());
  bool in_band = false;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    if (mags[k] == 0.0) continue;
    in_band = true;
    half[k] = std::polar(mags[k], rng.phase());
  }
  if (!in_band) throw DataError("spectrum has no energy inside the frequency range");

  auto out = inverse_real_fft(half, n);
  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw DataError("spectraliser produced silence");
  const double scale = spectraliser_peak / peak;
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace sonify

#endif  // SONIFY_GENERATOR_SPECTRALISER_HPP
