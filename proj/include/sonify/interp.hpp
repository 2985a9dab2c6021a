#ifndef SONIFY_INTERP_HPP
#define SONIFY_INTERP_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace sonify {

/// Linearly interpolated percentile of already sorted data, endpoints
/// inclusive: p = 0 gives the minimum, p = 100 the maximum.
inline double percentile_sorted(std::span<const double> sorted, double p) {
  assert(!sorted.empty());
  const double pos = std::clamp(p, 0.0, 100.0) / 100.0 *
                     static_cast<double>(sorted.size() - 1);
  const auto below = static_cast<std::size_t>(std::floor(pos));
  if (below + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(below);
  return sorted[below] + frac * (sorted[below + 1] - sorted[below]);
}

inline double percentile(std::span<const double> data, double p) {
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  return percentile_sorted(sorted, p);
}

/// Piecewise-linear interpolation on a strictly increasing grid, holding
/// the end values outside it.
inline double interpolate(std::span<const double> grid,
                          std::span<const double> values, double x) {
  assert(!grid.empty() && grid.size() == values.size());
  if (x <= grid.front()) return values.front();
  if (x >= grid.back()) return values.back();
  const auto upper = std::upper_bound(grid.begin(), grid.end(), x);
  const auto hi = static_cast<std::size_t>(upper - grid.begin());
  const auto lo = hi - 1;
  const double u = (x - grid[lo]) / (grid[hi] - grid[lo]);
  return values[lo] + u * (values[hi] - values[lo]);
}

}  // namespace sonify

#endif  // SONIFY_INTERP_HPP
