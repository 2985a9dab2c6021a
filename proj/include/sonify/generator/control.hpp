#ifndef SONIFY_GENERATOR_CONTROL_HPP
#define SONIFY_GENERATOR_CONTROL_HPP

#include <cassert>
#include <cstddef>
#include <vector>

namespace sonify {

/// Block size used when resampling evolving parameters onto the audio grid.
inline constexpr std::size_t control_block_size = 256;

/// A control curve over a note's samples: either a constant, or values at
/// every `block`-th sample joined by straight lines.
class ControlSignal {
public:
  ControlSignal() = default;
  static ControlSignal constant(double v) { return ControlSignal({v}, 0); }
  static ControlSignal sampled(std::vector<double> points, std::size_t block) {
    assert(!points.empty() && (points.size() == 1 || block > 0));
    return ControlSignal(std::move(points), block);
  }

  bool is_constant() const { return points_.size() <= 1; }

  double at(std::size_t n) const {
    if (points_.empty()) return 0.0;
    if (points_.size() == 1) return points_.front();
    const std::size_t k = n / block_;
    if (k + 1 >= points_.size()) return points_.back();
    const double u = static_cast<double>(n - k * block_) / static_cast<double>(block_);
    return points_[k] + u * (points_[k + 1] - points_[k]);
  }

  const std::vector<double>& points() const { return points_; }
  std::size_t block() const { return block_; }

private:
  ControlSignal(std::vector<double> points, std::size_t block)
      : points_(std::move(points)), block_(block) {}

  std::vector<double> points_;
  std::size_t block_ = 0;
};

}  // namespace sonify

#endif  // SONIFY_GENERATOR_CONTROL_HPP
