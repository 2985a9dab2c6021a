#ifndef SONIFY_RNG_HPP
#define SONIFY_RNG_HPP

#include <cstdint>
#include <numbers>
#include <random>

namespace sonify {

/// splitmix64 finalizer; used to derive independent per-source seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Seeded random stream with a platform-independent sequence.
///
/// std::mt19937_64 output is fully specified by the standard; the
/// distributions in <random> are not, so conversion to reals is done here.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double phase() { return uniform(0.0, 2.0 * std::numbers::pi); }

  /// Independent child stream, e.g. one per oscillator.
  RandomStream fork(std::uint64_t index) {
    return RandomStream(derive_seed(engine_(), index));
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace sonify

#endif  // SONIFY_RNG_HPP
