#ifndef SONIFY_GENERATOR_FFT_HPP
#define SONIFY_GENERATOR_FFT_HPP

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "sonify/error.hpp"

namespace sonify {

namespace detail {

// FFTW's planner is not thread-safe; plan execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_alloc(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (!p) throw Error("fftw_malloc failed");
  return FftwBuffer<T>(p);
}

class Plan {
public:
  explicit Plan(fftw_plan p) : plan_(p) {
    if (!plan_) throw Error("FFTW planning failed");
  }
  ~Plan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void execute() const { fftw_execute(plan_); }

private:
  fftw_plan plan_;
};

}  // namespace detail

/// Unnormalized forward real FFT; returns n/2 + 1 bins.
inline std::vector<std::complex<double>> forward_real_fft(std::span<const double> input) {
  const std::size_t n = input.size();
  const std::size_t bins = n / 2 + 1;
  auto in = detail::fftw_alloc<double>(n);
  auto out = detail::fftw_alloc<fftw_complex>(bins);
  std::copy(input.begin(), input.end(), in.get());
  std::unique_ptr<detail::Plan> plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = std::make_unique<detail::Plan>(
        fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  plan->execute();
  std::vector<std::complex<double>> result(bins);
  for (std::size_t k = 0; k < bins; ++k) result[k] = {out[k][0], out[k][1]};
  return result;
}

/// Unnormalized inverse real FFT of n/2 + 1 half-spectrum bins.
inline std::vector<double> inverse_real_fft(std::span<const std::complex<double>> half,
                                            std::size_t n) {
  const std::size_t bins = n / 2 + 1;
  if (half.size() != bins) throw Error("inverse_real_fft: wrong half-spectrum size");
  auto in = detail::fftw_alloc<fftw_complex>(bins);
  auto out = detail::fftw_alloc<double>(n);
  std::unique_ptr<detail::Plan> plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    // c2r planning may clobber the input, so fill it afterwards.
    plan = std::make_unique<detail::Plan>(
        fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  for (std::size_t k = 0; k < bins; ++k) {
    in[k][0] = half[k].real();
    in[k][1] = half[k].imag();
  }
  plan->execute();
  return std::vector<double>(out.get(), out.get() + n);
}

}  // namespace sonify

#endif  // SONIFY_GENERATOR_FFT_HPP
