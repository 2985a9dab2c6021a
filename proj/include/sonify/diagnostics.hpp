#ifndef SONIFY_DIAGNOSTICS_HPP
#define SONIFY_DIAGNOSTICS_HPP

#include <functional>
#include <iostream>
#include <mutex>
#include <string_view>
#include <utility>

namespace sonify {

using WarningSink = std::function<void(std::string_view)>;

namespace detail {

struct WarningState {
  std::mutex mutex;
  WarningSink sink = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
};

inline WarningState& warning_state() {
  static WarningState state;
  return state;
}

}  // namespace detail

/// Replaces the process-wide warning sink and returns the previous one.
inline WarningSink set_warning_sink(WarningSink sink) {
  auto& st = detail::warning_state();
  std::lock_guard lock(st.mutex);
  return std::exchange(st.sink, std::move(sink));
}

inline void warn(std::string_view msg) {
  auto& st = detail::warning_state();
  std::lock_guard lock(st.mutex);
  if (st.sink) st.sink(msg);
}

/// Installs a sink for the lifetime of the guard (tests, CLI verbosity).
class ScopedWarningSink {
public:
  explicit ScopedWarningSink(WarningSink sink)
      : previous_(set_warning_sink(std::move(sink))) {}
  ~ScopedWarningSink() { set_warning_sink(std::move(previous_)); }
  ScopedWarningSink(const ScopedWarningSink&) = delete;
  ScopedWarningSink& operator=(const ScopedWarningSink&) = delete;

private:
  WarningSink previous_;
};

}  // namespace sonify

#endif  // SONIFY_DIAGNOSTICS_HPP
