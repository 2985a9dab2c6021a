#ifndef SONIFY_BUFFER_HPP
#define SONIFY_BUFFER_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "sonify/error.hpp"

namespace sonify {

using MonoBuffer = std::vector<double>;

/// Planar multichannel audio: one equally long buffer per channel.
struct MultichannelBuffer {
  double sample_rate = 44100.0;
  std::vector<MonoBuffer> channels;

  MultichannelBuffer() = default;
  MultichannelBuffer(std::size_t channel_count, std::size_t frames, double rate)
      : sample_rate(rate), channels(channel_count, MonoBuffer(frames, 0.0)) {}

  std::size_t channel_count() const { return channels.size(); }
  std::size_t frames() const { return channels.empty() ? 0 : channels.front().size(); }
  double duration() const { return static_cast<double>(frames()) / sample_rate; }
};

/// Throws unless all channels share one length and every sample is finite.
inline void validate(const MultichannelBuffer& buf) {
  if (!(buf.sample_rate > 0.0)) throw Error("buffer sample rate must be positive");
  for (const auto& ch : buf.channels) {
    if (ch.size() != buf.frames()) throw Error("buffer channels differ in length");
    for (double v : ch)
      if (!std::isfinite(v)) throw Error("buffer contains a non-finite sample");
  }
}

}  // namespace sonify

#endif  // SONIFY_BUFFER_HPP
