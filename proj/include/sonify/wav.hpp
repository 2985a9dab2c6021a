#ifndef SONIFY_WAV_HPP
#define SONIFY_WAV_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sonify/buffer.hpp"
#include "sonify/error.hpp"

namespace sonify {

enum class WavEncoding { pcm16, float32 };

inline WavEncoding parse_wav_encoding(std::string_view text) {
  if (text == "pcm16") return WavEncoding::pcm16;
  if (text == "float32") return WavEncoding::float32;
  throw ConfigError("unknown WAV encoding '" + std::string(text) + "' (pcm16 or float32)");
}

inline std::string_view to_string(WavEncoding e) {
  return e == WavEncoding::pcm16 ? "pcm16" : "float32";
}

namespace detail {

inline void put_u16(std::vector<char>& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

inline void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_tag(std::vector<char>& out, const char (&tag)[5]) {
  out.insert(out.end(), tag, tag + 4);
}

/// Symmetric 16-bit quantization, rounding half away from zero.
inline std::int16_t quantize_pcm16(double x) {
  const double scaled = std::round(std::clamp(x, -1.0, 1.0) * 32767.0);
  return static_cast<std::int16_t>(scaled);
}

}  // namespace detail

/// Serializes `buf` as a RIFF/WAVE image: interleaved frames in channel order.
inline std::vector<char> encode_wav(const MultichannelBuffer& buf, WavEncoding enc) {
  validate(buf);
  if (buf.channel_count() == 0) throw Error("cannot write a WAV with no channels");
  if (buf.channel_count() > 65535) throw Error("WAV supports at most 65535 channels");

  const bool is_float = enc == WavEncoding::float32;
  const std::uint32_t bytes = is_float ? 4 : 2;
  const auto channels = static_cast<std::uint32_t>(buf.channel_count());
  const std::uint64_t data_size = std::uint64_t{bytes} * channels * buf.frames();
  const std::uint32_t fmt_size = is_float ? 18 : 16;
  const std::uint64_t riff_size =
      4 + (8 + fmt_size) + (is_float ? 12 : 0) + 8 + data_size;
  if (riff_size > std::numeric_limits<std::uint32_t>::max())
    throw IoError("audio too long for a RIFF file");
  const auto rate = static_cast<std::uint32_t>(std::llround(buf.sample_rate));

  std::vector<char> out;
  out.reserve(static_cast<std::size_t>(riff_size + 8));
  detail::put_tag(out, "RIFF");
  detail::put_u32(out, static_cast<std::uint32_t>(riff_size));
  detail::put_tag(out, "WAVE");
  detail::put_tag(out, "fmt ");
  detail::put_u32(out, fmt_size);
  detail::put_u16(out, is_float ? 3 : 1);
  detail::put_u16(out, static_cast<std::uint16_t>(channels));
  detail::put_u32(out, rate);
  detail::put_u32(out, rate * channels * bytes);
  detail::put_u16(out, static_cast<std::uint16_t>(channels * bytes));
  detail::put_u16(out, static_cast<std::uint16_t>(bytes * 8));
  if (is_float) {
    detail::put_u16(out, 0);  // cbSize
    detail::put_tag(out, "fact");
    detail::put_u32(out, 4);
    detail::put_u32(out, static_cast<std::uint32_t>(buf.frames()));
  }
  detail::put_tag(out, "data");
  detail::put_u32(out, static_cast<std::uint32_t>(data_size));

  for (std::size_t n = 0; n < buf.frames(); ++n) {
    for (const auto& ch : buf.channels) {
      if (is_float) {
        detail::put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(ch[n])));
      } else {
        detail::put_u16(out, static_cast<std::uint16_t>(detail::quantize_pcm16(ch[n])));
      }
    }
  }
  return out;
}

inline void write_wav(const MultichannelBuffer& buf, const std::filesystem::path& path,
                      WavEncoding enc = WavEncoding::pcm16) {
  const auto bytes = encode_wav(buf, enc);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

namespace detail {

inline std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
         std::uint32_t{p[3]} << 24;
}

inline std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

}  // namespace detail

/// Decodes PCM (8/16/24/32-bit), IEEE float (32/64-bit) and
/// WAVE_FORMAT_EXTENSIBLE images of either.
inline MultichannelBuffer decode_wav(std::span<const char> image, std::string_view origin) {
  const std::string where(origin);
  const auto* data = reinterpret_cast<const unsigned char*>(image.data());
  const std::size_t size = image.size();
  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0)
    throw IoError(where + ": not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* samples = nullptr;
  std::size_t sample_bytes = 0;

  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const unsigned char* chunk = data + pos;
    const std::size_t len = detail::get_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min(len, size - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw IoError(where + ": truncated fmt chunk");
      format = detail::get_u16(chunk + 8);
      channels = detail::get_u16(chunk + 10);
      rate = detail::get_u32(chunk + 12);
      bits = detail::get_u16(chunk + 22);
      if (format == 0xFFFE && avail >= 26) format = detail::get_u16(chunk + 8 + 24);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      samples = data + body;
      sample_bytes = avail;
    }
    pos = body + len + (len & 1);
  }
  if (channels == 0 || rate == 0) throw IoError(where + ": missing or invalid fmt chunk");
  if (!samples) throw IoError(where + ": missing data chunk");
  const bool is_float = format == 3;
  if (!(format == 1 || is_float)) throw IoError(where + ": unsupported WAV format tag");
  if ((is_float && bits != 32 && bits != 64) ||
      (!is_float && bits != 8 && bits != 16 && bits != 24 && bits != 32))
    throw IoError(where + ": unsupported bit depth " + std::to_string(bits));

  const std::size_t width = bits / 8;
  const std::size_t frames = sample_bytes / (width * channels);
  MultichannelBuffer buf(channels, frames, static_cast<double>(rate));
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = samples + (n * channels + c) * width;
      double v = 0.0;
      if (is_float && bits == 32) {
        v = std::bit_cast<float>(detail::get_u32(p));
      } else if (is_float) {
        const std::uint64_t lo = detail::get_u32(p), hi = detail::get_u32(p + 4);
        v = std::bit_cast<double>(lo | hi << 32);
      } else if (bits == 8) {
        v = (static_cast<int>(p[0]) - 128) / 127.0;
      } else if (bits == 16) {
        v = static_cast<std::int16_t>(detail::get_u16(p)) / 32767.0;
      } else if (bits == 24) {
        std::int32_t s = p[0] | p[1] << 8 | p[2] << 16;
        if (s & 0x800000) s -= 0x1000000;
        v = s / 8388607.0;
      } else {
        v = static_cast<std::int32_t>(detail::get_u32(p)) / 2147483647.0;
      }
      buf.channels[c][n] = is_float ? v : std::clamp(v, -1.0, 1.0);
    }
  }
  return buf;
}

inline MultichannelBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read " + path.string());
  return decode_wav(bytes, path.string());
}

}  // namespace sonify

#endif  // SONIFY_WAV_HPP
