// Writes small synthetic bell recordings, one "<Note>.wav" per note, for
// the sampler demos and tests.
//
//   make_bell_samples <dir> [note ...]

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "sonify/buffer.hpp"
#include "sonify/error.hpp"
#include "sonify/score.hpp"
#include "sonify/wav.hpp"

namespace {

struct Partial {
  double ratio;
  double level;
  double decay;  // seconds to 1/e
};

// Loosely modelled on a tuned church bell: hum, prime, tierce, quint, nominal.
const std::vector<Partial> partials = {
    {0.5, 0.35, 0.60}, {1.0, 1.00, 0.45}, {1.2, 0.40, 0.30},
    {1.5, 0.25, 0.25}, {2.0, 0.45, 0.20}, {2.74, 0.15, 0.12}};

sonify::MultichannelBuffer bell(double freq, double rate, double seconds) {
  const auto n = static_cast<std::size_t>(std::llround(seconds * rate));
  sonify::MultichannelBuffer buf(1, n, rate);
  auto& x = buf.channels[0];
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double attack = std::min(1.0, t / 0.002);
    double v = 0.0;
    for (const auto& p : partials)
      v += p.level * std::exp(-t / p.decay) * std::sin(2.0 * std::numbers::pi * p.ratio * freq * t);
    x[i] = attack * v;
    peak = std::max(peak, std::abs(x[i]));
  }
  for (double& v : x) v *= 0.8 / peak;
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_bell_samples <dir> [note ...]\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::vector<std::string> notes(argv + 2, argv + argc);
  if (notes.empty()) notes = {"Db3", "Gb3", "Ab3", "Eb4", "F4"};
  try {
    std::filesystem::create_directories(dir);
    for (const auto& name : notes) {
      const auto note = sonify::parse_note(name);
      const auto path = dir / (sonify::format_note(note) + ".wav");
      sonify::write_wav(bell(note.frequency(), 44100.0, 0.6), path, sonify::WavEncoding::pcm16);
      std::cout << path.string() << "\n";
    }
  } catch (const sonify::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
