// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/oracles.hpp"
#include "sonify/job.hpp"
#include "sonify/sonify.hpp"

using namespace sonify;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "FAILED " << what << "; ";
    pass = pass && ok;
  }
};

/// |X_k| for k = 0..n/2 of a real signal, via FFTW directly.
std::vector<double> magnitude_spectrum(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> in(x);
  std::vector<fftw_complex> out(static_cast<std::size_t>(n / 2 + 1));
  fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.data(), out.data(), FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  std::vector<double> mag(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) mag[k] = std::hypot(out[k][0], out[k][1]);
  return mag;
}

std::vector<double> windowed(std::vector<double> x) {
  const auto w = oracle::blackman_harris(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= w[i];
  return x;
}

double db(double ratio) { return 20 * std::log10(ratio); }

// 1 ---------------------------------------------------------------------------
void tuning(Verdict& v) {
  v.require(parse_note("A2").frequency() == 110.0, "A2 == 110 Hz");
  v.require(parse_note("A4").frequency() == 440.0, "A4 == 440 Hz");
  const char* octave[] = {"A4", "A#4", "B4", "C5", "C#5", "D5", "D#5", "E5", "F5", "F#5", "G5",
                          "G#5", "A5"};
  double worst = 0;
  for (int k = 0; k <= 12; ++k) {
    const double want = 440.0 * std::pow(2.0, k / 12.0);
    worst = std::max(worst, std::abs(parse_note(octave[k]).frequency() / want - 1));
  }
  v.require(worst <= 1e-9, "chromatic octave within 1e-9");
  v.detail << "A2=" << parse_note("A2").frequency() << " Hz, A4=" << parse_note("A4").frequency()
           << " Hz, worst chromatic rel err " << worst;
}

// 2 ---------------------------------------------------------------------------
void ambisonic_counts(Verdict& v) {
  const std::size_t want[] = {4, 9, 16};
  for (int order = 1; order <= 3; ++order) {
    const auto bank = make_bank("ambiX" + std::to_string(order));
    v.require(bank.size() == want[order - 1], "ambiX" + std::to_string(order) + " size");
  }
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int order = 1; order <= 3; ++order) {
    const auto bank = make_bank("ambiX" + std::to_string(order));
    for (int i = 0; i < 10000; ++i) {
      const Direction d{2 * pi * u(gen), std::acos(1 - 2 * u(gen))};
      worst = std::max(worst, std::abs(bank.gains(d)[0] - 1.0));
    }
  }
  v.require(worst == 0.0, "W gain == 1");
  v.detail << "ambiX1/2/3 -> 4/9/16 channels, max |W - 1| over 30000 directions = " << worst;
}

// 3 ---------------------------------------------------------------------------
void mixing_oracle(Verdict& v) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 1);
  const std::size_t frames = 2000;
  double worst = 0;
  for (const std::string sys : {"stereo", "5.1", "ambiX2"}) {
    for (int series = 0; series < 3; ++series) {
      std::vector<MonoBuffer> sig(5, MonoBuffer(frames));
      std::vector<std::vector<double>> az(5, std::vector<double>(frames)), po = az;
      std::vector<DirectionTrack> tracks;
      for (std::size_t i = 0; i < 5; ++i) {
        std::vector<Direction> d(frames);
        for (std::size_t n = 0; n < frames; ++n) {
          sig[i][n] = 2 * u(gen) - 1;
          az[i][n] = 2 * pi * u(gen);
          po[i][n] = std::acos(1 - 2 * u(gen));
          d[n] = {az[i][n], po[i][n]};
        }
        tracks.emplace_back(std::move(d));
      }
      const auto got = mix(sig, tracks, make_bank(sys), 44100);
      const auto want = oracle::mix(sys, sig, az, po);
      v.require(got.channel_count() == want.size(), sys + " channel count");
      for (std::size_t j = 0; j < want.size(); ++j)
        for (std::size_t n = 0; n < frames; ++n)
          worst = std::max(worst, std::abs(got.channels[j][n] - want[j][n]));
    }
  }
  v.require(worst <= 1e-12, "max abs error <= 1e-12");
  v.detail << "5 sources x 3 series x {stereo, 5.1, ambiX2}, max abs error " << worst;
}

// 4 ---------------------------------------------------------------------------
void chord_binning(Verdict& v) {
  std::mt19937_64 gen(2500);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> vals(2500);
  for (auto& x : vals) x = u(gen);
  std::vector<int> counts(5, 0);
  for (auto i : assign_notes(vals, 5)) ++counts[i];
  for (int c : counts) v.require(std::abs(c - 500) <= 1, "occupancy 500 +- 1");

  const int alphabet = 4;  // values 0..3 make ties at every edge position
  std::size_t arrays = 0, mismatches = 0;
  for (int len = 1; len <= 8; ++len) {
    std::vector<long long> a(static_cast<std::size_t>(len), 0);
    while (true) {
      const std::vector<double> d(a.begin(), a.end());
      for (std::size_t n = 1; n <= 4; ++n) {
        ++arrays;
        if (assign_notes(d, n) != oracle::bin_integers(a, n)) ++mismatches;
      }
      std::size_t i = 0;
      while (i < a.size() && ++a[i] == alphabet) a[i++] = 0;
      if (i == a.size()) break;
    }
  }
  v.require(mismatches == 0, "exhaustive agreement");
  v.detail << "occupancies " << counts[0] << "/" << counts[1] << "/" << counts[2] << "/"
           << counts[3] << "/" << counts[4] << "; " << arrays
           << " exhaustive (array, n) cases, mismatches " << mismatches;
}

// 5 ---------------------------------------------------------------------------
void spectraliser_fidelity(Verdict& v) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0, 1);
  const double rate = 44100, duration = 0.25;
  double worst_rms = 0, worst_out = 0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> spec(2 + gen() % 60);
    for (auto& s : spec) s = gen() % 5 == 0 ? 0.0 : u(gen);
    spec[gen() % spec.size()] = 1.0;
    const double fmin = 50 + 450 * u(gen), fmax = 2000 + 14000 * u(gen);

    const std::size_t n = static_cast<std::size_t>(std::llround(duration * rate));
    std::vector<double> avg(n / 2 + 1, 0.0);
    double out_frac = 0;
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
      RandomStream rng(derive_seed(1000 + trial, seed));
      const auto x = spectralise(spec, fmin, fmax, duration, rate, rng);
      const auto mag = magnitude_spectrum(x);
      double in_p = 0, out_p = 0;
      for (std::size_t k = 0; k < mag.size(); ++k) {
        const double f = k * rate / n;
        avg[k] += mag[k] / 32;
        (f >= fmin && f <= fmax ? in_p : out_p) += mag[k] * mag[k];
      }
      out_frac = std::max(out_frac, out_p / (in_p + out_p));
    }

    std::vector<double> grid(spec.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      grid[i] = fmin + (fmax - fmin) * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    double num = 0, den = 0;
    std::vector<double> ref(avg.size(), 0.0);
    for (std::size_t k = 0; k < avg.size(); ++k) {
      const double f = k * rate / n;
      if (f < fmin || f > fmax) continue;
      ref[k] = oracle::interp(grid, spec, f);
      num += avg[k] * ref[k];
      den += ref[k] * ref[k];
    }
    const double scale = num / den;
    double err = 0, norm = 0;
    for (std::size_t k = 0; k < avg.size(); ++k) {
      const double f = k * rate / n;
      if (f < fmin || f > fmax) continue;
      err += std::pow(avg[k] - scale * ref[k], 2);
      norm += std::pow(scale * ref[k], 2);
    }
    worst_rms = std::max(worst_rms, std::sqrt(err / norm));
    worst_out = std::max(worst_out, out_frac);
  }
  v.require(worst_rms < 0.05, "in-band relative RMS < 5%");
  v.require(worst_out < 0.01, "out-of-band power < 1%");
  v.detail << "10 spectra x 32 seeds: worst in-band rel RMS " << worst_rms
           << ", worst out-of-band power fraction " << worst_out;
}

// 6 ---------------------------------------------------------------------------
void envelope(Verdict& v) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0, 1);
  const int per_segment = 2000;
  double worst_ratio = 0, worst_endpoint = 0;
  bool in_range = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const EnvelopeSpec env{0.01 + u(gen), 0.01 + u(gen), u(gen), 0.01 + u(gen),
                           u(gen),        u(gen),        u(gen)};
    const double hold = 0.01 + u(gen);
    const double len = env.attack + env.decay + hold;
    worst_endpoint = std::max({worst_endpoint, std::abs(envelope_value(env, 0, len)),
                               std::abs(envelope_value(env, env.attack, len) - 1),
                               std::abs(envelope_value(env, env.attack + env.decay, len) -
                                        env.sustain)});
    // dense grid: per_segment samples across each of attack, decay, hold, release
    std::vector<double> t;
    const double starts[] = {0, env.attack, env.attack + env.decay, len};
    const double lengths[] = {env.attack, env.decay, hold, env.release};
    for (int s = 0; s < 4; ++s)
      for (int k = 0; k < per_segment; ++k) t.push_back(starts[s] + lengths[s] * k / per_segment);
    t.push_back(len + env.release);
    double prev = envelope_value(env, t[0], len), jump = 0;
    for (std::size_t i = 1; i < t.size(); ++i) {
      const double y = envelope_value(env, t[i], len);
      in_range = in_range && y >= 0 && y <= 1;
      jump = std::max(jump, std::abs(y - prev));
      prev = y;
    }
    worst_ratio = std::max(worst_ratio, jump / (2.0 / per_segment));
  }
  v.require(worst_endpoint <= 1e-12, "segment endpoints exact");
  v.require(in_range, "values in [0, 1]");
  v.require(worst_ratio < 1.0, "max jump < 2/sample_count");
  v.detail << "1000 settings: endpoint error " << worst_endpoint << ", max jump = "
           << worst_ratio << " x (2/" << per_segment << ")";
}

// 7 ---------------------------------------------------------------------------
void oscillator_spectra(Verdict& v) {
  const double rate = 44100;
  double worst_margin = 1e9;
  int worst_offset = 0;
  for (double freq : {220.0, 440.0, 1000.0, 2500.0, 7040.0}) {
    GeneratorConfig cfg;
    cfg.oscillators = {OscillatorSpec{WaveForm::sine, 1, 0, Phase::fixed(0)}};
    NoteControls ctl;
    RandomStream rng(7);
    const auto x = synthesize(cfg, freq, 1.0, rate, ctl, rng);
    const auto mag = magnitude_spectrum(windowed(x));
    const auto peak = static_cast<std::size_t>(
        std::max_element(mag.begin(), mag.end()) - mag.begin());
    const int offset = static_cast<int>(peak) - static_cast<int>(std::lround(freq));
    worst_offset = std::max(worst_offset, std::abs(offset));
    double next = 0;
    for (std::size_t k = 1; k + 1 < mag.size(); ++k) {
      if (k + 5 >= peak && k <= peak + 5) continue;  // main lobe
      if (mag[k] >= mag[k - 1] && mag[k] >= mag[k + 1]) next = std::max(next, mag[k]);
    }
    worst_margin = std::min(worst_margin, db(mag[peak] / next));
  }
  v.require(worst_offset <= 1, "sine peak within +-1 bin");
  v.require(worst_margin >= 40, "sine margin >= 40 dB");

  GeneratorConfig saw;
  saw.oscillators = {OscillatorSpec{WaveForm::saw, 1, 0, Phase::fixed(0)}};
  NoteControls ctl;
  RandomStream rng(8);
  const auto x = synthesize(saw, 220, 1.0, rate, ctl, rng);
  const auto mag = magnitude_spectrum(windowed(x));
  auto harmonic = [&](int n) {
    const std::size_t c = static_cast<std::size_t>(220 * n);
    return *std::max_element(mag.begin() + static_cast<long>(c) - 2,
                             mag.begin() + static_cast<long>(c) + 3);
  };
  double worst_saw = 0;
  for (int n = 1; n <= 10; ++n)
    worst_saw = std::max(worst_saw, std::abs(harmonic(n) / harmonic(1) * n - 1));
  v.require(worst_saw < 0.05, "saw harmonics within 5% of 1/n");
  v.detail << "sine: worst peak offset " << worst_offset << " bin, worst margin " << worst_margin
           << " dB; saw 1..10 worst deviation from 1/n " << 100 * worst_saw << "%";
}

// 8 ---------------------------------------------------------------------------
void filter(Verdict& v) {
  double worst_dc = 0;
  for (int i = 0; i <= 100; ++i) {
    std::vector<double> dc(4096, 0.7);
    apply_lowpass(dc, i / 100.0, 44100);
    for (double y : dc) worst_dc = std::max(worst_dc, std::abs(y - 0.7));
  }
  v.require(worst_dc <= 1e-12, "DC unchanged");

  std::mt19937_64 gen(8);
  std::normal_distribution<double> g(0, 0.3);
  const std::size_t n = 1 << 16;
  std::vector<double> noise(n);
  for (auto& s : noise) s = g(gen);
  auto filtered = noise;
  apply_lowpass(filtered, 0.0, 44100);
  auto high_power = [&](const std::vector<double>& x) {
    const auto mag = magnitude_spectrum(x);
    double p = 0;
    for (std::size_t k = 0; k < mag.size(); ++k)
      if (k * 44100.0 / n > 1000) p += mag[k] * mag[k];
    return p;
  };
  const double reduction = 10 * std::log10(high_power(noise) / high_power(filtered));
  v.require(reduction > 20, "noise above 1 kHz reduced > 20 dB");
  v.detail << "101 cutoffs: max DC error " << worst_dc << "; white noise above 1 kHz down "
           << reduction << " dB at cutoff 0";
}

// 9 ---------------------------------------------------------------------------
void determinism(Verdict& v) {
  const fs::path config = fs::path(SONIFY_SOURCE_DIR) / "demos" / "stars" / "stars.yml";
  auto prepared = prepare(load_job(config));
  const auto* events = std::get_if<EventSet>(&prepared.plan.sources);
  v.require(events && events->count() == 100, "100 events");
  v.require(prepared.plan.generator.kind == GeneratorKind::sampler, "sampler generator");
  v.require(prepared.plan.bank.size() == 16, "ambiX3 bank");
  v.require(prepared.plan.score.chords[0].size() == 5, "5-note chord");
  prepared.plan.threads = 1;
  const auto a = encode_wav(render(prepared.plan).audio, prepared.job.encoding);
  prepared.plan.threads = 8;
  const auto b = encode_wav(render(prepared.plan).audio, prepared.job.encoding);
  const auto c = encode_wav(render(prepared.plan).audio, prepared.job.encoding);
  v.require(a == b && b == c, "byte-identical WAV");
  v.detail << "stars fixture rendered with 1, 8, 8 threads: " << a.size() << " bytes each, "
           << (a == b && b == c ? "identical" : "different");
}

// 10 --------------------------------------------------------------------------
void wav_conformance(Verdict& v) {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> u(-1, 1);
  std::size_t files = 0;
  const fs::path dir = fs::temp_directory_path() / "sonify_acceptance_wav";
  fs::create_directories(dir);
  for (std::size_t ch : {1u, 2u, 6u, 9u, 16u})
    for (double rate : {44100.0, 48000.0, 96000.0})
      for (double dur : {0.5, 1.0}) {
        MultichannelBuffer buf(ch, static_cast<std::size_t>(std::llround(rate * dur)), rate);
        for (auto& c : buf.channels)
          for (std::size_t i = 0; i < c.size(); i += 97) c[i] = u(gen);
        const auto path = dir / "x.wav";
        write_wav(buf, path, WavEncoding::pcm16);
        std::ifstream in(path, std::ios::binary);
        const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                               std::istreambuf_iterator<char>()};
        const auto info = oracle::parse_riff(bytes);
        const auto want = static_cast<std::uint32_t>(ch * 2 * std::llround(rate * dur));
        v.require(info.format == 1 && info.channels == ch && info.rate == rate &&
                      info.bits == 16 && info.block_align == ch * 2 &&
                      info.byte_rate == rate * ch * 2 && info.data_size == want,
                  "pcm16 header fields");

        write_wav(buf, path, WavEncoding::float32);
        const auto back = read_wav(path);
        bool same = back.channel_count() == ch && back.frames() == buf.frames();
        for (std::size_t c = 0; same && c < ch; ++c)
          for (std::size_t i = 0; same && i < buf.frames(); ++i)
            same = static_cast<float>(back.channels[c][i]) == static_cast<float>(buf.channels[c][i]);
        v.require(same, "float32 bitwise roundtrip");
        ++files;
      }
  fs::remove_all(dir);
  v.detail << files << " layouts: pcm16 headers re-parsed by independent reader, data sizes exact,"
           << " float32 bitwise lossless";
}

// 11 --------------------------------------------------------------------------
void mapping(Verdict& v) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0, 1);
  ScopedWarningSink quiet([](std::string_view) {});
  double worst_affine = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> d(2 + gen() % 50);
    for (auto& x : d) x = -10 + 20 * u(gen);
    const auto lim = MapLimits::percentiles(40 * u(gen), 60 + 40 * u(gen), 0, 1);
    const double a = 0.05 + 20 * u(gen), b = -50 + 100 * u(gen);
    std::vector<double> moved(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) moved[i] = a * d[i] + b;
    const auto x = map_parameter(d, lim), y = map_parameter(moved, lim);
    for (std::size_t i = 0; i < x.size(); ++i)
      worst_affine = std::max(worst_affine, std::abs(x[i] - y[i]));
  }
  v.require(worst_affine <= 1e-12, "affine invariance to 1e-12");

  std::vector<ParameterId> params;
  for (const auto& row : all_parameters())
    if (row.mappable && row.id != ParameterId::spectrum) params.push_back(row.id);
  std::size_t outside = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = params[gen() % params.size()];
    const auto r = info(p).default_range;
    double lo = std::lerp(r.lo, r.hi, u(gen)), hi = std::lerp(r.lo, r.hi, u(gen));
    if (lo > hi) std::swap(lo, hi);
    double dlo = 100 * u(gen), dhi = 100 * u(gen);
    if (dlo > dhi) std::swap(dlo, dhi);
    const auto lim = gen() % 2 ? MapLimits::percentiles(dlo, dhi, lo, hi)
                               : MapLimits::data_units(dlo / 10 - 5, dhi / 10 - 5, lo, hi);
    std::vector<double> d(1 + gen() % 100);
    for (auto& x : d) x = -8 + 16 * u(gen);
    for (double y : map_parameter(d, lim))
      if (y < lo || y > hi) ++outside;
  }
  v.require(outside == 0, "all mapped values within limits");
  v.detail << "max affine deviation " << worst_affine << "; 1000 random configs, " << outside
           << " values outside limits";
}

// 12 --------------------------------------------------------------------------
void preset_goldens(Verdict& v) {
  for (const auto& name : builtin_preset_names()) {
    const auto cfg = compile(load_preset(name));
    validate(cfg, 44100);
  }
  const auto d = compile(load_preset("default"));
  v.require(d.oscillators.size() == 3, "default has 3 oscillators");
  v.require(d.oscillators.size() > 1 && d.oscillators[1].level == 0.5, "osc2 level 0.5");
  v.require(d.oscillators.size() > 1 && d.oscillators[1].detune == -2.0, "osc2 detune -2");
  v.require(d.volume_lfo.freq == 3.0, "volume_lfo freq 3");
  v.require(d.volume_lfo.amount == 0.5, "volume_lfo amount 0.5");
  v.require(d.volume == 1.0, "master volume 1");
  v.detail << "default, pitch_mapper, windy load and compile; default osc2 level "
           << d.oscillators[1].level << " detune " << d.oscillators[1].detune
           << ", volume_lfo freq " << d.volume_lfo.freq << " amount " << d.volume_lfo.amount
           << ", volume " << d.volume;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"tuning", tuning},
      {"ambisonic channel counts", ambisonic_counts},
      {"mixing oracle", mixing_oracle},
      {"chord binning", chord_binning},
      {"spectraliser fidelity", spectraliser_fidelity},
      {"envelope", envelope},
      {"oscillator spectra", oscillator_spectra},
      {"filter", filter},
      {"determinism", determinism},
      {"WAV conformance", wav_conformance},
      {"mapping", mapping},
      {"preset goldens", preset_goldens},
  };
  int failures = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    failures += v.pass ? 0 : 1;
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << i + 1 << " " << criteria[i].first << ": "
              << v.detail.str() << std::endl;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << criteria.size() - static_cast<std::size_t>(failures) << "/" << criteria.size()
            << " criteria passed in " << secs << " s" << std::endl;
  return failures == 0 ? 0 : 1;
}
