#ifndef SONIFY_JOB_HPP
#define SONIFY_JOB_HPP

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sonify/channels.hpp"
#include "sonify/error.hpp"
#include "sonify/generator/sampler.hpp"
#include "sonify/parameters.hpp"
#include "sonify/presets.hpp"
#include "sonify/score.hpp"
#include "sonify/sonification.hpp"
#include "sonify/sources.hpp"
#include "sonify/table.hpp"
#include "sonify/wav.hpp"

namespace sonify {

enum class SourceKind { events, object };

struct MappingSpec {
  ParameterId parameter{};
  std::string column;
  LimitMode mode = LimitMode::percentile;
  double lo = 0.0;
  double hi = 100.0;
  std::optional<Interval> range;  // empty: preset range, else parameter default
};

/// One render job, as read from a job YAML file. Relative paths are
/// resolved against `base_dir`.
struct JobConfig {
  std::filesystem::path base_dir = ".";
  std::filesystem::path data;
  SourceKind source = SourceKind::events;
  std::string time_column = "time";
  std::vector<MappingSpec> mappings;
  std::map<ParameterId, double> statics;
  std::vector<std::string> chords{"A4"};
  double duration = 10.0;
  std::string preset = "default";
  Json overrides = Json::object();
  std::string system = "stereo";
  double sample_rate = 44100.0;
  std::uint64_t seed = 0;
  std::filesystem::path output = "sonification.wav";
  WavEncoding encoding = WavEncoding::pcm16;
  double event_hold = default_event_hold;
  unsigned threads = 0;

  std::filesystem::path resolve(const std::filesystem::path& p) const {
    return p.empty() || p.is_absolute() ? p : base_dir / p;
  }
};

namespace detail {

inline std::string where(const YAML::Node& n, std::string_view origin) {
  const auto m = n.Mark();
  if (m.line < 0) return std::string(origin);
  return std::string(origin) + ":" + std::to_string(m.line + 1);
}

template <typename T>
T scalar(const YAML::Node& n, std::string_view key, std::string_view origin) {
  if (!n.IsScalar())
    throw ConfigError(where(n, origin) + ": '" + std::string(key) + "' must be a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where(n, origin) + ": bad value '" + n.Scalar() + "' for '" +
                      std::string(key) + "'");
  }
}

inline double finite_number(const YAML::Node& n, std::string_view key, std::string_view origin) {
  const double v = scalar<double>(n, key, origin);
  if (!std::isfinite(v))
    throw ConfigError(where(n, origin) + ": '" + std::string(key) + "' must be finite");
  return v;
}

inline void expect_map(const YAML::Node& n, std::string_view key, std::string_view origin) {
  if (!n.IsMap()) throw ConfigError(where(n, origin) + ": '" + std::string(key) + "' must be a map");
}

inline void check_keys(const YAML::Node& n, std::string_view path,
                       const std::set<std::string>& allowed, std::string_view origin) {
  for (const auto& kv : n) {
    const auto key = kv.first.Scalar();
    if (!allowed.contains(key)) {
      const auto full = path.empty() ? key : std::string(path) + "." + key;
      throw ConfigError(where(kv.first, origin) + ": unknown key '" + full + "'");
    }
  }
}

inline MappingSpec parse_mapping(const std::string& param, const YAML::Node& n,
                                 std::string_view origin) {
  const std::string path = "mappings." + param;
  MappingSpec m;
  try {
    m.parameter = parse_parameter(param);
  } catch (const ConfigError& e) {
    throw ConfigError(where(n, origin) + ": '" + path + "': " + e.what());
  }
  if (n.IsScalar()) {
    m.column = n.Scalar();
    return m;
  }
  expect_map(n, path, origin);
  check_keys(n, path, {"column", "mode", "lo", "hi", "range"}, origin);
  if (!n["column"]) throw ConfigError(where(n, origin) + ": '" + path + ".column' is required");
  m.column = scalar<std::string>(n["column"], path + ".column", origin);
  if (const auto mode = n["mode"]) {
    const auto text = scalar<std::string>(mode, path + ".mode", origin);
    if (text == "percentile") m.mode = LimitMode::percentile;
    else if (text == "data") m.mode = LimitMode::data_units;
    else
      throw ConfigError(where(mode, origin) + ": '" + path +
                        ".mode' must be 'percentile' or 'data'");
  }
  if (m.mode == LimitMode::data_units && (!n["lo"] || !n["hi"]))
    throw ConfigError(where(n, origin) + ": '" + path + "' in data mode needs lo and hi");
  if (n["lo"]) m.lo = finite_number(n["lo"], path + ".lo", origin);
  if (n["hi"]) m.hi = finite_number(n["hi"], path + ".hi", origin);
  if (const auto r = n["range"]) {
    if (!r.IsSequence() || r.size() != 2)
      throw ConfigError(where(r, origin) + ": '" + path + ".range' must be [lo, hi]");
    m.range = Interval{finite_number(r[0], path + ".range", origin),
                       finite_number(r[1], path + ".range", origin)};
  }
  return m;
}

}  // namespace detail

/// Parses job YAML text. `base_dir` anchors relative paths.
inline JobConfig parse_job(std::string_view yaml, std::string_view origin,
                           const std::filesystem::path& base_dir) {
  using namespace detail;
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(std::string(origin) + ":" + std::to_string(e.mark.line + 1) +
                      ": YAML parse error: " + e.msg);
  }
  JobConfig job;
  job.base_dir = base_dir;
  if (root.IsNull()) return job;
  expect_map(root, "<root>", origin);
  check_keys(root,
             "",
             {"data", "source", "time_column", "mappings", "static", "score", "generator",
              "system", "sample_rate", "seed", "output", "encoding", "event_hold", "threads"},
             origin);

  if (const auto n = root["data"]) job.data = scalar<std::string>(n, "data", origin);
  if (const auto n = root["source"]) {
    const auto text = scalar<std::string>(n, "source", origin);
    if (text == "events") job.source = SourceKind::events;
    else if (text == "object") job.source = SourceKind::object;
    else throw ConfigError(where(n, origin) + ": 'source' must be 'events' or 'object'");
  }
  if (const auto n = root["time_column"])
    job.time_column = scalar<std::string>(n, "time_column", origin);

  if (const auto n = root["mappings"]) {
    expect_map(n, "mappings", origin);
    for (const auto& kv : n)
      job.mappings.push_back(parse_mapping(kv.first.Scalar(), kv.second, origin));
  }
  if (const auto n = root["static"]) {
    expect_map(n, "static", origin);
    for (const auto& kv : n) {
      const auto key = kv.first.Scalar();
      ParameterId p;
      try {
        p = parse_parameter(key);
      } catch (const ConfigError& e) {
        throw ConfigError(where(kv.first, origin) + ": 'static." + key + "': " + e.what());
      }
      job.statics[p] = finite_number(kv.second, "static." + key, origin);
    }
  }
  if (const auto n = root["score"]) {
    expect_map(n, "score", origin);
    check_keys(n, "score", {"chords", "duration"}, origin);
    if (const auto c = n["chords"]) {
      job.chords.clear();
      if (c.IsScalar()) {
        job.chords.push_back(c.Scalar());
      } else if (c.IsSequence()) {
        for (const auto& item : c) job.chords.push_back(scalar<std::string>(item, "score.chords", origin));
      } else {
        throw ConfigError(where(c, origin) + ": 'score.chords' must be a list of chords");
      }
    }
    if (const auto d = n["duration"]) job.duration = finite_number(d, "score.duration", origin);
  }
  if (const auto n = root["generator"]) {
    if (n.IsScalar()) {
      job.preset = n.Scalar();
    } else {
      expect_map(n, "generator", origin);
      check_keys(n, "generator", {"preset", "overrides"}, origin);
      if (const auto p = n["preset"]) job.preset = scalar<std::string>(p, "generator.preset", origin);
      if (const auto o = n["overrides"])
        job.overrides = parse_overrides(o, std::string(origin) + ": generator.overrides");
    }
  }
  if (const auto n = root["system"]) job.system = scalar<std::string>(n, "system", origin);
  if (const auto n = root["sample_rate"]) job.sample_rate = finite_number(n, "sample_rate", origin);
  if (const auto n = root["seed"]) job.seed = scalar<std::uint64_t>(n, "seed", origin);
  if (const auto n = root["output"]) job.output = scalar<std::string>(n, "output", origin);
  if (const auto n = root["encoding"]) {
    try {
      job.encoding = parse_wav_encoding(scalar<std::string>(n, "encoding", origin));
    } catch (const ConfigError& e) {
      throw ConfigError(where(n, origin) + ": 'encoding': " + e.what());
    }
  }
  if (const auto n = root["event_hold"]) job.event_hold = finite_number(n, "event_hold", origin);
  if (const auto n = root["threads"]) job.threads = scalar<unsigned>(n, "threads", origin);
  return job;
}

inline JobConfig load_job(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  auto dir = path.parent_path();
  if (dir.empty()) dir = ".";
  return parse_job(text.str(), path.string(), dir);
}

/// A job with every reference resolved: data loaded, preset compiled,
/// sources built. Ready for render().
struct PreparedJob {
  JobConfig job;
  PresetTree preset;
  std::size_t rows = 0;
  RenderPlan plan;
};

inline std::vector<Mapping> resolve_mappings(const JobConfig& job, const GeneratorConfig& cfg) {
  std::vector<Mapping> out;
  for (const auto& m : job.mappings) {
    const Interval r = m.range ? *m.range : cfg.range_for(m.parameter);
    const MapLimits limits = m.mode == LimitMode::percentile
                                 ? MapLimits::percentiles(m.lo, m.hi, r.lo, r.hi)
                                 : MapLimits::data_units(m.lo, m.hi, r.lo, r.hi);
    try {
      if (m.parameter != ParameterId::spectrum) validate(limits, m.parameter);
    } catch (const ConfigError& e) {
      throw ConfigError("mappings." + std::string(name(m.parameter)) + ": " + e.what());
    }
    out.push_back({m.parameter, m.column, limits});
  }
  return out;
}

/// Resolves and loads everything a job refers to; throws before any audio
/// is rendered.
inline PreparedJob prepare(JobConfig job) {
  if (job.data.empty()) throw ConfigError("no data file given ('data' key or --data)");
  if (!is_supported_sample_rate(job.sample_rate))
    throw ConfigError("'sample_rate' must be 44100, 48000 or 96000");
  if (!(job.duration > 0.0)) throw ConfigError("'score.duration' must be positive");

  const auto names = builtin_preset_names();
  const bool builtin = std::find(names.begin(), names.end(), job.preset) != names.end();
  const std::filesystem::path preset_path = builtin ? std::filesystem::path{} : job.resolve(job.preset);
  PresetTree preset = load_preset(builtin ? job.preset : preset_path.string());
  if (!job.overrides.empty()) preset = merge_overrides(preset, job.overrides);
  GeneratorConfig cfg = compile(preset);

  ChordSequence chords = [&] {
    try {
      return ChordSequence::parse(job.chords);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("score.chords: ") + e.what());
    }
  }();
  ScoreSpec score(std::move(chords), job.duration);

  MicrophoneBank bank = [&] {
    try {
      return make_bank(job.system);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("system: ") + e.what());
    }
  }();

  const auto out_dir = job.resolve(job.output).parent_path();
  std::error_code ec;
  if (!out_dir.empty() && !std::filesystem::is_directory(out_dir, ec))
    throw IoError("output directory does not exist: " + out_dir.string());

  const Table table = load_table(job.resolve(job.data));
  const auto mappings = resolve_mappings(job, cfg);
  SourceSet sources = [&]() -> SourceSet {
    if (job.source == SourceKind::events) {
      if (!job.statics.empty())
        throw ConfigError("'static' values apply to object sources only");
      return build_event_set(table, mappings);
    }
    return build_object_source(table, job.time_column, mappings, job.statics);
  }();

  std::shared_ptr<const SampleBank> samples;
  if (cfg.kind == GeneratorKind::sampler) {
    if (cfg.sample_directory.empty())
      throw ConfigError("sampler preset needs 'sampler.samples' (a directory of <Note>.wav)");
    auto dir = cfg.sample_directory;
    if (dir.is_relative()) dir = (builtin ? job.base_dir : preset_path.parent_path()) / dir;
    samples = std::make_shared<const SampleBank>(
        load_sample_bank(dir, job.sample_rate, cfg.loop));
  }

  RenderPlan plan{std::move(sources), std::move(score), std::move(cfg), std::move(bank),
                  job.sample_rate,    job.seed,         std::move(samples),
                  job.event_hold,     job.threads};
  detail::check_plan(plan);
  return PreparedJob{std::move(job), std::move(preset), table.rows(), std::move(plan)};
}

}  // namespace sonify

#endif  // SONIFY_JOB_HPP
