#ifndef SONIFY_CLI_HPP
#define SONIFY_CLI_HPP

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sonify/diagnostics.hpp"
#include "sonify/error.hpp"
#include "sonify/job.hpp"
#include "sonify/sonification.hpp"
#include "sonify/wav.hpp"

namespace sonify::cli {

enum ExitCode : int { ok = 0, config_error = 1, data_error = 2, io_error = 3 };

struct Options {
  std::string data;
  std::string config;
  std::string out;
  std::string preset;
  std::string system;
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool verbose = false;
  bool dry_run = false;
};

namespace detail {

inline std::uint64_t parse_seed(const std::string& text, const char* what) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end || text.empty())
    throw ConfigError(std::string(what) + " must be a non-negative integer, got '" + text + "'");
  return v;
}

inline const char* source_kind_name(SourceKind k) {
  return k == SourceKind::events ? "events" : "object";
}

inline std::size_t source_count(const SourceSet& s) {
  if (const auto* ev = std::get_if<EventSet>(&s)) return ev->count();
  return 1;
}

inline void print_plan(std::ostream& out, const PreparedJob& job,
                       const std::filesystem::path& output) {
  const auto& plan = job.plan;
  const auto frames = sample_count(plan.score.duration, plan.sample_rate);
  out << "data        " << job.job.resolve(job.job.data).string() << " (" << job.rows
      << " rows)\n";
  out << "sources     " << detail::source_count(plan.sources) << " "
      << source_kind_name(job.job.source) << "\n";
  out << "mappings   ";
  if (job.job.mappings.empty()) out << " none";
  for (const auto& m : job.job.mappings) out << " " << name(m.parameter) << "<-" << m.column;
  out << "\n";
  out << "preset      " << job.job.preset << " (" << to_string(plan.generator.kind) << ")\n";
  out << "score      ";
  for (const auto& c : job.job.chords) out << " [" << c << "]";
  out << "\n";
  out << "system      " << plan.bank.system << " (" << plan.bank.size() << " channels)\n";
  out << "duration    " << plan.score.duration << " s (" << frames << " samples at "
      << plan.sample_rate << " Hz)\n";
  out << "seed        " << plan.master_seed << "\n";
  out << "output      " << output.string() << " (" << to_string(job.job.encoding) << ")\n";
}

inline void print_report(std::ostream& out, const PreparedJob& job, const RenderResult& r,
                         bool verbose) {
  const auto& chords = job.plan.score.chords;
  out << "notes per chord bin";
  for (std::size_t b = 0; b < r.notes_per_bin.size(); ++b) {
    out << (b == 0 ? " " : ", ");
    if (chords.size() == 1) out << format_note(chords[0][b]) << ":";
    else out << "#" << b + 1 << ":";
    out << r.notes_per_bin[b];
  }
  out << "\n";
  out << "notes       " << r.notes.size() << "\n";
  out << "clip_count  " << r.clip_count << "\n";
  out << "channels    " << r.audio.channel_count() << "\n";
  out << "written     " << r.audio.frames() << " frames, " << r.audio.duration() << " s\n";
  if (verbose) {
    out << "note log (source, note, start s, duration s)\n";
    for (const auto& n : r.notes)
      out << "  " << n.source << " " << n.note << " " << std::setprecision(6) << n.start << " "
          << n.duration << "\n";
  }
}

}  // namespace detail

/// Runs one render job. Exit codes: 0 ok, 1 config, 2 data, 3 I/O.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Render a data table to a multichannel WAV file", "sonify"};
  Options opt;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double duration = 0.0;
  app.add_option("--data", opt.data, "CSV data table (overrides the config)");
  app.add_option("--config", opt.config, "job YAML file")->required();
  app.add_option("--out", opt.out, "output WAV path (overrides the config)");
  app.add_option("--preset", opt.preset, "builtin preset name or preset YAML path");
  app.add_option("--system", opt.system, "mono, stereo, 5.1, 7.1 or ambiX1..ambiX7");
  auto* dur = app.add_option("--duration", duration, "length in seconds");
  auto* sd = app.add_option("--seed", seed, "master seed (SONIFY_SEED wins)");
  auto* th = app.add_option("--threads", threads, "render threads, 0 = all cores");
  app.add_flag("--verbose,-v", opt.verbose, "print the note log");
  app.add_flag("--dry-run", opt.dry_run, "validate and print the plan without rendering");

  std::vector<const char*> argv{"sonify"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : config_error;
  }
  if (*dur) opt.duration = duration;
  if (*sd) opt.seed = seed;
  if (*th) opt.threads = threads;

  ScopedWarningSink sink([&](std::string_view msg) { err << "warning: " << msg << "\n"; });
  try {
    JobConfig job = load_job(opt.config);
    if (!opt.data.empty()) job.data = std::filesystem::absolute(opt.data);
    if (!opt.out.empty()) job.output = std::filesystem::absolute(opt.out);
    if (!opt.preset.empty()) {
      const std::filesystem::path p(opt.preset);
      std::error_code ec;
      job.preset = std::filesystem::is_regular_file(p, ec)
                       ? std::filesystem::absolute(p).string()
                       : opt.preset;
    }
    if (!opt.system.empty()) job.system = opt.system;
    if (opt.duration) job.duration = *opt.duration;
    if (opt.seed) job.seed = *opt.seed;
    if (opt.threads) job.threads = *opt.threads;
    if (const char* env = std::getenv("SONIFY_SEED"); env && *env)
      job.seed = detail::parse_seed(env, "SONIFY_SEED");

    const auto output = job.resolve(job.output);
    const PreparedJob prepared = prepare(std::move(job));
    detail::print_plan(out, prepared, output);
    if (opt.dry_run) {
      out << "dry run: plan is valid, nothing rendered\n";
      return ok;
    }
    const RenderResult result = render(prepared.plan);
    write_wav(result.audio, output, prepared.job.encoding);
    detail::print_report(out, prepared, result, opt.verbose);
    return ok;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return data_error;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return io_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return config_error;
  }
}

}  // namespace sonify::cli

#endif  // SONIFY_CLI_HPP
