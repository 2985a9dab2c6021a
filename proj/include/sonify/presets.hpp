#ifndef SONIFY_PRESETS_HPP
#define SONIFY_PRESETS_HPP

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sonify/error.hpp"
#include "sonify/generator/config.hpp"
#include "sonify/parameters.hpp"
#include "sonify/presets_builtin.hpp"

namespace sonify {

using Json = nlohmann::json;

namespace schema {

/// Shape and constraints of one node in a preset tree.
struct Node {
  enum class Kind { map, pattern_map, parameter_map, number, boolean, string, choice, phase, range };

  Kind kind = Kind::number;
  std::vector<std::pair<std::string, std::shared_ptr<const Node>>> fields;  // map
  std::string prefix;                        // pattern_map keys: <prefix><n>, n >= 1
  std::shared_ptr<const Node> element;       // pattern_map / parameter_map children
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();
  std::vector<std::string> choices;

  const Node* field(std::string_view key) const {
    for (const auto& [k, v] : fields)
      if (k == key) return v.get();
    return nullptr;
  }
};

using NodePtr = std::shared_ptr<const Node>;

inline NodePtr number(double lo = -std::numeric_limits<double>::infinity(),
                      double hi = std::numeric_limits<double>::infinity()) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::number;
  n->min = lo;
  n->max = hi;
  return n;
}

inline NodePtr leaf(Node::Kind kind) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  return n;
}

inline NodePtr choice(std::vector<std::string> options) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::choice;
  n->choices = std::move(options);
  return n;
}

inline NodePtr map(std::vector<std::pair<std::string, NodePtr>> fields) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::map;
  n->fields = std::move(fields);
  return n;
}

inline std::vector<std::string> form_names() {
  return {waveform_names.begin(), waveform_names.end()};
}

inline std::vector<std::pair<std::string, NodePtr>> envelope_fields() {
  const double inf = std::numeric_limits<double>::infinity();
  // curvature > -1 keeps u^(1 + c) finite at u = 0
  return {{"A", number(0, inf)},       {"D", number(0, inf)},       {"S", number(0, 1)},
          {"R", number(0, inf)},       {"Ac", number(-0.99, 100)}, {"Dc", number(-0.99, 100)},
          {"Rc", number(-0.99, 100)}};
}

inline NodePtr lfo() {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::string, NodePtr>> f{
      {"use", leaf(Node::Kind::boolean)}, {"wave", choice(form_names())},
      {"amount", number(0, inf)},         {"freq", number(0, inf)},
      {"freq_shift", number()},           {"phase", leaf(Node::Kind::phase)}};
  for (auto& e : envelope_fields()) f.push_back(std::move(e));
  f.emplace_back("level", number(0, 1));
  return map(std::move(f));
}

/// Schema of a generator preset.
inline const Node& preset() {
  static const NodePtr root = [] {
    const double inf = std::numeric_limits<double>::infinity();
    auto osc = map({{"form", choice(form_names())},
                    {"level", number(0, 1)},
                    {"detune", number(-100, inf)},
                    {"phase", leaf(Node::Kind::phase)}});
    auto oscillators = std::make_shared<Node>();
    oscillators->kind = Node::Kind::pattern_map;
    oscillators->prefix = "osc";
    oscillators->element = osc;

    auto ranges = std::make_shared<Node>();
    ranges->kind = Node::Kind::parameter_map;
    ranges->element = leaf(Node::Kind::range);

    return map({
        {"name", leaf(Node::Kind::string)},
        {"description", leaf(Node::Kind::string)},
        {"generator", choice({"synthesiser", "sampler", "spectraliser"})},
        {"oscillators", oscillators},
        {"note_envelope", map(envelope_fields())},
        {"filter", leaf(Node::Kind::boolean)},
        {"cutoff", number(0, 1)},
        {"pitch_lfo", lfo()},
        {"volume_lfo", lfo()},
        {"volume", number(0, 1)},
        {"pitch", number(0, 1)},
        {"spectraliser", map({{"fmin", number(0, inf)}, {"fmax", number(0, inf)}})},
        {"sampler", map({{"samples", leaf(Node::Kind::string)},
                         {"loop", choice({"off", "forward", "pingpong"})}})},
        {"ranges", ranges},
    });
  }();
  return *root;
}

inline std::string join(std::string_view path, std::string_view key) {
  return path.empty() ? std::string(key) : std::string(path) + "." + std::string(key);
}

inline bool is_pattern_key(std::string_view key, std::string_view prefix) {
  if (!key.starts_with(prefix) || key.size() == prefix.size()) return false;
  const auto digits = key.substr(prefix.size());
  return digits.front() != '0' &&
         std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; });
}

/// Checks a typed tree against `node`; `path` names the offending key.
inline void validate(const Json& value, const Node& node, const std::string& path) {
  auto fail = [&](const std::string& why) {
    throw ConfigError("preset key '" + path + "': " + why);
  };
  using K = Node::Kind;
  switch (node.kind) {
    case K::map:
    case K::pattern_map:
    case K::parameter_map: {
      if (!value.is_object()) fail("expected a nested mapping");
      for (const auto& [key, child] : value.items()) {
        const Node* sub = nullptr;
        if (node.kind == K::map) {
          sub = node.field(key);
        } else if (node.kind == K::pattern_map) {
          if (is_pattern_key(key, node.prefix)) sub = node.element.get();
        } else if (auto p = find_parameter(key); p && is_mappable(*p)) {
          sub = node.element.get();
        }
        if (!sub) throw ConfigError("unknown preset key '" + join(path, key) + "'");
        validate(child, *sub, join(path, key));
        if (node.kind == K::parameter_map) {
          const auto dom = info(*find_parameter(key)).domain;
          if (!dom.contains(Interval{child[0].get<double>(), child[1].get<double>()}))
            throw ConfigError("preset key '" + join(path, key) +
                              "': range outside the parameter's domain");
        }
      }
      break;
    }
    case K::number: {
      if (!value.is_number()) fail("expected a number");
      const double v = value.get<double>();
      if (!std::isfinite(v)) fail("must be finite");
      if (v < node.min || v > node.max)
        fail("value " + std::to_string(v) + " outside [" + std::to_string(node.min) + ", " +
             std::to_string(node.max) + "]");
      break;
    }
    case K::boolean:
      if (!value.is_boolean()) fail("expected on/off");
      break;
    case K::string:
      if (!value.is_string()) fail("expected a string");
      break;
    case K::choice: {
      if (!value.is_string()) fail("expected a string");
      const auto s = value.get<std::string>();
      if (std::find(node.choices.begin(), node.choices.end(), s) == node.choices.end()) {
        std::string opts;
        for (const auto& c : node.choices) opts += (opts.empty() ? "" : ", ") + c;
        fail("'" + s + "' is not one of: " + opts);
      }
      break;
    }
    case K::phase:
      if (value.is_string() && value.get<std::string>() == "random") break;
      if (!value.is_number() || !std::isfinite(value.get<double>()))
        fail("expected radians or 'random'");
      break;
    case K::range:
      if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
          !value[1].is_number())
        fail("expected [lo, hi]");
      if (!(value[0].get<double>() <= value[1].get<double>())) fail("range needs lo <= hi");
      break;
  }
}

/// Converts a YAML node to a typed tree using `node` for scalar types.
inline Json from_yaml(const YAML::Node& y, const Node& node, const std::string& path) {
  const auto where = [&] {
    return "preset key '" + path + "' (line " + std::to_string(y.Mark().line + 1) + "): ";
  };
  using K = Node::Kind;
  switch (node.kind) {
    case K::map:
    case K::pattern_map:
    case K::parameter_map: {
      if (y.IsNull()) return Json::object();
      if (!y.IsMap()) throw ConfigError(where() + "expected a nested mapping");
      Json out = Json::object();
      for (const auto& kv : y) {
        const auto key = kv.first.as<std::string>();
        const Node* sub = nullptr;
        if (node.kind == K::map) {
          sub = node.field(key);
        } else if (node.kind == K::pattern_map) {
          if (is_pattern_key(key, node.prefix)) sub = node.element.get();
        } else if (auto p = find_parameter(key); p && is_mappable(*p)) {
          sub = node.element.get();
        }
        if (!sub)
          throw ConfigError("unknown preset key '" + join(path, key) + "' (line " +
                            std::to_string(kv.first.Mark().line + 1) + ")");
        if (out.contains(key)) throw ConfigError("duplicate preset key '" + join(path, key) + "'");
        out[key] = from_yaml(kv.second, *sub, join(path, key));
      }
      return out;
    }
    case K::number:
      if (!y.IsScalar()) throw ConfigError(where() + "expected a number");
      try {
        return y.as<double>();
      } catch (const YAML::Exception&) {
        throw ConfigError(where() + "expected a number, got '" + y.Scalar() + "'");
      }
    case K::boolean:
      if (!y.IsScalar()) throw ConfigError(where() + "expected on/off");
      try {
        return y.as<bool>();
      } catch (const YAML::Exception&) {
        throw ConfigError(where() + "expected on/off, got '" + y.Scalar() + "'");
      }
    case K::string:
    case K::choice:
      if (!y.IsScalar()) throw ConfigError(where() + "expected a string");
      return y.as<std::string>();
    case K::phase:
      if (!y.IsScalar()) throw ConfigError(where() + "expected radians or 'random'");
      if (y.Scalar() == "random") return "random";
      try {
        return y.as<double>();
      } catch (const YAML::Exception&) {
        throw ConfigError(where() + "expected radians or 'random', got '" + y.Scalar() + "'");
      }
    case K::range: {
      if (!y.IsSequence() || y.size() != 2) throw ConfigError(where() + "expected [lo, hi]");
      try {
        return Json::array({y[0].as<double>(), y[1].as<double>()});
      } catch (const YAML::Exception&) {
        throw ConfigError(where() + "expected [lo, hi] numbers");
      }
    }
  }
  return {};
}

}  // namespace schema

/// A validated preset: nested key -> value tree.
class PresetTree {
public:
  PresetTree() : tree_(Json::object()) {}

  /// Validates `tree` against the preset schema.
  explicit PresetTree(Json tree) : tree_(std::move(tree)) {
    schema::validate(tree_, schema::preset(), "");
  }

  const Json& tree() const { return tree_; }
  std::string name() const { return tree_.value("name", std::string{}); }
  std::string description() const { return tree_.value("description", std::string{}); }

  /// Leaf lookup by dotted path, e.g. "oscillators.osc2.level".
  const Json* find(std::string_view dotted) const {
    const Json* node = &tree_;
    std::size_t start = 0;
    while (start <= dotted.size()) {
      const auto dot = dotted.find('.', start);
      const std::string key(dotted.substr(start, dot - start));
      if (!node->is_object() || !node->contains(key)) return nullptr;
      node = &(*node)[key];
      if (dot == std::string_view::npos) break;
      start = dot + 1;
    }
    return node;
  }

  friend bool operator==(const PresetTree& a, const PresetTree& b) { return a.tree_ == b.tree_; }

private:
  Json tree_;
};

/// Parses YAML text into a validated preset. `origin` labels error messages.
inline PresetTree parse_preset(std::string_view yaml, std::string_view origin = "<preset>") {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(std::string(origin) + ":" + std::to_string(e.mark.line + 1) +
                      ": YAML parse error: " + e.msg);
  }
  try {
    return PresetTree(schema::from_yaml(root, schema::preset(), ""));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
}

/// Names of the presets embedded in the library.
inline std::vector<std::string> builtin_preset_names() {
  std::vector<std::string> names;
  for (const auto& p : builtin_presets) names.emplace_back(p.name);
  return names;
}

/// A builtin name ("default", "pitch_mapper", "windy") or a YAML file path.
inline PresetTree load_preset(std::string_view source) {
  for (const auto& p : builtin_presets)
    if (p.name == source) return parse_preset(p.yaml, "preset '" + std::string(p.name) + "'");
  const std::filesystem::path path(source);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    std::string names;
    for (const auto& n : builtin_preset_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + std::string(source) + "' (builtins: " + names +
                      "; or a path to a YAML file)");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read preset file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_preset(text.str(), path.string());
}

namespace detail {

inline void deep_merge(Json& base, const Json& overrides) {
  for (const auto& [key, value] : overrides.items()) {
    if (value.is_object() && base.contains(key) && base[key].is_object())
      deep_merge(base[key], value);
    else
      base[key] = value;
  }
}

inline void expand_dotted(Json& out, const std::string& dotted, const Json& value) {
  Json* node = &out;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted.find('.', start);
    const auto key = dotted.substr(start, dot - start);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    if (!node->contains(key) || !(*node)[key].is_object()) (*node)[key] = Json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace detail

/// Deep merge: override leaves win; the result is re-validated. Keys may be
/// nested objects or dotted paths ("oscillators.osc1.form").
inline PresetTree merge_overrides(const PresetTree& base, const Json& overrides) {
  if (!overrides.is_object()) throw ConfigError("preset overrides must be a mapping");
  Json nested = Json::object();
  for (const auto& [key, value] : overrides.items()) {
    if (key.find('.') != std::string::npos)
      detail::expand_dotted(nested, key, value);
    else if (value.is_object() && nested.contains(key) && nested[key].is_object())
      detail::deep_merge(nested[key], value);
    else
      nested[key] = value;
  }
  Json merged = base.tree();
  detail::deep_merge(merged, nested);
  return PresetTree(std::move(merged));
}

/// Overrides that turn `from` into `to` (for trees with the same keys).
inline Json diff(const PresetTree& from, const PresetTree& to) {
  std::function<Json(const Json&, const Json&)> walk = [&](const Json& a, const Json& b) {
    Json out = Json::object();
    for (const auto& [key, bv] : b.items()) {
      if (!a.contains(key)) {
        out[key] = bv;
      } else if (bv.is_object() && a[key].is_object()) {
        auto sub = walk(a[key], bv);
        if (!sub.empty()) out[key] = std::move(sub);
      } else if (a[key] != bv) {
        out[key] = bv;
      }
    }
    return out;
  };
  return walk(from.tree(), to.tree());
}

/// Overrides from YAML text, typed against the preset schema.
inline Json parse_overrides(const YAML::Node& node, std::string_view origin = "overrides") {
  if (!node || node.IsNull()) return Json::object();
  if (!node.IsMap()) throw ConfigError(std::string(origin) + ": overrides must be a mapping");
  // Dotted keys are expanded first so each leaf is typed by its schema node.
  YAML::Node nested(YAML::NodeType::Map);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    YAML::Node cursor = nested;
    std::size_t start = 0;
    while (true) {
      const auto dot = key.find('.', start);
      const auto part = key.substr(start, dot - start);
      if (dot == std::string::npos) {
        cursor[part] = kv.second;
        break;
      }
      if (!cursor[part] || !cursor[part].IsMap()) cursor[part] = YAML::Node(YAML::NodeType::Map);
      cursor.reset(cursor[part]);
      start = dot + 1;
    }
  }
  try {
    return schema::from_yaml(nested, schema::preset(), "");
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
}

namespace detail {

inline void emit(YAML::Emitter& out, const Json& v) {
  if (v.is_object()) {
    out << YAML::BeginMap;
    for (const auto& [key, child] : v.items()) {
      out << YAML::Key << key << YAML::Value;
      emit(out, child);
    }
    out << YAML::EndMap;
  } else if (v.is_array()) {
    out << YAML::Flow << YAML::BeginSeq;
    for (const auto& child : v) emit(out, child);
    out << YAML::EndSeq;
  } else if (v.is_boolean()) {
    out << v.get<bool>();
  } else if (v.is_number()) {
    out << v.get<double>();
  } else if (v.is_string()) {
    out << YAML::DoubleQuoted << v.get<std::string>();
  } else {
    out << YAML::Null;
  }
}

}  // namespace detail

/// Canonical YAML: keys sorted, on/off booleans, round-trip precision.
inline std::string serialize(const PresetTree& preset) {
  YAML::Emitter out;
  out.SetBoolFormat(YAML::OnOffBool);
  out.SetDoublePrecision(17);
  detail::emit(out, preset.tree());
  return std::string(out.c_str()) + "\n";
}

namespace detail {

inline double number_or(const Json& node, const char* key, double fallback) {
  return node.contains(key) ? node[key].get<double>() : fallback;
}

inline Phase phase_of(const Json& node, Phase fallback) {
  if (!node.contains("phase")) return fallback;
  const auto& p = node["phase"];
  if (p.is_string()) return Phase::random();
  return Phase::fixed(p.get<double>());
}

inline EnvelopeSpec envelope_of(const Json& node, EnvelopeSpec e) {
  e.attack = number_or(node, "A", e.attack);
  e.decay = number_or(node, "D", e.decay);
  e.sustain = number_or(node, "S", e.sustain);
  e.release = number_or(node, "R", e.release);
  e.attack_curve = number_or(node, "Ac", e.attack_curve);
  e.decay_curve = number_or(node, "Dc", e.decay_curve);
  e.release_curve = number_or(node, "Rc", e.release_curve);
  return e;
}

inline LfoSpec lfo_of(const Json& node) {
  LfoSpec lfo;
  if (node.is_null()) return lfo;
  lfo.use = node.value("use", lfo.use);
  if (node.contains("wave")) lfo.wave = parse_waveform(node["wave"].get<std::string>());
  lfo.amount = number_or(node, "amount", lfo.amount);
  lfo.freq = number_or(node, "freq", lfo.freq);
  lfo.freq_shift = number_or(node, "freq_shift", lfo.freq_shift);
  lfo.phase = phase_of(node, lfo.phase);
  lfo.envelope = envelope_of(node, lfo.envelope);
  lfo.level = number_or(node, "level", lfo.level);
  return lfo;
}

}  // namespace detail

/// Builds the generator configuration, filling every unset field with its
/// default.
inline GeneratorConfig compile(const PresetTree& preset) {
  const Json& t = preset.tree();
  GeneratorConfig cfg;
  if (t.contains("generator")) cfg.kind = parse_generator_kind(t["generator"].get<std::string>());

  cfg.oscillators.clear();
  if (t.contains("oscillators")) {
    std::vector<std::pair<int, const Json*>> oscs;
    for (const auto& [key, node] : t["oscillators"].items())
      oscs.emplace_back(std::stoi(key.substr(3)), &node);
    std::sort(oscs.begin(), oscs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [index, node] : oscs) {
      OscillatorSpec o;
      if (node->contains("form")) o.form = parse_waveform((*node)["form"].get<std::string>());
      o.level = detail::number_or(*node, "level", o.level);
      o.detune = detail::number_or(*node, "detune", o.detune);
      o.phase = detail::phase_of(*node, o.phase);
      cfg.oscillators.push_back(o);
    }
  }
  if (cfg.oscillators.empty()) cfg.oscillators.push_back(OscillatorSpec{});

  if (t.contains("note_envelope")) cfg.envelope = detail::envelope_of(t["note_envelope"], {});
  cfg.volume_lfo = detail::lfo_of(t.value("volume_lfo", Json()));
  cfg.pitch_lfo = detail::lfo_of(t.value("pitch_lfo", Json()));
  cfg.filter_on = t.value("filter", false);
  cfg.cutoff = detail::number_or(t, "cutoff", cfg.cutoff);
  cfg.volume = detail::number_or(t, "volume", cfg.volume);
  cfg.pitch = detail::number_or(t, "pitch", cfg.pitch);
  if (t.contains("spectraliser")) {
    cfg.spectrum_min_hz = detail::number_or(t["spectraliser"], "fmin", cfg.spectrum_min_hz);
    cfg.spectrum_max_hz = detail::number_or(t["spectraliser"], "fmax", cfg.spectrum_max_hz);
  }
  if (t.contains("sampler")) {
    const auto& s = t["sampler"];
    if (s.contains("samples")) cfg.sample_directory = s["samples"].get<std::string>();
    if (s.contains("loop")) cfg.loop = parse_loop_mode(s["loop"].get<std::string>());
  }
  if (t.contains("ranges"))
    for (const auto& [key, r] : t["ranges"].items())
      cfg.ranges[*find_parameter(key)] = Interval{r[0].get<double>(), r[1].get<double>()};
  return cfg;
}

}  // namespace sonify

#endif  // SONIFY_PRESETS_HPP
