#include "robinspec/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace robinspec {

namespace {

// ---------------------------------------------------------------------------
// Values and formatting

struct ConfigValue {
  enum class Kind { kString, kNumber, kBool, kArray };
  Kind kind = Kind::kString;
  std::string str;
  double num = 0;
  bool flag = false;
  std::vector<ConfigValue> items;
};

const char* kind_name(ConfigValue::Kind kind) {
  switch (kind) {
    case ConfigValue::Kind::kString: return "string";
    case ConfigValue::Kind::kNumber: return "number";
    case ConfigValue::Kind::kBool: return "boolean";
    case ConfigValue::Kind::kArray: return "array";
  }
  return "value";
}

[[noreturn]] void fail(const std::string& where, const std::string& message) {
  throw std::runtime_error(where + ": " + message);
}

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (const char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '-') {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Declarative-file value grammar (shared by the .toml subset and --set)

ConfigValue parse_value_text(const std::string& raw, const std::string& where);

std::vector<std::string> split_top_level(const std::string& body, const std::string& where) {
  std::vector<std::string> parts;
  std::string current;
  bool quoted = false;
  for (const char c : body) {
    if (c == '"') quoted = !quoted;
    if (c == '[' && !quoted) fail(where, "nested arrays are not supported");
    if (c == ',' && !quoted) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (quoted) fail(where, "unterminated string");
  if (!trim(current).empty() || !parts.empty()) parts.push_back(current);
  return parts;
}

ConfigValue parse_value_text(const std::string& raw, const std::string& where) {
  const std::string text = trim(raw);
  if (text.empty()) fail(where, "missing value");
  ConfigValue value;
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') fail(where, "unterminated string");
    value.kind = ConfigValue::Kind::kString;
    value.str = text.substr(1, text.size() - 2);
    if (value.str.find('"') != std::string::npos) fail(where, "stray quote inside string");
    return value;
  }
  if (text == "true" || text == "false") {
    value.kind = ConfigValue::Kind::kBool;
    value.flag = text == "true";
    return value;
  }
  if (text.front() == '[') {
    if (text.back() != ']') fail(where, "unterminated array");
    value.kind = ConfigValue::Kind::kArray;
    for (const std::string& part : split_top_level(text.substr(1, text.size() - 2), where)) {
      if (trim(part).empty()) fail(where, "empty array element");
      value.items.push_back(parse_value_text(part, where));
    }
    return value;
  }
  char* end = nullptr;
  value.num = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(value.num)) {
    fail(where, "cannot parse value '" + text + "' (expected a quoted string, number, boolean, or array)");
  }
  value.kind = ConfigValue::Kind::kNumber;
  return value;
}

// ---------------------------------------------------------------------------
// Typed extraction

double as_number(const ConfigValue& v, const std::string& where) {
  if (v.kind != ConfigValue::Kind::kNumber) {
    fail(where, std::string("expected a number, got a ") + kind_name(v.kind));
  }
  return v.num;
}

int as_int(const ConfigValue& v, const std::string& where) {
  const double d = as_number(v, where);
  const double r = std::round(d);
  if (std::abs(d - r) > 1e-9 || std::abs(r) > 2e9) fail(where, "expected an integer");
  return static_cast<int>(r);
}

unsigned as_unsigned(const ConfigValue& v, const std::string& where) {
  const double d = as_number(v, where);
  const double r = std::round(d);
  if (std::abs(d - r) > 1e-9 || r < 0 || r > 4294967295.0) {
    fail(where, "expected a nonnegative integer");
  }
  return static_cast<unsigned>(r);
}

bool as_bool(const ConfigValue& v, const std::string& where) {
  if (v.kind != ConfigValue::Kind::kBool) {
    fail(where, std::string("expected true or false, got a ") + kind_name(v.kind));
  }
  return v.flag;
}

std::string as_string(const ConfigValue& v, const std::string& where) {
  if (v.kind != ConfigValue::Kind::kString) {
    fail(where, std::string("expected a quoted string, got a ") + kind_name(v.kind));
  }
  return v.str;
}

std::vector<double> as_number_list(const ConfigValue& v, const std::string& where) {
  if (v.kind != ConfigValue::Kind::kArray) {
    fail(where, std::string("expected an array of numbers, got a ") + kind_name(v.kind));
  }
  std::vector<double> out;
  for (const ConfigValue& item : v.items) out.push_back(as_number(item, where));
  return out;
}

std::vector<std::string> as_string_list(const ConfigValue& v, const std::string& where) {
  if (v.kind != ConfigValue::Kind::kArray) {
    fail(where, std::string("expected an array of strings, got a ") + kind_name(v.kind));
  }
  std::vector<std::string> out;
  for (const ConfigValue& item : v.items) out.push_back(as_string(item, where));
  return out;
}

// ---------------------------------------------------------------------------
// The key table

using Setter = std::function<void(RunConfig&, const ConfigValue&, const std::string&)>;

struct KeyEntry {
  const char* key;
  Setter set;
};

const std::vector<KeyEntry>& key_table() {
  static const std::vector<KeyEntry> table = {
      {"command", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.command = as_string(v, w); }},
      {"grid.dim", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.dim = as_int(v, w); }},
      {"grid.n", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.dim = as_int(v, w); }},
      {"grid.half_width", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.half_width = as_number(v, w); }},
      {"grid.L", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.half_width = as_number(v, w); }},
      {"grid.spacing", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.spacing = as_number(v, w); }},
      {"grid.h", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.spacing = as_number(v, w); }},
      {"alpha", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.alpha = as_string(v, w); }},
      {"solver.eig_residual", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.eig_residual = as_number(v, w); }},
      {"solver.solve_residual", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.solve_residual = as_number(v, w); }},
      {"solver.method", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.solver_method = as_string(v, w); }},
      {"eigs.count", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.eig_count = as_int(v, w); }},
      {"eigs.shift", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.eig_shift = as_number(v, w); }},
      {"constants.c_star", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.c_star = as_number(v, w); }},
      {"constants.s_star", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.s_star_override = as_number(v, w); }},
      {"check.regime", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.check_regime = as_string(v, w); }},
      {"lambda.re_min", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.lambda_grid.re_min = as_number(v, w); }},
      {"lambda.re_max", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.lambda_grid.re_max = as_number(v, w); }},
      {"lambda.re_count", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.lambda_grid.re_count = as_int(v, w); }},
      {"lambda.im_min", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.lambda_grid.im_min = as_number(v, w); }},
      {"lambda.im_max", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.lambda_grid.im_max = as_number(v, w); }},
      {"lambda.im_count", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.lambda_grid.im_count = as_int(v, w); }},
      {"lambda.mirror", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.lambda_grid.mirror = as_bool(v, w); }},
      {"cutoff.radii", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.window_radii = as_number_list(v, w); }},
      {"hardy.samples", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.hardy_samples = as_int(v, w); }},
      {"trace.samples", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.trace_samples = as_int(v, w); }},
      {"sweep.bumps", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.bump_count = as_int(v, w); }},
      {"sweep.norm_proxy", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.norm_proxy = as_bool(v, w); }},
      {"sweep.power_steps", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.power_steps = as_int(v, w); }},
      {"seed", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.seed = as_unsigned(v, w); }},
      {"jobs", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.jobs = as_int(v, w); }},
      {"output.dir", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.out_dir = as_string(v, w); }},
      {"output.formats", [](RunConfig& c, const ConfigValue& v, const std::string& w) { c.formats = as_string_list(v, w); }},
  };
  return table;
}

void apply_key(RunConfig& config, const std::string& key, const ConfigValue& value,
               const std::string& where) {
  for (const KeyEntry& entry : key_table()) {
    if (key == entry.key) {
      entry.set(config, value, where);
      return;
    }
  }
  fail(where, "unknown key '" + key + "'");
}

// ---------------------------------------------------------------------------
// File loaders

void load_toml_subset(const std::string& path, std::istream& in, RunConfig& config) {
  std::string line;
  std::string prefix;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = path + ":" + std::to_string(lineno);
    // Strip comments outside quotes.
    bool quoted = false;
    std::string code;
    for (const char c : line) {
      if (c == '"') quoted = !quoted;
      if (c == '#' && !quoted) break;
      code.push_back(c);
    }
    const std::string stripped = trim(code);
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') fail(where, "unterminated section header");
      const std::string section = trim(stripped.substr(1, stripped.size() - 2));
      if (!valid_key(section)) fail(where, "invalid section name '" + section + "'");
      prefix = section + ".";
      continue;
    }
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) fail(where, "expected key = value");
    const std::string key = prefix + trim(stripped.substr(0, eq));
    if (!valid_key(key)) fail(where, "invalid key '" + key + "'");
    apply_key(config, key, parse_value_text(stripped.substr(eq + 1), where), where);
  }
}

ConfigValue from_json(const nlohmann::json& j, const std::string& where) {
  ConfigValue value;
  if (j.is_string()) {
    value.kind = ConfigValue::Kind::kString;
    value.str = j.get<std::string>();
  } else if (j.is_boolean()) {
    value.kind = ConfigValue::Kind::kBool;
    value.flag = j.get<bool>();
  } else if (j.is_number()) {
    value.kind = ConfigValue::Kind::kNumber;
    value.num = j.get<double>();
  } else if (j.is_array()) {
    value.kind = ConfigValue::Kind::kArray;
    for (const auto& item : j) value.items.push_back(from_json(item, where));
  } else {
    fail(where, "unsupported JSON value type");
  }
  return value;
}

void load_json(const std::string& path, std::istream& in, RunConfig& config) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(path, std::string("JSON parse error: ") + e.what());
  }
  if (!root.is_object()) fail(path, "top level must be a JSON object");
  // Flatten nested objects into dotted keys so both formats share one schema.
  std::function<void(const nlohmann::json&, const std::string&)> walk =
      [&](const nlohmann::json& node, const std::string& prefix) {
        for (const auto& [k, v] : node.items()) {
          const std::string key = prefix.empty() ? k : prefix + "." + k;
          const std::string where = path + " (field '" + key + "')";
          if (v.is_object()) {
            walk(v, key);
          } else {
            apply_key(config, key, from_json(v, where), where);
          }
        }
      };
  walk(root, "");
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::vector<cplx> lambda_points(const LambdaGridSpec& spec) {
  std::vector<cplx> points;
  for (int i = 0; i < spec.re_count; ++i) {
    const double re = spec.re_count == 1
                          ? spec.re_min
                          : spec.re_min + (spec.re_max - spec.re_min) * i / (spec.re_count - 1.0);
    for (int j = 0; j < spec.im_count; ++j) {
      const double im = spec.im_count == 1
                            ? spec.im_min
                            : spec.im_min + (spec.im_max - spec.im_min) * j / (spec.im_count - 1.0);
      points.emplace_back(re, im);
      if (spec.mirror && im != 0) points.emplace_back(re, -im);
    }
  }
  return points;
}

void load_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".toml") == 0) {
    load_toml_subset(path, in, config);
  } else if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    load_json(path, in, config);
  } else {
    throw std::runtime_error(path + ": unrecognized config extension (expected .toml or .json)");
  }
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const std::string where = "--set " + assignment;
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) fail(where, "expected key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (!valid_key(key)) fail(where, "invalid key '" + key + "'");
  apply_key(config, key, parse_value_text(assignment.substr(eq + 1), where), where);
}

void validate(const RunConfig& config) {
  const auto bad = [](const std::string& field, const std::string& why) {
    throw std::runtime_error("config field " + field + ": " + why);
  };
  static const std::vector<std::string> commands = {"assemble", "eigs",  "check",
                                                    "identities", "cutoff", "hardy",
                                                    "trace",    "resolvent-sweep", "report"};
  if (std::find(commands.begin(), commands.end(), config.command) == commands.end()) {
    bad("command", "unknown command '" + config.command + "' (expected one of " +
                       join(commands, ", ") + ")");
  }
  if (config.dim < 1 || config.dim > 3) bad("grid.dim", "must be 1, 2, or 3");
  if (!(config.half_width > 0)) bad("grid.half_width", "must be positive");
  if (!(config.spacing > 0)) {
    bad("grid.spacing", "must be positive; got " + format_double(config.spacing));
  }
  if (!(config.eig_residual > 0) || config.eig_residual >= 1) {
    bad("solver.eig_residual", "must lie in (0, 1)");
  }
  if (!(config.solve_residual > 0) || config.solve_residual >= 1) {
    bad("solver.solve_residual", "must lie in (0, 1)");
  }
  if (config.solver_method != "auto" && config.solver_method != "direct" &&
      config.solver_method != "iterative") {
    bad("solver.method", "must be auto, direct, or iterative");
  }
  if (config.eig_count < 1) bad("eigs.count", "must be at least 1");
  if (!(config.c_star > 0)) bad("constants.c_star", "must be positive");
  if (config.s_star_override && !(*config.s_star_override > 0)) {
    bad("constants.s_star", "must be positive");
  }
  if (config.check_regime != "selfadjoint" && config.check_regime != "smallness" &&
      config.check_regime != "divergence") {
    bad("check.regime", "must be selfadjoint, smallness, or divergence");
  }
  if (config.lambda_grid.re_count < 1) bad("lambda.re_count", "must be at least 1");
  if (config.lambda_grid.im_count < 1) bad("lambda.im_count", "must be at least 1");
  if (config.lambda_grid.re_max < config.lambda_grid.re_min) {
    bad("lambda.re_max", "must not be below lambda.re_min");
  }
  if (config.lambda_grid.im_max < config.lambda_grid.im_min) {
    bad("lambda.im_max", "must not be below lambda.im_min");
  }
  if (config.window_radii.empty()) bad("cutoff.radii", "must not be empty");
  for (std::size_t i = 0; i < config.window_radii.size(); ++i) {
    if (!(config.window_radii[i] > 0)) bad("cutoff.radii", "entries must be positive");
    if (i > 0 && config.window_radii[i] <= config.window_radii[i - 1]) {
      bad("cutoff.radii", "entries must be strictly increasing");
    }
  }
  if (config.hardy_samples < 1) bad("hardy.samples", "must be at least 1");
  if (config.trace_samples < 1) bad("trace.samples", "must be at least 1");
  if (config.bump_count < 1) bad("sweep.bumps", "must be at least 1");
  if (config.power_steps < 1) bad("sweep.power_steps", "must be at least 1");
  if (config.jobs < 1) bad("jobs", "must be at least 1");
  if (config.out_dir.empty()) bad("output.dir", "must not be empty");
  if (config.formats.empty()) bad("output.formats", "must not be empty");
  for (const std::string& f : config.formats) {
    if (f != "csv" && f != "json" && f != "svg") {
      bad("output.formats", "unknown format '" + f + "' (expected csv, json, or svg)");
    }
    if (std::count(config.formats.begin(), config.formats.end(), f) > 1) {
      bad("output.formats", "duplicate format '" + f + "'");
    }
  }
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto put = [&](const char* key, const std::string& value) { out.emplace_back(key, value); };
  const auto quote = [](const std::string& s) { return "\"" + s + "\""; };

  put("command", quote(config.command));
  put("grid.dim", std::to_string(config.dim));
  put("grid.half_width", format_double(config.half_width));
  put("grid.spacing", format_double(config.spacing));
  put("alpha", quote(config.alpha));
  put("solver.eig_residual", format_double(config.eig_residual));
  put("solver.solve_residual", format_double(config.solve_residual));
  put("solver.method", quote(config.solver_method));
  put("eigs.count", std::to_string(config.eig_count));
  put("eigs.shift", format_double(config.eig_shift));
  put("constants.c_star", format_double(config.c_star));
  if (config.s_star_override) put("constants.s_star", format_double(*config.s_star_override));
  put("check.regime", quote(config.check_regime));
  put("lambda.re_min", format_double(config.lambda_grid.re_min));
  put("lambda.re_max", format_double(config.lambda_grid.re_max));
  put("lambda.re_count", std::to_string(config.lambda_grid.re_count));
  put("lambda.im_min", format_double(config.lambda_grid.im_min));
  put("lambda.im_max", format_double(config.lambda_grid.im_max));
  put("lambda.im_count", std::to_string(config.lambda_grid.im_count));
  put("lambda.mirror", config.lambda_grid.mirror ? "true" : "false");
  {
    std::vector<std::string> items;
    for (const double r : config.window_radii) items.push_back(format_double(r));
    put("cutoff.radii", "[" + join(items, ", ") + "]");
  }
  put("hardy.samples", std::to_string(config.hardy_samples));
  put("trace.samples", std::to_string(config.trace_samples));
  put("sweep.bumps", std::to_string(config.bump_count));
  put("sweep.norm_proxy", config.norm_proxy ? "true" : "false");
  put("sweep.power_steps", std::to_string(config.power_steps));
  put("seed", std::to_string(config.seed));
  put("jobs", std::to_string(config.jobs));
  put("output.dir", quote(config.out_dir));
  {
    std::vector<std::string> items;
    for (const std::string& f : config.formats) items.push_back(quote(f));
    put("output.formats", "[" + join(items, ", ") + "]");
  }
  return out;
}

}  // namespace robinspec
