#pragma once

// Plain-text experiment configuration:
//
//   # comment
//   [experiment]
//   name = exit-tail
//   samples = 5000
//   a_grid = 0.5, 1, 1.5, 2
//   points = 0.5:100, 0.3:1000
//   [tolerance]
//   level = 0.01
//
// Keys not given keep the defaults of the named experiment. Unknown keys and
// sections are errors. write_config emits every key, so a config echoed next
// to a report reproduces it exactly.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "lpp/experiment_config.hpp"
#include "lpp/io.hpp"
#include "lpp/parallel.hpp"
#include "lpp/report.hpp"

namespace lpp {

inline constexpr const char* kToolVersion = "1.0.0";

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty list element in '" + s + "'");
    out.push_back(item);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& x : split_list(s)) out.push_back(parse_double(x));
  return out;
}

inline std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + format_double(v[k]);
  return s;
}

inline std::vector<std::pair<double, double>> parse_points(const std::string& s) {
  std::vector<std::pair<double, double>> out;
  for (const auto& x : split_list(s)) {
    const auto colon = x.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("point must be rho:t, got '" + x + "'");
    out.emplace_back(parse_double(trim(x.substr(0, colon))), parse_double(trim(x.substr(colon + 1))));
  }
  return out;
}

inline std::string points_text(const std::vector<std::pair<double, double>>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + format_double(v[k].first) + ":" + format_double(v[k].second);
  return s;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;
using Getter = std::function<std::string(const ExperimentConfig&)>;

struct Field {
  std::string key;
  Setter set;
  Getter get;
};

template <class T>
Field int_field(std::string key, T ExperimentConfig::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.*member = parse_integer<T>(v); },
          [member](const ExperimentConfig& c) { return std::to_string(c.*member); }};
}

inline Field real_field(std::string key, double ExperimentConfig::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.*member = parse_double(v); },
          [member](const ExperimentConfig& c) { return format_double(c.*member); }};
}

inline Field list_field(std::string key, std::vector<double> ExperimentConfig::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.*member = parse_list(v); },
          [member](const ExperimentConfig& c) { return list_text(c.*member); }};
}

template <class T>
Field tol_int(std::string key, T TolerancePolicy::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.tol.*member = parse_integer<T>(v); },
          [member](const ExperimentConfig& c) { return std::to_string(c.tol.*member); }};
}

inline Field tol_real(std::string key, double TolerancePolicy::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.tol.*member = parse_double(v); },
          [member](const ExperimentConfig& c) { return format_double(c.tol.*member); }};
}

inline const std::vector<Field>& experiment_fields() {
  static const std::vector<Field> f{
      int_field("seed", &ExperimentConfig::seed),
      real_field("rho", &ExperimentConfig::rho),
      real_field("lambda", &ExperimentConfig::lambda),
      int_field("m", &ExperimentConfig::m),
      int_field("n", &ExperimentConfig::n),
      real_field("t", &ExperimentConfig::t),
      list_field("t_grid", &ExperimentConfig::t_grid),
      int_field("samples", &ExperimentConfig::samples),
      {"boundary", [](ExperimentConfig& c, const std::string& v) { c.boundary = v; },
       [](const ExperimentConfig& c) { return c.boundary; }},
      {"tie", [](ExperimentConfig& c, const std::string& v) { c.tie = parse_tie_policy(v); },
       [](const ExperimentConfig& c) { return std::string(tie_policy_name(c.tie)); }},
      list_field("a_grid", &ExperimentConfig::a_grid),
      list_field("delta_grid", &ExperimentConfig::delta_grid),
      real_field("s_fraction", &ExperimentConfig::s_fraction),
      real_field("alpha", &ExperimentConfig::alpha),
      list_field("densities", &ExperimentConfig::densities),
      {"points", [](ExperimentConfig& c, const std::string& v) { c.points = parse_points(v); },
       [](const ExperimentConfig& c) { return points_text(c.points); }},
      real_field("horizon", &ExperimentConfig::horizon),
      int_field("track", &ExperimentConfig::track),
      int_field("interarrivals", &ExperimentConfig::interarrivals),
      int_field("bins", &ExperimentConfig::bins),
      int_field("micro_samples", &ExperimentConfig::micro_samples),
      int_field("instances", &ExperimentConfig::instances),
      real_field("streaming_above", &ExperimentConfig::streaming_above),
      real_field("lambda_left", &ExperimentConfig::lambda_left),
      real_field("lambda_right", &ExperimentConfig::lambda_right),
  };
  return f;
}

inline const std::vector<Field>& tolerance_fields() {
  static const std::vector<Field> f{
      tol_real("level", &TolerancePolicy::level),
      tol_real("se_bound", &TolerancePolicy::se_bound),
      tol_real("slope_low", &TolerancePolicy::slope_low),
      tol_real("slope_high", &TolerancePolicy::slope_high),
      tol_real("control_low", &TolerancePolicy::control_low),
      tol_real("control_high", &TolerancePolicy::control_high),
      tol_real("tail_ratio", &TolerancePolicy::tail_ratio),
      tol_real("quantile_ratio", &TolerancePolicy::quantile_ratio),
      tol_real("deficit_ratio", &TolerancePolicy::deficit_ratio),
      tol_real("stability_ratio", &TolerancePolicy::stability_ratio),
      tol_real("exact_tolerance", &TolerancePolicy::exact_tolerance),
      tol_real("oracle_tolerance", &TolerancePolicy::oracle_tolerance),
      tol_int("bridge_min_pass", &TolerancePolicy::bridge_min_pass),
  };
  return f;
}

inline const Field* find_field(const std::vector<Field>& fields, const std::string& key) {
  for (const auto& f : fields) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

}  // namespace detail

/// Parses a configuration. `name` supplies the experiment when the text has
/// no name key; a name in the text must agree with it when both are given.
inline ExperimentConfig parse_config(std::istream& in, const std::string& name = {}) {
  struct Entry {
    std::string section, key, value;
    int line;
  };
  std::vector<Entry> entries;
  std::string section = "experiment";
  std::string text_name;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string s = detail::trim(line);
    if (s.empty()) continue;
    const std::string where = "config line " + std::to_string(number) + ": ";
    if (s.front() == '[') {
      if (s.back() != ']') throw std::invalid_argument(where + "malformed section header");
      section = detail::trim(s.substr(1, s.size() - 2));
      if (section != "experiment" && section != "tolerance") throw std::invalid_argument(where + "unknown section " + section);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw std::invalid_argument(where + "expected key = value");
    Entry e{section, detail::trim(s.substr(0, eq)), detail::trim(s.substr(eq + 1)), number};
    if (e.key.empty() || e.value.empty()) throw std::invalid_argument(where + "empty key or value");
    if (section == "experiment" && e.key == "name") {
      text_name = e.value;
      continue;
    }
    entries.push_back(std::move(e));
  }
  if (!name.empty() && !text_name.empty() && name != text_name) {
    throw std::invalid_argument("config is for experiment '" + text_name + "', not '" + name + "'");
  }
  const std::string chosen = name.empty() ? text_name : name;
  if (chosen.empty()) throw std::invalid_argument("config does not name an experiment");
  ExperimentConfig c = default_config(chosen);
  std::map<std::string, int> seen;
  for (const Entry& e : entries) {
    const auto& fields = e.section == "experiment" ? detail::experiment_fields() : detail::tolerance_fields();
    const detail::Field* f = detail::find_field(fields, e.key);
    const std::string where = "config line " + std::to_string(e.line) + ": ";
    if (!f) throw std::invalid_argument(where + "unknown key '" + e.key + "' in [" + e.section + "]");
    if (!seen.emplace(e.section + "." + e.key, e.line).second) throw std::invalid_argument(where + "duplicate key " + e.key);
    try {
      f->set(c, e.value);
    } catch (const std::invalid_argument& ex) {
      throw std::invalid_argument(where + e.key + ": " + ex.what());
    }
  }
  validate_config(c);
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text, const std::string& name = {}) {
  std::istringstream in(text);
  return parse_config(in, name);
}

inline ExperimentConfig load_config(const std::filesystem::path& path, const std::string& name = {}) {
  auto in = detail::open_input(path);
  return parse_config(in, name);
}

/// Every key of the effective configuration.
inline void write_config(std::ostream& out, const ExperimentConfig& c) {
  out << "[experiment]\nname = " << c.name << '\n';
  for (const auto& f : detail::experiment_fields()) out << f.key << " = " << f.get(c) << '\n';
  out << "\n[tolerance]\n";
  for (const auto& f : detail::tolerance_fields()) out << f.key << " = " << f.get(c) << '\n';
}

inline std::string config_text(const ExperimentConfig& c) {
  std::ostringstream out;
  write_config(out, c);
  return out.str();
}

// ---------------------------------------------------------------------------
// Run manifest: key,value rows describing one invocation.

struct RunManifest {
  std::vector<std::pair<std::string, std::string>> rows;
  void add(std::string key, std::string value) { rows.emplace_back(std::move(key), std::move(value)); }
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string compiler_fingerprint() {
#if defined(__clang__)
  return "clang " __clang_version__;
#elif defined(__GNUC__)
  return "gcc " __VERSION__;
#else
  return "unknown";
#endif
}

inline RunManifest start_manifest(const std::string& command, std::uint64_t seed) {
  RunManifest m;
  m.add("tool_version", kToolVersion);
  m.add("command", command);
  m.add("seed", std::to_string(seed));
  m.add("started_utc", utc_timestamp());
  m.add("compiler", compiler_fingerprint());
  m.add("threads", std::to_string(default_threads()));
  m.add("hardware_threads", std::to_string(std::thread::hardware_concurrency()));
  return m;
}

inline void write_manifest(const std::filesystem::path& path, RunManifest m) {
  m.add("finished_utc", utc_timestamp());
  auto out = detail::open_output(path);
  out << "key,value\n";
  for (const auto& [k, v] : m.rows) out << detail::csv_field(k) << ',' << detail::csv_field(v) << '\n';
}

}  // namespace lpp
