#pragma once

// Experiment reports. Every verdict stores the value it tested and the
// interval it had to fall in, so pass/fail can be recomputed from the file.
//
// Report CSV, schema 1:
//   record,name,value,se,lower,upper,pass
//   schema,lpp-report,1,,,,
//   experiment,<name>,,,,,
//   config,<key>,<value>,,,,
//   metric,<name>,<value>,<se or empty>,,,
//   verdict,<name>,<value>,,<lower>,<upper>,<0|1>
// Plot data: series,x,y,y_err

#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lpp/io.hpp"

namespace lpp {

inline constexpr int kReportSchema = 1;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Metric {
  std::string name;
  double value = 0.0;
  double se = std::numeric_limits<double>::quiet_NaN();  // NaN when not applicable
};

struct Verdict {
  std::string name;
  double value = 0.0;
  double lower = -kInf;
  double upper = kInf;
  bool pass = false;
  std::string rule;  // one-line description for the text report

  bool recheck() const noexcept { return value >= lower && value <= upper; }
};

struct SeriesPoint {
  std::string series;
  double x = 0.0;
  double y = 0.0;
  double y_err = std::numeric_limits<double>::quiet_NaN();
};

struct EstimatorReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Metric> metrics;
  std::vector<Verdict> verdicts;
  std::vector<SeriesPoint> series;
  std::vector<std::string> notes;

  void set(std::string key, std::string value) { config.emplace_back(std::move(key), std::move(value)); }
  void set(std::string key, double value) { set(std::move(key), format_double(value)); }

  void metric(std::string name, double value, double se = std::numeric_limits<double>::quiet_NaN()) {
    metrics.push_back({std::move(name), value, se});
  }

  /// Records value in [lower, upper]. NaN values fail.
  const Verdict& check(std::string name, double value, double lower, double upper, std::string rule) {
    Verdict v{std::move(name), value, lower, upper, false, std::move(rule)};
    v.pass = v.recheck();
    verdicts.push_back(std::move(v));
    return verdicts.back();
  }

  void point(std::string name, double x, double y, double y_err = std::numeric_limits<double>::quiet_NaN()) {
    series.push_back({std::move(name), x, y, y_err});
  }

  void note(std::string text) { notes.push_back(std::move(text)); }

  bool passed() const {
    for (const auto& v : verdicts) {
      if (!v.pass) return false;
    }
    return true;
  }

  const Verdict* find_verdict(const std::string& name) const {
    for (const auto& v : verdicts) {
      if (v.name == name) return &v;
    }
    return nullptr;
  }

  const Metric* find_metric(const std::string& name) const {
    for (const auto& m : metrics) {
      if (m.name == name) return &m;
    }
    return nullptr;
  }
};

namespace detail {
inline std::string optional_number(double v) { return std::isnan(v) ? std::string() : format_double(v); }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}
}  // namespace detail

inline void write_report_csv(std::ostream& out, const EstimatorReport& r) {
  out << "record,name,value,se,lower,upper,pass\n";
  out << "schema,lpp-report," << kReportSchema << ",,,,\n";
  out << "experiment," << detail::csv_field(r.experiment) << ",,,,,\n";
  for (const auto& [k, v] : r.config) out << "config," << detail::csv_field(k) << ',' << detail::csv_field(v) << ",,,,\n";
  for (const auto& m : r.metrics) {
    out << "metric," << detail::csv_field(m.name) << ',' << format_double(m.value) << ','
        << detail::optional_number(m.se) << ",,,\n";
  }
  for (const auto& v : r.verdicts) {
    out << "verdict," << detail::csv_field(v.name) << ',' << format_double(v.value) << ",," << format_double(v.lower)
        << ',' << format_double(v.upper) << ',' << (v.pass ? 1 : 0) << '\n';
  }
}

inline void write_report_text(std::ostream& out, const EstimatorReport& r) {
  out << "experiment: " << r.experiment << "\n";
  out << "result: " << (r.passed() ? "PASS" : "FAIL") << "\n\n";
  out << "config\n";
  for (const auto& [k, v] : r.config) out << "  " << k << " = " << v << "\n";
  out << "\nmetrics\n";
  for (const auto& m : r.metrics) {
    out << "  " << m.name << " = " << format_double(m.value);
    if (!std::isnan(m.se)) out << " (se " << format_double(m.se) << ")";
    out << "\n";
  }
  out << "\nverdicts\n";
  for (const auto& v : r.verdicts) {
    out << "  [" << (v.pass ? "pass" : "FAIL") << "] " << v.name << ": " << format_double(v.value) << " in ["
        << format_double(v.lower) << ", " << format_double(v.upper) << "]";
    if (!v.rule.empty()) out << "  -- " << v.rule;
    out << "\n";
  }
  if (!r.notes.empty()) {
    out << "\nnotes\n";
    for (const auto& n : r.notes) out << "  " << n << "\n";
  }
}

/// Tidy long-format plot data.
inline void emit_plot_data(std::ostream& out, const EstimatorReport& r) {
  out << "series,x,y,y_err\n";
  for (const auto& p : r.series) {
    out << detail::csv_field(p.series) << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
        << detail::optional_number(p.y_err) << '\n';
  }
}

/// Parses a report CSV back; used to recheck verdicts from stored numbers.
inline EstimatorReport read_report_csv(std::istream& in) {
  detail::expect_header(in, {"record", "name", "value", "se", "lower", "upper", "pass"});
  EstimatorReport r;
  std::string line;
  bool schema_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) throw std::invalid_argument("report row needs 7 fields");
    if (f[0] == "schema") {
      if (f[1] != "lpp-report" || parse_integer<int>(f[2]) != kReportSchema) {
        throw std::invalid_argument("unsupported report schema");
      }
      schema_seen = true;
    } else if (f[0] == "experiment") {
      r.experiment = f[1];
    } else if (f[0] == "config") {
      r.config.emplace_back(f[1], f[2]);
    } else if (f[0] == "metric") {
      r.metrics.push_back({f[1], parse_double(f[2]),
                           f[3].empty() ? std::numeric_limits<double>::quiet_NaN() : parse_double(f[3])});
    } else if (f[0] == "verdict") {
      Verdict v{f[1], parse_double(f[2]), parse_double(f[4]), parse_double(f[5]), f[6] == "1", {}};
      r.verdicts.push_back(std::move(v));
    } else {
      throw std::invalid_argument("unknown report record: " + f[0]);
    }
  }
  if (!schema_seen) throw std::invalid_argument("report has no schema row");
  return r;
}

/// Writes <stem>.csv, <stem>.txt and <stem>.plot.csv into dir; returns the paths.
inline std::vector<std::filesystem::path> save_report(const std::filesystem::path& dir, const std::string& stem,
                                                      const EstimatorReport& r) {
  const std::vector<std::filesystem::path> paths{dir / (stem + ".csv"), dir / (stem + ".txt"),
                                                 dir / (stem + ".plot.csv")};
  {
    auto out = detail::open_output(paths[0]);
    write_report_csv(out, r);
  }
  {
    auto out = detail::open_output(paths[1]);
    write_report_text(out, r);
  }
  {
    auto out = detail::open_output(paths[2]);
    emit_plot_data(out, r);
  }
  return paths;
}

}  // namespace lpp
