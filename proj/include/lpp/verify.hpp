#pragma once

// The numbered acceptance checks as a batch over the experiments.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "lpp/config.hpp"
#include "lpp/experiments.hpp"

namespace lpp {

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<EstimatorReport> reports;
  double seconds = 0.0;  // wall time; not written to report files

  bool passed() const {
    for (const auto& r : reports) {
      if (!r.passed()) return false;
    }
    return !reports.empty();
  }
};

struct CriterionDef {
  int id;
  std::string title;
  std::vector<std::string> experiments;
};

inline const std::vector<CriterionDef>& criteria() {
  static const std::vector<CriterionDef> c{
      {1, "oracle equivalence", {"oracle"}},
      {2, "structural identities", {"structural"}},
      {3, "increments along down-right paths", {"burke"}},
      {4, "mean formula", {"mean-formula"}},
      {5, "variance identity", {"variance-identity"}},
      {6, "variance exponent 2/3", {"variance-scaling"}},
      {7, "exit point tails", {"exit-tail"}},
      {8, "Z* law", {"zstar"}},
      {9, "TASEP bridge", {"tasep-bridge"}},
      {10, "rarefaction boundaries", {"rarefaction", "transversal"}},
      {11, "variance comparison", {"variance-comparison"}},
  };
  return c;
}

inline ExperimentConfig verify_config(const std::string& name, bool quick, std::uint64_t seed) {
  ExperimentConfig c = quick ? quick_config(name) : default_config(name);
  c.seed = seed;
  return c;
}

/// Runs the selected criteria (all when `only` is empty). `progress` is
/// called after each criterion.
inline std::vector<CriterionResult> verify_all(bool quick, std::uint64_t seed, const std::vector<int>& only = {},
                                               const std::function<void(const CriterionResult&)>& progress = {}) {
  std::vector<CriterionResult> out;
  for (const CriterionDef& def : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), def.id) == only.end()) continue;
    CriterionResult res;
    res.id = def.id;
    res.title = def.title;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& name : def.experiments) res.reports.push_back(run_experiment(verify_config(name, quick, seed)));
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (progress) progress(res);
    out.push_back(std::move(res));
  }
  return out;
}

/// Writes every report plus summary.csv; returns the files written.
inline std::vector<std::filesystem::path> save_verification(const std::filesystem::path& dir,
                                                            const std::vector<CriterionResult>& results, bool quick,
                                                            std::uint64_t seed) {
  std::vector<std::filesystem::path> files;
  for (const auto& res : results) {
    for (const auto& r : res.reports) {
      const auto stem = "criterion" + std::to_string(res.id) + "_" + r.experiment;
      for (auto& p : save_report(dir, stem, r)) files.push_back(p);
      const auto cfg = dir / (stem + ".cfg");
      auto out = detail::open_output(cfg);
      write_config(out, verify_config(r.experiment, quick, seed));
      files.push_back(cfg);
    }
  }
  const auto summary = dir / "summary.csv";
  auto out = detail::open_output(summary);
  out << "criterion,title,pass\n";
  for (const auto& res : results) out << res.id << ',' << res.title << ',' << (res.passed() ? "PASS" : "FAIL") << '\n';
  files.push_back(summary);
  return files;
}

}  // namespace lpp
