#pragma once

// Parameters of the Monte Carlo experiments and their acceptance tolerances.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpp/path.hpp"

namespace lpp {

struct TolerancePolicy {
  double level = 0.01;           // per-test significance; families are Bonferroni-split
  double se_bound = 3.0;         // identity residuals, in combined standard errors
  double slope_low = 0.55;       // exponent window for Var vs t on log-log axes
  double slope_high = 0.80;
  double control_low = 0.9;      // diffusive control slope window
  double control_high = 1.1;
  double tail_ratio = 5.0;       // max/min of weighted tails
  double quantile_ratio = 2.0;   // 5%-95% range stability across the t-grid
  double deficit_ratio = 3.0;    // (t - mean G^)/t^(1/3) stability across the t-grid
  double stability_ratio = 2.0;  // Var/t^(2/3) at the two largest t
  double exact_tolerance = 1e-9;
  double oracle_tolerance = 1e-12;
  int bridge_min_pass = 33;      // of the 36 cells (i, j) <= (5, 5)
};

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 1;
  double rho = 0.5;
  double lambda = 0.6;
  int m = 24;
  int n = 16;
  double t = 1000.0;
  std::vector<double> t_grid{250.0, 500.0, 1000.0, 2000.0};
  std::size_t samples = 500;
  std::string boundary = "equilibrium";
  TiePolicy tie = TiePolicy::kRightmost;
  std::vector<double> a_grid{0.5, 1.0, 1.5, 2.0};
  std::vector<double> delta_grid{0.05, 0.1, 0.2};
  double s_fraction = 0.5;       // s = s_fraction * t for transversal fluctuations
  double alpha = 0.9;            // tail exponent 3*alpha in the transversal weights
  std::vector<double> densities{0.3, 0.5, 0.7};
  std::vector<std::pair<double, double>> points{{0.5, 100.0}, {0.3, 1000.0}};  // (rho, t)
  double horizon = 60.0;         // TASEP time horizon
  int track = 5;                 // TASEP tracking bound
  int interarrivals = 10;        // per run, for the Poisson checks
  int bins = 6;                  // time bins for the count correlation
  std::size_t micro_samples = 1000000;
  std::size_t instances = 100;   // per exact identity
  double streaming_above = 4000.0;
  double lambda_left = 0.7;      // fan boundary densities for boundary = rarefaction
  double lambda_right = 0.3;
  TolerancePolicy tol;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "oracle",         "structural",  "burke",        "mean-formula", "variance-identity",
      "variance-scaling", "exit-tail", "zstar",        "tasep-bridge", "rarefaction",
      "transversal",    "variance-comparison", "zeroed-bounds"};
  return names;
}

/// Defaults at the sizes of the acceptance criteria.
inline ExperimentConfig default_config(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "oracle" || name == "structural" || name == "zeroed-bounds") {
    c.instances = 100;
  } else if (name == "burke") {
    c.m = 40;
    c.n = 40;
    c.samples = 2000;
  } else if (name == "mean-formula") {
    c.samples = 10000;
  } else if (name == "variance-identity") {
    c.rho = 0.6;
    c.m = 24;
    c.n = 16;
    c.samples = 100000;
  } else if (name == "variance-scaling") {
    c.samples = 500;
  } else if (name == "exit-tail") {
    c.t = 1000.0;
    c.samples = 5000;
  } else if (name == "zstar") {
    c.t = 400.0;
    c.samples = 2000;
  } else if (name == "tasep-bridge") {
    c.rho = 0.4;
    c.samples = 2000;
  } else if (name == "rarefaction") {
    c.boundary = "zero-both";
    c.samples = 500;
  } else if (name == "transversal") {
    c.boundary = "zero-both";
    c.t = 1000.0;
    c.samples = 2000;
    c.a_grid = {0.5, 1.0, 2.0};
  } else if (name == "variance-comparison") {
    c.rho = 0.4;
    c.lambda = 0.6;
    c.m = 30;
    c.n = 20;
    c.samples = 100000;
  } else {
    throw std::invalid_argument("unknown experiment: " + name);
  }
  return c;
}

/// Reduced sample counts for a fast end-to-end run.
inline ExperimentConfig quick_config(const std::string& name) {
  ExperimentConfig c = default_config(name);
  c.instances = 25;
  c.micro_samples = 100000;
  if (name == "burke") c.samples = 300;
  if (name == "mean-formula") c.samples = 1000;
  if (name == "variance-identity" || name == "variance-comparison") c.samples = 20000;
  if (name == "variance-scaling" || name == "rarefaction") {
    c.samples = 200;
    c.t_grid = {125.0, 250.0, 500.0, 1000.0};
  }
  if (name == "exit-tail") c.samples = 1500;
  if (name == "zstar") c.samples = 800;
  if (name == "tasep-bridge") c.samples = 500;
  if (name == "transversal") c.samples = 600;
  return c;
}

inline void validate_config(const ExperimentConfig& c) {
  static const std::vector<std::string> boundaries{"equilibrium", "rarefaction", "zero-west", "zero-south",
                                                   "zero-both"};
  if (std::find(boundaries.begin(), boundaries.end(), c.boundary) == boundaries.end()) {
    throw std::invalid_argument("unknown boundary: " + c.boundary);
  }
  if (c.samples < 2) throw std::invalid_argument("samples must be at least 2");
  for (std::size_t k = 1; k < c.t_grid.size(); ++k) {
    if (!(c.t_grid[k] > c.t_grid[k - 1])) throw std::invalid_argument("t-grid must be strictly increasing");
  }
  for (double t : c.t_grid) {
    if (!(t > 0.0)) throw std::invalid_argument("t-grid values must be positive");
  }
  require_density(c.rho, "rho");
  require_density(c.lambda, "lambda");
  for (double d : c.densities) require_density(d, "density");
  for (const auto& p : c.points) {
    require_density(p.first, "point density");
    if (!(p.second > 0.0)) throw std::invalid_argument("point time must be positive");
  }
  if (c.m < 1 || c.n < 1) throw std::invalid_argument("m and n must be at least 1");
  if (c.instances < 1) throw std::invalid_argument("instances must be at least 1");
  if (c.track < 0) throw std::invalid_argument("track must be nonnegative");
  if (c.interarrivals < 1 || c.bins < 2) throw std::invalid_argument("interarrivals >= 1 and bins >= 2 required");
  if (!(c.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(c.s_fraction > 0.0 && c.s_fraction <= 1.0)) throw std::invalid_argument("s_fraction must lie in (0,1]");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
}

}  // namespace lpp
