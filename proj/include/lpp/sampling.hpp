#pragma once

// Per-sample building blocks for the experiments: seeded last-passage
// summaries in full-field or path-free mode, and down-right paths with the
// increments collected along them.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpp/interface.hpp"

namespace lpp {

/// Seed of sample k of sub-experiment `sub` of experiment `id`.
inline std::uint64_t sample_seed(std::uint64_t master, std::uint32_t id, std::uint32_t sub, std::uint64_t k) {
  return derive_seed(master, id * 1000u + sub, k);
}

struct EquilibriumSample {
  double corner = 0.0;
  int exit = 0;
  double axis = 0.0;         // U_Z
  double south_total = 0.0;  // G(m, 0)
  double west_total = 0.0;   // G(0, n)

  double axis_plus() const noexcept { return exit > 0 ? axis : 0.0; }   // U_{Z+}
  double axis_minus() const noexcept { return exit < 0 ? axis : 0.0; }  // U_{-Z-}
};

/// One equilibrium instance. Streaming mode regenerates site weights on the
/// fly and never stores the field; both modes see identical weights.
inline EquilibriumSample sample_equilibrium_passage(double rho, int m, int n, std::uint64_t seed, bool streaming,
                                                    TiePolicy tie = TiePolicy::kRightmost) {
  if (streaming) {
    auto omega = [rho, seed](int i, int j) {
      return exponential_from_uniform(site_uniform(seed, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)),
                                      detail::equilibrium_rate(i, j, rho));
    };
    const PassageSummary s = summarize_streaming(m, n, omega, tie);
    return {s.corner, s.exit, s.axis, s.south_total, s.west_total};
  }
  const LppField f = compute_field(sample_equilibrium(rho, m, n, seed));
  const int z = backtrack_path(f, tie).exit;
  return {f.corner(), z, axis_weight_U(f, z), f.G(m, 0), f.G(0, n)};
}

/// Boundary kind by name, sized for an m x n array built on Equilibrium(rho).
inline BoundaryKind boundary_from_name(const std::string& name, double rho, int m, int n, double lambda_left = 0.7,
                                       double lambda_right = 0.3) {
  if (name == "equilibrium") return Equilibrium{rho};
  if (name == "rarefaction") return fan_multipliers(rho, lambda_left, lambda_right, m, n);
  if (name == "zero-west") return ZeroWest{};
  if (name == "zero-south") return ZeroSouth{};
  if (name == "zero-both") return ZeroBoth{};
  throw std::invalid_argument("unknown boundary: " + name);
}

/// Equilibrium sample with the named boundary applied.
inline WeightArray sample_with_boundary(const std::string& name, double rho, int m, int n, std::uint64_t seed,
                                        double lambda_left = 0.7, double lambda_right = 0.3) {
  WeightArray w = sample_equilibrium(rho, m, n, seed);
  if (name == "equilibrium") return w;
  return apply_boundary(w, boundary_from_name(name, rho, m, n, lambda_left, lambda_right));
}

// ---------------------------------------------------------------------------
// Down-right paths clipped to the rectangle: from (0, n) to (m, 0) with steps
// (1, 0) and (0, -1).

struct DownRightPath {
  std::vector<Site> sites;
};

inline void validate_down_right(const DownRightPath& p, int m, int n) {
  if (p.sites.empty() || !(p.sites.front() == Site{0, n}) || !(p.sites.back() == Site{m, 0})) {
    throw std::invalid_argument("down-right path must run from (0,n) to (m,0)");
  }
  for (std::size_t k = 1; k < p.sites.size(); ++k) {
    const int di = p.sites[k].i - p.sites[k - 1].i;
    const int dj = p.sites[k].j - p.sites[k - 1].j;
    if (!((di == 1 && dj == 0) || (di == 0 && dj == -1))) throw std::invalid_argument("invalid down-right step");
  }
}

/// (0,n) -> (m,n) -> (m,0).
inline DownRightPath north_east_path(int m, int n) {
  DownRightPath p;
  for (int i = 0; i <= m; ++i) p.sites.push_back({i, n});
  for (int j = n - 1; j >= 0; --j) p.sites.push_back({m, j});
  return p;
}

/// Alternating right and down steps from (0,n); the remainder runs along
/// whichever edge is left.
inline DownRightPath staircase_path(int m, int n) {
  DownRightPath p;
  Site s{0, n};
  p.sites.push_back(s);
  bool right = true;
  while (!(s == Site{m, 0})) {
    if ((right && s.i < m) || s.j == 0) {
      ++s.i;
    } else {
      --s.j;
    }
    right = !right;
    p.sites.push_back(s);
  }
  return p;
}

inline DownRightPath parse_down_right(const std::string& name, int m, int n) {
  if (name == "north-east") return north_east_path(m, n);
  if (name == "staircase") return staircase_path(m, n);
  throw std::invalid_argument("unknown down-right path: " + name);
}

struct PathIncrements {
  std::vector<double> i_values;  // I increments on right steps
  std::vector<double> j_values;  // J increments on down steps
  std::vector<double> standardized;  // all increments in path order, (x - mean) / sd under the stated laws
  std::vector<double> x_values;  // X over the enclosed set
};

/// Increments along the path and interior minima over the enclosed set
/// {(i,j): i < p, j < q for some (p,q) on the path}.
inline PathIncrements collect_increments(const LppField& f, const DownRightPath& p, double rho) {
  validate_down_right(p, f.m(), f.n());
  PathIncrements out;
  for (std::size_t k = 1; k < p.sites.size(); ++k) {
    const Site a = p.sites[k - 1];
    const Site b = p.sites[k];
    if (b.i == a.i + 1) {
      const double v = f.I(b.i, b.j);
      out.i_values.push_back(v);
      out.standardized.push_back(v * (1.0 - rho) - 1.0);
    } else {
      const double v = f.J(a.i, a.j);
      out.j_values.push_back(v);
      out.standardized.push_back(v * rho - 1.0);
    }
  }
  // Column i is enclosed up to height max{q : (p,q) on path, p > i}.
  std::vector<int> height(static_cast<std::size_t>(f.m()), 0);
  for (const Site& s : p.sites) {
    for (int i = 0; i < s.i && i < f.m(); ++i) height[static_cast<std::size_t>(i)] = std::max(height[static_cast<std::size_t>(i)], s.j);
  }
  for (int i = 0; i < f.m(); ++i) {
    for (int j = 0; j < height[static_cast<std::size_t>(i)] && j < f.n(); ++j) out.x_values.push_back(f.X(i, j));
  }
  return out;
}

}  // namespace lpp
