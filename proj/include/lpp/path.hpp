#pragma once

// Maximal up-right paths, exit points and the axis/interior decomposition
// G(m,n) = U_Z + A_Z.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpp/field.hpp"

namespace lpp {

/// Resolution of exact ties between the two predecessors of a site.
/// kRightmost keeps the path low and to the right: walking back from (m,n)
/// it prefers (i, j-1). kLeftmost prefers (i-1, j).
enum class TiePolicy { kRightmost, kLeftmost };

inline const char* tie_policy_name(TiePolicy p) { return p == TiePolicy::kRightmost ? "rightmost" : "leftmost"; }

inline TiePolicy parse_tie_policy(const std::string& s) {
  if (s == "rightmost") return TiePolicy::kRightmost;
  if (s == "leftmost") return TiePolicy::kLeftmost;
  throw std::invalid_argument("unknown tie policy: " + s);
}

struct LatticePath {
  std::vector<Site> sites;  // (0,0) ... (m,n), forward order
  TiePolicy policy = TiePolicy::kRightmost;
  int exit = 0;             // Z: +k exits at (k,0), -k at (0,k)
  double weight = 0.0;      // sum of omega over the sites
  int ties = 0;             // exact predecessor ties resolved by the policy
};

/// Exit point of a forward path: signed index of its last axis site.
inline int exit_point_of(const std::vector<Site>& sites) {
  if (sites.size() < 2) return 0;
  if (sites[1].j == 0) {
    int z = 0;
    for (const Site& s : sites) {
      if (s.j != 0) break;
      z = s.i;
    }
    return z;
  }
  int z = 0;
  for (const Site& s : sites) {
    if (s.i != 0) break;
    z = s.j;
  }
  return -z;
}

/// Walks from (m,n) to (0,0) through maximizing predecessors of the
/// recurrence. Ties are compared exactly and resolved by `policy`.
inline LatticePath backtrack_path(const LppField& f, TiePolicy policy = TiePolicy::kRightmost) {
  LatticePath p;
  p.policy = policy;
  const WeightArray& w = f.weights();
  int i = f.m();
  int j = f.n();
  std::vector<Site> rev;
  rev.reserve(static_cast<std::size_t>(f.m() + f.n() + 1));
  while (true) {
    rev.push_back({i, j});
    p.weight += w(i, j);
    if (i == 0 && j == 0) break;
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double left = f.G(i - 1, j);
      const double below = f.G(i, j - 1);
      if (left > below) {
        --i;
      } else if (below > left) {
        --j;
      } else {
        ++p.ties;
        if (policy == TiePolicy::kRightmost) {
          --j;
        } else {
          --i;
        }
      }
    }
  }
  p.sites.assign(rev.rbegin(), rev.rend());
  p.exit = exit_point_of(p.sites);
  return p;
}

struct RowCoordinates {
  int rightmost = 0;  // largest i with (i, l) on the path
  int leftmost = 0;   // smallest i with (i, l) on the path
};

/// Extent of the path on row l. Paired with kRightmost it gives the
/// right-most coordinate of the right-most maximal path; with kLeftmost the
/// left-most coordinate of the left-most one.
inline RowCoordinates path_row_coordinates(const LatticePath& p, int l) {
  const int n = p.sites.empty() ? -1 : p.sites.back().j;
  if (l < 0 || l > n) throw std::out_of_range("row outside the path's range");
  RowCoordinates rc{-1, -1};
  for (const Site& s : p.sites) {
    if (s.j != l) continue;
    if (rc.leftmost < 0) rc.leftmost = s.i;
    rc.rightmost = s.i;
  }
  return rc;
}

struct Decomposition {
  int exit = 0;
  double axis = 0.0;      // U_Z
  double interior = 0.0;  // A_Z
  double total = 0.0;     // G(m, n)
};

/// Exit point from the maximal path and the split of G(m,n) into the weight
/// collected on the axes and in the interior.
inline Decomposition decompose(const LppField& f, TiePolicy policy = TiePolicy::kRightmost) {
  if (f.m() < 1 || f.n() < 1) throw std::invalid_argument("decomposition needs m, n >= 1");
  const int z = backtrack_path(f, policy).exit;
  return {z, axis_weight_U(f, z), interior_passage_A(f.weights(), z), f.corner()};
}

/// Path-free summary of a last-passage instance: G(m,n), the exit point and
/// its decomposition, obtained as the argmax over z of U_z + A_z with O(m)
/// memory besides the weights themselves.
struct PassageSummary {
  double corner = 0.0;
  int exit = 0;
  double axis = 0.0;
  double interior = 0.0;
  double south_total = 0.0;  // G(m, 0)
  double west_total = 0.0;   // G(0, n)
};

template <class WeightFn>
PassageSummary summarize_streaming(int m, int n, WeightFn&& omega, TiePolicy policy = TiePolicy::kRightmost) {
  const std::vector<double> a = interior_passage_all(m, n, omega);
  std::vector<double> south(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<double> west(static_cast<std::size_t>(n + 1), 0.0);
  for (int i = 1; i <= m; ++i) south[static_cast<std::size_t>(i)] = south[static_cast<std::size_t>(i - 1)] + omega(i, 0);
  for (int j = 1; j <= n; ++j) west[static_cast<std::size_t>(j)] = west[static_cast<std::size_t>(j - 1)] + omega(0, j);
  PassageSummary s;
  s.south_total = south.back();
  s.west_total = west.back();
  bool first = true;
  auto consider = [&](int z) {
    const double u = z > 0 ? south[static_cast<std::size_t>(z)] : west[static_cast<std::size_t>(-z)];
    const double av = a[static_cast<std::size_t>(z + n)];
    const double total = u + av;
    const bool better = first || total > s.corner || (total == s.corner && policy == TiePolicy::kRightmost);
    if (better) {
      s.corner = total;
      s.exit = z;
      s.axis = u;
      s.interior = av;
      first = false;
    }
  };
  // Ascending z: on exact ties kRightmost keeps the largest z, kLeftmost the smallest.
  for (int z = -n; z <= -1; ++z) consider(z);
  for (int z = 1; z <= m; ++z) consider(z);
  return s;
}

inline PassageSummary summarize_streaming(const WeightArray& w, TiePolicy policy = TiePolicy::kRightmost) {
  return summarize_streaming(w.m(), w.n(), [&w](int i, int j) { return w(i, j); }, policy);
}

// ---------------------------------------------------------------------------
// Independent oracle: G(m,n) as the maximum over all up-right paths.

inline constexpr int kBruteForceMaxSteps = 16;

inline double brute_force_passage(const WeightArray& w) {
  const int m = w.m();
  const int n = w.n();
  if (m + n > kBruteForceMaxSteps) throw std::invalid_argument("grid too large for path enumeration");
  const int steps = m + n;
  double best = -1.0;
  // Bit k of `mask` set means step k is vertical; enumerate masks with n bits.
  for (unsigned mask = 0; mask < (1u << steps); ++mask) {
    if (__builtin_popcount(mask) != n) continue;
    int i = 0;
    int j = 0;
    double sum = w(0, 0);
    for (int k = 0; k < steps; ++k) {
      if (mask & (1u << k)) {
        ++j;
      } else {
        ++i;
      }
      sum += w(i, j);
    }
    if (sum > best) best = sum;
  }
  return best;
}

}  // namespace lpp
