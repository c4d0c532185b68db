#pragma once

// Competition interface: the up-right path from (0,0) that always steps to
// the neighbour with the smaller G value, stopped at the edge of the
// rectangle. Also the reversed process built from boundary increments and
// interior minima, and the duality between the two.

#include <algorithm>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "lpp/path.hpp"

namespace lpp {

enum class InterfaceStop { kEast, kNorth };  // reached i = m, or j = n

struct CompetitionInterface {
  std::vector<Site> sites;  // phi_0 = (0,0), phi_1, ...
  InterfaceStop stop = InterfaceStop::kEast;
  int m = 0;
  int n = 0;
  // v(n): first i with (i, n) on the interface; w(m): first j with (m, j).
  // When never hit the value is the sentinel m+1 (resp. n+1) and the flag is false.
  int v = 0;
  bool v_hit = false;
  int w = 0;
  bool w_hit = false;
  int degenerate_steps = 0;  // steps where the two G values were equal

  /// [m - v(n)]^+ - [n - w(m)]^+
  int z_star() const noexcept {
    const int east = v_hit ? std::max(m - v, 0) : 0;
    const int north = w_hit ? std::max(n - w, 0) : 0;
    return east - north;
  }
};

/// Ties step (1,0) and are counted in degenerate_steps.
inline CompetitionInterface build_interface(const LppField& f) {
  CompetitionInterface ci;
  ci.m = f.m();
  ci.n = f.n();
  ci.v = ci.m + 1;
  ci.w = ci.n + 1;
  Site s{0, 0};
  ci.sites.push_back(s);
  auto record = [&](Site p) {
    if (p.j == ci.n && !ci.v_hit) {
      ci.v = p.i;
      ci.v_hit = true;
    }
    if (p.i == ci.m && !ci.w_hit) {
      ci.w = p.j;
      ci.w_hit = true;
    }
  };
  record(s);
  while (s.i < ci.m && s.j < ci.n) {
    const double east = f.G(s.i + 1, s.j);
    const double north = f.G(s.i, s.j + 1);
    if (east == north) ++ci.degenerate_steps;
    if (east <= north) {
      ++s.i;
    } else {
      ++s.j;
    }
    ci.sites.push_back(s);
    record(s);
  }
  ci.stop = s.i == ci.m ? InterfaceStop::kEast : InterfaceStop::kNorth;
  return ci;
}

inline int z_star_of(const LppField& f) { return build_interface(f).z_star(); }

struct ReversedProcess {
  std::shared_ptr<const WeightArray> weights;
  LppField field;
};

/// omega*(i,0) = I(m-i+1, n), omega*(0,j) = J(m, n-j+1),
/// omega*(i,j) = X(m-i, n-j); recomputing the recurrence on omega* gives
/// G*(i,j) = G(m,n) - G(m-i, n-j).
inline ReversedProcess reverse_process(const LppField& f) {
  const int m = f.m();
  const int n = f.n();
  if (m < 1 || n < 1) throw std::invalid_argument("reversal needs m, n >= 1");
  std::vector<double> omega(static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(n + 1), 0.0);
  auto at = [&](int i, int j) -> double& {
    return omega[static_cast<std::size_t>(j) * static_cast<std::size_t>(m + 1) + static_cast<std::size_t>(i)];
  };
  for (int i = 1; i <= m; ++i) at(i, 0) = f.I(m - i + 1, n);
  for (int j = 1; j <= n; ++j) at(0, j) = f.J(m, n - j + 1);
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= m; ++i) at(i, j) = f.X(m - i, n - j);
  }
  // Equilibrium input yields an equilibrium-distributed output; the values no
  // longer derive from a seed.
  BoundaryKind kind = Custom{};
  if (const auto* eq = std::get_if<Equilibrium>(&f.weights().boundary())) {
    kind = *eq;
  } else {
    Custom c;
    for (int i = 1; i <= m; ++i) c.south.push_back(at(i, 0));
    for (int j = 1; j <= n; ++j) c.west.push_back(at(0, j));
    kind = std::move(c);
  }
  auto w = std::make_shared<const WeightArray>(m, n, std::move(omega), std::move(kind));
  LppField rf(w);
  return {w, std::move(rf)};
}

struct DualityVerdict {
  bool holds = true;
  bool ambiguous = false;    // ties were resolved by policy in the path or the interface
  int checked = 0;           // number of k values compared
  int first_mismatch = -1;   // k of the first disagreement
};

/// phi*_k = (m,n) - pihat_{m+n-k} for 0 <= k <= m + n - |Z|, where phi* is the
/// interface of the reversed process and pihat the maximal path.
inline DualityVerdict check_reversal_duality(const LppField& f, TiePolicy policy = TiePolicy::kRightmost) {
  const LatticePath path = backtrack_path(f, policy);
  const ReversedProcess rev = reverse_process(f);
  const CompetitionInterface phi = build_interface(rev.field);
  DualityVerdict v;
  v.ambiguous = path.ties > 0 || phi.degenerate_steps > 0;
  const int m = f.m();
  const int n = f.n();
  const int last = m + n - std::abs(path.exit);
  for (int k = 0; k <= last; ++k) {
    ++v.checked;
    const Site expected{m - path.sites[static_cast<std::size_t>(m + n - k)].i,
                        n - path.sites[static_cast<std::size_t>(m + n - k)].j};
    if (static_cast<std::size_t>(k) >= phi.sites.size() || !(phi.sites[static_cast<std::size_t>(k)] == expected)) {
      v.holds = false;
      v.first_mismatch = k;
      break;
    }
  }
  return v;
}

}  // namespace lpp
