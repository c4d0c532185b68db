#pragma once

// Last-passage values G over a weight array, with increments
//   I(i,j) = G(i,j) - G(i-1,j)   (i >= 1),
//   J(i,j) = G(i,j) - G(i,j-1)   (j >= 1),
//   X(i-1,j-1) = min(I(i,j-1), J(i-1,j))   (i, j >= 1).

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpp/weights.hpp"

namespace lpp {

class LppField {
 public:
  explicit LppField(std::shared_ptr<const WeightArray> weights) : weights_(std::move(weights)) {
    if (!weights_) throw std::invalid_argument("null weight array");
    const int m = weights_->m();
    const int n = weights_->n();
    const std::size_t cells = static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(n + 1);
    g_.assign(cells, 0.0);
    i_.assign(cells, 0.0);
    j_.assign(cells, 0.0);
    x_.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(n), 0.0);
    const WeightArray& w = *weights_;
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= m; ++i) {
        const double left = i > 0 ? g_[idx(i - 1, j)] : 0.0;
        const double below = j > 0 ? g_[idx(i, j - 1)] : 0.0;
        const double g = std::max(left, below) + w(i, j);
        g_[idx(i, j)] = g;
        if (i > 0) i_[idx(i, j)] = g - left;
        if (j > 0) j_[idx(i, j)] = g - below;
        if (i > 0 && j > 0) x_[xidx(i - 1, j - 1)] = std::min(i_[idx(i, j - 1)], j_[idx(i - 1, j)]);
      }
    }
  }

  int m() const noexcept { return weights_->m(); }
  int n() const noexcept { return weights_->n(); }
  const WeightArray& weights() const noexcept { return *weights_; }
  const std::shared_ptr<const WeightArray>& weights_ptr() const noexcept { return weights_; }

  double G(int i, int j) const noexcept { return g_[idx(i, j)]; }
  /// Horizontal increment, defined for i >= 1.
  double I(int i, int j) const noexcept { return i_[idx(i, j)]; }
  /// Vertical increment, defined for j >= 1.
  double J(int i, int j) const noexcept { return j_[idx(i, j)]; }
  /// Interior minimum on [0..m-1] x [0..n-1].
  double X(int i, int j) const noexcept { return x_[xidx(i, j)]; }
  double corner() const noexcept { return G(m(), n()); }

  bool contains(int i, int j) const noexcept { return i >= 0 && j >= 0 && i <= m() && j <= n(); }

 private:
  std::size_t idx(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(weights_->m() + 1) + static_cast<std::size_t>(i);
  }
  std::size_t xidx(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(weights_->m()) + static_cast<std::size_t>(i);
  }

  std::shared_ptr<const WeightArray> weights_;
  std::vector<double> g_, i_, j_, x_;
};

inline LppField compute_field(std::shared_ptr<const WeightArray> w) { return LppField(std::move(w)); }
inline LppField compute_field(const WeightArray& w) { return LppField(std::make_shared<const WeightArray>(w)); }
inline LppField compute_field(WeightArray&& w) { return LppField(std::make_shared<const WeightArray>(std::move(w))); }

// ---------------------------------------------------------------------------
// Axis and interior passage times.

/// Weight collected along an axis up to signed position x: G(x,0) for x >= 0,
/// G(0,-x) for x <= 0.
inline double axis_weight_U(const LppField& f, int x) {
  if (x < -f.n() || x > f.m()) throw std::out_of_range("axis position out of range");
  return x >= 0 ? f.G(x, 0) : f.G(0, -x);
}

/// Maximal interior weight from (max(x+,1), max(x-,1)) to (m, n), counting
/// the start site and ignoring all axis weights.
inline double interior_passage_A(const WeightArray& w, int x, int m, int n) {
  const int i0 = std::max(x, 1);
  const int j0 = std::max(-x, 1);
  if (m > w.m() || n > w.n()) throw std::out_of_range("rectangle exceeds weight array");
  if (m < i0 || n < j0) throw std::invalid_argument("degenerate rectangle for interior passage");
  const int width = m - i0 + 1;
  std::vector<double> row(static_cast<std::size_t>(width), 0.0);
  for (int j = j0; j <= n; ++j) {
    double left = 0.0;
    for (int c = 0; c < width; ++c) {
      const double v = std::max(left, row[static_cast<std::size_t>(c)]) + w(i0 + c, j);
      row[static_cast<std::size_t>(c)] = v;
      left = v;
    }
  }
  return row.back();
}

inline double interior_passage_A(const WeightArray& w, int x) { return interior_passage_A(w, x, w.m(), w.n()); }

/// All interior passage times to (m, n) at once, by one reverse sweep over
/// the interior with O(m) memory. Entry x + n holds A_x for x in [-n, m].
template <class WeightFn>
std::vector<double> interior_passage_all(int m, int n, WeightFn&& omega) {
  if (m < 1 || n < 1) throw std::invalid_argument("interior passage needs m, n >= 1");
  std::vector<double> a(static_cast<std::size_t>(m + n + 1), 0.0);
  // row[i] holds R(i, j): best interior path from (i, j) to (m, n), i in [1, m].
  std::vector<double> row(static_cast<std::size_t>(m + 2), 0.0);
  for (int j = n; j >= 1; --j) {
    double right = 0.0;
    for (int i = m; i >= 1; --i) {
      double best = 0.0;
      if (i < m && j < n) {
        best = std::max(right, row[static_cast<std::size_t>(i)]);
      } else if (i < m) {
        best = right;
      } else if (j < n) {
        best = row[static_cast<std::size_t>(i)];
      }
      const double v = best + omega(i, j);
      row[static_cast<std::size_t>(i)] = v;
      right = v;
    }
    a[static_cast<std::size_t>(n - j)] = row[1];  // x = -j
  }
  for (int i = 1; i <= m; ++i) a[static_cast<std::size_t>(n + i)] = row[static_cast<std::size_t>(i)];
  a[static_cast<std::size_t>(n)] = a[static_cast<std::size_t>(n + 1)];
  return a;
}

inline std::vector<double> interior_passage_all(const WeightArray& w) {
  return interior_passage_all(w.m(), w.n(), [&w](int i, int j) { return w(i, j); });
}

// ---------------------------------------------------------------------------
// Characteristic direction and mean.

struct Dimensions {
  int m = 0;
  int n = 0;
  friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

/// Floor that treats values within 1e-9 (relative) below an integer as that
/// integer: decimal densities such as 0.3 give (1-rho)^2 t = 489.99999999999994
/// at t = 1000, whose exact value is 490.
inline int robust_floor(double x) {
  return static_cast<int>(std::floor(x + 1e-9 * std::max(1.0, std::abs(x))));
}

/// (floor((1-rho)^2 t), floor(rho^2 t)).
inline Dimensions characteristic_point(double rho, double t) {
  require_density(rho, "density");
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  const Dimensions d{robust_floor((1.0 - rho) * (1.0 - rho) * t), robust_floor(rho * rho * t)};
  if (d.m < 1 || d.n < 1) throw std::invalid_argument("characteristic point is degenerate at this time");
  return d;
}

/// E G at the characteristic point: m/(1-rho) + n/rho.
inline double expected_passage(double rho, double t) {
  const Dimensions d = characteristic_point(rho, t);
  return d.m / (1.0 - rho) + d.n / rho;
}

// ---------------------------------------------------------------------------
// Occupied region {(i,j) : G(i,j) <= t}. G is nondecreasing in j, so the region
// is a staircase stored as one column height per i.

class OccupiedRegion {
 public:
  OccupiedRegion(const LppField& f, double t) : heights_(static_cast<std::size_t>(f.m() + 1), 0) {
    if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
    for (int i = 0; i <= f.m(); ++i) {
      int h = 0;
      while (h <= f.n() && f.G(i, h) <= t) ++h;
      heights_[static_cast<std::size_t>(i)] = h;
    }
  }

  /// Number of occupied sites in column i.
  int height(int i) const { return heights_.at(static_cast<std::size_t>(i)); }
  bool contains(int i, int j) const {
    return i >= 0 && j >= 0 && static_cast<std::size_t>(i) < heights_.size() && j < heights_[static_cast<std::size_t>(i)];
  }
  std::size_t size() const {
    std::size_t s = 0;
    for (int h : heights_) s += static_cast<std::size_t>(h);
    return s;
  }
  std::vector<Site> sites() const {
    std::vector<Site> out;
    for (std::size_t i = 0; i < heights_.size(); ++i) {
      for (int j = 0; j < heights_[i]; ++j) out.push_back({static_cast<int>(i), j});
    }
    return out;
  }
  const std::vector<int>& heights() const noexcept { return heights_; }

 private:
  std::vector<int> heights_;
};

inline OccupiedRegion occupied_region(const LppField& f, double t) { return OccupiedRegion(f, t); }

// ---------------------------------------------------------------------------
// Monotone coupling of increments.

struct CouplingViolation {
  Site site;
  char increment = 'I';  // 'I' or 'J'
  double value = 0.0;
  double coupled_value = 0.0;
};

/// For arrays with omega(0,j) >= coupled(0,j), omega(i,0) <= coupled(i,0) and
/// equal interiors, every increment satisfies I <= I~ and J >= J~. Returns the
/// first violating site, if any. Throws when the inputs do not satisfy the
/// hypothesis. Increments are differences of rounded G values, so a
/// comparison fails only when it is off by more than `tolerance`.
inline std::optional<CouplingViolation> check_monotone_coupling(const WeightArray& w, const WeightArray& coupled,
                                                                double tolerance = 1e-9) {
  if (w.m() != coupled.m() || w.n() != coupled.n()) throw std::invalid_argument("dimension mismatch");
  for (int j = 1; j <= w.n(); ++j) {
    if (w(0, j) < coupled(0, j)) throw std::invalid_argument("hypothesis violated on the west axis");
  }
  for (int i = 1; i <= w.m(); ++i) {
    if (w(i, 0) > coupled(i, 0)) throw std::invalid_argument("hypothesis violated on the south axis");
  }
  for (int j = 1; j <= w.n(); ++j) {
    for (int i = 1; i <= w.m(); ++i) {
      if (w(i, j) != coupled(i, j)) throw std::invalid_argument("interior weights differ");
    }
  }
  const LppField f = compute_field(w);
  const LppField g = compute_field(coupled);
  for (int j = 0; j <= w.n(); ++j) {
    for (int i = 0; i <= w.m(); ++i) {
      if (i >= 1 && f.I(i, j) > g.I(i, j) + tolerance) return CouplingViolation{{i, j}, 'I', f.I(i, j), g.I(i, j)};
      if (j >= 1 && f.J(i, j) < g.J(i, j) - tolerance) return CouplingViolation{{i, j}, 'J', f.J(i, j), g.J(i, j)};
    }
  }
  return std::nullopt;
}

}  // namespace lpp
