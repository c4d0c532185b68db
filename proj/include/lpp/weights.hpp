#pragma once

// Weight arrays for the corner growth model on [0..m] x [0..n].
//
// Site (i, j) is column i, row j. omega(0,0) is always zero; sites with i = 0
// or j = 0 are boundary sites ("west" axis i = 0, "south" axis j = 0), the
// rest are interior sites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "lpp/rng.hpp"

namespace lpp {

struct Site {
  int i = 0;
  int j = 0;
  friend bool operator==(const Site&, const Site&) = default;
};

/// Exponential rates on the axes: Exp(1 - rho) on the south axis, Exp(rho) on
/// the west axis, Exp(1) in the interior.
struct Equilibrium {
  double rho = 0.5;
  friend bool operator==(const Equilibrium&, const Equilibrium&) = default;
};

/// Equilibrium(rho) axes multiplied site-wise by factors in [0, 1].
/// south[i-1] multiplies omega(i,0); west[j-1] multiplies omega(0,j).
struct Rarefaction {
  double rho = 0.5;
  std::vector<double> south;
  std::vector<double> west;
  friend bool operator==(const Rarefaction&, const Rarefaction&) = default;
};

struct ZeroWest {
  friend bool operator==(const ZeroWest&, const ZeroWest&) = default;
};
struct ZeroSouth {
  friend bool operator==(const ZeroSouth&, const ZeroSouth&) = default;
};
struct ZeroBoth {
  friend bool operator==(const ZeroBoth&, const ZeroBoth&) = default;
};

/// Explicit axis values. south[i-1] = omega(i,0), west[j-1] = omega(0,j).
struct Custom {
  std::vector<double> south;
  std::vector<double> west;
  friend bool operator==(const Custom&, const Custom&) = default;
};

using BoundaryKind = std::variant<Equilibrium, Rarefaction, ZeroWest, ZeroSouth, ZeroBoth, Custom>;

inline std::string kind_name(const BoundaryKind& kind) {
  constexpr const char* names[] = {"equilibrium", "rarefaction", "zero-west", "zero-south", "zero-both", "custom"};
  return names[kind.index()];
}

/// Density parameter of the kind, when it has one.
inline std::optional<double> kind_density(const BoundaryKind& kind) {
  if (const auto* e = std::get_if<Equilibrium>(&kind)) return e->rho;
  if (const auto* r = std::get_if<Rarefaction>(&kind)) return r->rho;
  return std::nullopt;
}

inline void require_density(double rho, const char* what) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in (0,1), got " + std::to_string(rho));
  }
}

/// Records where an array's randomness came from so that every site uniform
/// can be regenerated.
struct Provenance {
  std::uint64_t seed = 0;
  bool transposed = false;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

class WeightArray {
 public:
  /// Builds an array from row-major values (index j*(m+1)+i). Validates all
  /// invariants; throws std::invalid_argument on violation.
  WeightArray(int m, int n, std::vector<double> omega, BoundaryKind boundary,
              std::optional<Provenance> provenance = std::nullopt)
      : m_(m), n_(n), boundary_(std::move(boundary)), omega_(std::move(omega)), provenance_(provenance) {
    if (m < 0 || n < 0) throw std::invalid_argument("negative dimensions");
    if (omega_.size() != static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(n + 1)) {
      throw std::invalid_argument("weight vector size does not match (m+1)(n+1)");
    }
    if (auto rho = kind_density(boundary_)) require_density(*rho, "density");
    for (double v : omega_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("weights must be finite and nonnegative");
    }
    if (omega_[0] != 0.0) throw std::invalid_argument("omega(0,0) must be 0");
  }

  /// Array from a site function; omega(0,0) is forced to 0.
  template <class Fn>
    requires std::is_invocable_r_v<double, Fn, int, int>
  static WeightArray from_function(int m, int n, Fn&& fn, BoundaryKind boundary = Custom{}) {
    std::vector<double> omega(static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= m; ++i) {
        omega[static_cast<std::size_t>(j) * static_cast<std::size_t>(m + 1) + static_cast<std::size_t>(i)] =
            (i == 0 && j == 0) ? 0.0 : static_cast<double>(fn(i, j));
      }
    }
    if (auto* c = std::get_if<Custom>(&boundary); c && c->south.empty() && c->west.empty()) {
      for (int i = 1; i <= m; ++i) c->south.push_back(omega[static_cast<std::size_t>(i)]);
      for (int j = 1; j <= n; ++j) c->west.push_back(omega[static_cast<std::size_t>(j) * (m + 1)]);
    }
    return WeightArray(m, n, std::move(omega), std::move(boundary));
  }

  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  const BoundaryKind& boundary() const noexcept { return boundary_; }
  const std::optional<Provenance>& provenance() const noexcept { return provenance_; }
  std::span<const double> values() const noexcept { return omega_; }

  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(m_ + 1) + static_cast<std::size_t>(i);
  }
  double operator()(int i, int j) const noexcept { return omega_[index(i, j)]; }
  double at(int i, int j) const {
    if (i < 0 || j < 0 || i > m_ || j > n_) throw std::out_of_range("site outside weight array");
    return (*this)(i, j);
  }

  /// Underlying uniform of site (i, j), if the array has seed provenance.
  std::optional<double> uniform_at(int i, int j) const {
    if (!provenance_) return std::nullopt;
    const auto a = static_cast<std::uint32_t>(provenance_->transposed ? j : i);
    const auto b = static_cast<std::uint32_t>(provenance_->transposed ? i : j);
    return site_uniform(provenance_->seed, a, b);
  }

  /// Site values, dimensions and boundary kind agree. Densities compare to
  /// within a few ulps because 1 - (1 - rho) need not round back to rho.
  friend bool operator==(const WeightArray& a, const WeightArray& b) {
    if (a.m_ != b.m_ || a.n_ != b.n_ || a.omega_ != b.omega_) return false;
    if (a.boundary_.index() != b.boundary_.index()) return false;
    const auto ra = kind_density(a.boundary_);
    const auto rb = kind_density(b.boundary_);
    if (ra && std::abs(*ra - *rb) > 4.0 * std::numeric_limits<double>::epsilon()) return false;
    if (const auto* x = std::get_if<Rarefaction>(&a.boundary_)) {
      const auto& y = std::get<Rarefaction>(b.boundary_);
      return x->south == y.south && x->west == y.west;
    }
    if (const auto* x = std::get_if<Custom>(&a.boundary_)) return *x == std::get<Custom>(b.boundary_);
    return true;
  }

 private:
  int m_;
  int n_;
  BoundaryKind boundary_;
  std::vector<double> omega_;
  std::optional<Provenance> provenance_;
};

namespace detail {
inline double equilibrium_rate(int i, int j, double rho) noexcept {
  if (j == 0) return 1.0 - rho;
  if (i == 0) return rho;
  return 1.0;
}

inline std::vector<double> equilibrium_values(double rho, int m, int n, const Provenance& prov) {
  std::vector<double> omega(static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(n + 1));
  std::size_t k = 0;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= m; ++i, ++k) {
      if (i == 0 && j == 0) {
        omega[k] = 0.0;
        continue;
      }
      const auto a = static_cast<std::uint32_t>(prov.transposed ? j : i);
      const auto b = static_cast<std::uint32_t>(prov.transposed ? i : j);
      omega[k] = exponential_from_uniform(site_uniform(prov.seed, a, b), equilibrium_rate(i, j, rho));
    }
  }
  return omega;
}
}  // namespace detail

/// Independent weights with the equilibrium laws, generated by inverse CDF
/// from per-site counter-based uniforms keyed by (seed, i, j).
inline WeightArray sample_equilibrium(double rho, int m, int n, std::uint64_t seed) {
  require_density(rho, "density");
  if (m < 1 || n < 1) throw std::invalid_argument("dimensions must be at least 1");
  const Provenance prov{seed, false};
  return WeightArray(m, n, detail::equilibrium_values(rho, m, n, prov), Equilibrium{rho}, prov);
}

/// Recouples an equilibrium array to density lambda: south weights scale by
/// (1-rho)/(1-lambda), west weights by rho/lambda, interior unchanged. When the
/// array carries provenance the result is regenerated from the shared site
/// uniforms, which is the same rescaling without accumulated rounding.
inline WeightArray couple_density(const WeightArray& w, double lambda) {
  const auto* eq = std::get_if<Equilibrium>(&w.boundary());
  if (!eq) throw std::invalid_argument("couple_density requires an equilibrium array");
  require_density(lambda, "target density");
  if (lambda == eq->rho) return w;
  if (const auto& prov = w.provenance()) {
    return WeightArray(w.m(), w.n(), detail::equilibrium_values(lambda, w.m(), w.n(), *prov), Equilibrium{lambda},
                       *prov);
  }
  const double south = (1.0 - eq->rho) / (1.0 - lambda);
  const double west = eq->rho / lambda;
  std::vector<double> omega(w.values().begin(), w.values().end());
  for (int i = 1; i <= w.m(); ++i) omega[w.index(i, 0)] *= south;
  for (int j = 1; j <= w.n(); ++j) omega[w.index(0, j)] *= west;
  return WeightArray(w.m(), w.n(), std::move(omega), Equilibrium{lambda});
}

/// Multipliers that turn an Equilibrium(rho) array into the two-density fan
/// boundary: south ~ Exp(1 - lambda_right), west ~ Exp(lambda_left), coupled
/// through the shared uniforms. Requires lambda_left >= rho >= lambda_right.
inline Rarefaction fan_multipliers(double rho, double lambda_left, double lambda_right, int m, int n) {
  require_density(rho, "density");
  require_density(lambda_left, "left density");
  require_density(lambda_right, "right density");
  if (!(lambda_left >= rho && rho >= lambda_right)) {
    throw std::invalid_argument("fan requires lambda_left >= rho >= lambda_right");
  }
  return Rarefaction{rho, std::vector<double>(static_cast<std::size_t>(m), (1.0 - rho) / (1.0 - lambda_right)),
                     std::vector<double>(static_cast<std::size_t>(n), rho / lambda_left)};
}

/// Replaces or shrinks the axis weights. Interior weights are untouched.
inline WeightArray apply_boundary(const WeightArray& w, BoundaryKind kind) {
  std::vector<double> omega(w.values().begin(), w.values().end());
  const int m = w.m();
  const int n = w.n();
  auto set_south = [&](auto&& fn) {
    for (int i = 1; i <= m; ++i) omega[w.index(i, 0)] = fn(i);
  };
  auto set_west = [&](auto&& fn) {
    for (int j = 1; j <= n; ++j) omega[w.index(0, j)] = fn(j);
  };
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Equilibrium>) {
          throw std::invalid_argument("apply_boundary: use sample_equilibrium or couple_density for equilibrium");
        } else if constexpr (std::is_same_v<K, Rarefaction>) {
          require_density(k.rho, "density");
          if (k.south.size() != static_cast<std::size_t>(m) || k.west.size() != static_cast<std::size_t>(n)) {
            throw std::invalid_argument("rarefaction multiplier lengths do not match dimensions");
          }
          auto in_unit = [](double f) { return f >= 0.0 && f <= 1.0; };
          if (!std::all_of(k.south.begin(), k.south.end(), in_unit) ||
              !std::all_of(k.west.begin(), k.west.end(), in_unit)) {
            throw std::invalid_argument("rarefaction multipliers must lie in [0,1]");
          }
          set_south([&](int i) { return k.south[static_cast<std::size_t>(i - 1)] * w(i, 0); });
          set_west([&](int j) { return k.west[static_cast<std::size_t>(j - 1)] * w(0, j); });
        } else if constexpr (std::is_same_v<K, ZeroWest>) {
          set_west([](int) { return 0.0; });
        } else if constexpr (std::is_same_v<K, ZeroSouth>) {
          set_south([](int) { return 0.0; });
        } else if constexpr (std::is_same_v<K, ZeroBoth>) {
          set_west([](int) { return 0.0; });
          set_south([](int) { return 0.0; });
        } else {
          if (k.south.size() != static_cast<std::size_t>(m) || k.west.size() != static_cast<std::size_t>(n)) {
            throw std::invalid_argument("custom boundary lengths do not match dimensions");
          }
          set_south([&](int i) { return k.south[static_cast<std::size_t>(i - 1)]; });
          set_west([&](int j) { return k.west[static_cast<std::size_t>(j - 1)]; });
        }
      },
      kind);
  return WeightArray(m, n, std::move(omega), std::move(kind), w.provenance());
}

/// omega'(i,j) = omega(j,i). Equilibrium(rho) becomes Equilibrium(1 - rho).
inline WeightArray transpose(const WeightArray& w) {
  const int m = w.n();
  const int n = w.m();
  std::vector<double> omega(static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= m; ++i) omega[static_cast<std::size_t>(j) * (m + 1) + i] = w(j, i);
  }
  BoundaryKind kind = std::visit(
      [](const auto& k) -> BoundaryKind {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Equilibrium>) {
          return Equilibrium{1.0 - k.rho};
        } else if constexpr (std::is_same_v<K, Rarefaction>) {
          return Rarefaction{1.0 - k.rho, k.west, k.south};
        } else if constexpr (std::is_same_v<K, ZeroWest>) {
          return ZeroSouth{};
        } else if constexpr (std::is_same_v<K, ZeroSouth>) {
          return ZeroWest{};
        } else if constexpr (std::is_same_v<K, ZeroBoth>) {
          return ZeroBoth{};
        } else {
          return Custom{k.west, k.south};
        }
      },
      w.boundary());
  std::optional<Provenance> prov = w.provenance();
  if (prov) prov->transposed = !prov->transposed;
  return WeightArray(m, n, std::move(omega), std::move(kind), prov);
}

}  // namespace lpp
