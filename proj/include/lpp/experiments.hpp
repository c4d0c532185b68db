#pragma once

// Monte Carlo experiments. Each returns a report whose verdicts can be
// rechecked from the stored numbers. Samples are generated in parallel from
// per-sample derived seeds and reduced in index order, so every report is a
// deterministic function of its configuration.

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "lpp/experiment_config.hpp"
#include "lpp/parallel.hpp"
#include "lpp/report.hpp"
#include "lpp/sampling.hpp"
#include "lpp/stats.hpp"
#include "lpp/tasep.hpp"

namespace lpp {

enum class ExperimentId : std::uint32_t {
  kOracle = 1,
  kStructural = 2,
  kBurke = 3,
  kMeanFormula = 4,
  kVarianceIdentity = 5,
  kVarianceScaling = 6,
  kExitTail = 7,
  kZStar = 8,
  kTasepBridge = 9,
  kRarefaction = 10,
  kTransversal = 11,
  kVarianceComparison = 12,
  kZeroedBounds = 13,
};

namespace detail {

inline std::uint64_t seed_for(const ExperimentConfig& c, ExperimentId id, std::uint32_t sub, std::uint64_t k) {
  return sample_seed(c.seed, static_cast<std::uint32_t>(id), sub, k);
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ' ';
    s += format_double(v[k]);
  }
  return s;
}

inline void echo_common(EstimatorReport& r, const ExperimentConfig& c) {
  r.experiment = c.name;
  r.set("seed", std::to_string(c.seed));
  r.set("level", c.tol.level);
}

inline bool use_streaming(const ExperimentConfig& c, double t) { return t > c.streaming_above; }

/// Bonferroni-split level for a family of k tests.
inline double family_level(const ExperimentConfig& c, std::size_t k) {
  return c.tol.level / static_cast<double>(std::max<std::size_t>(k, 1));
}

inline double t_two_thirds(double t) { return std::cbrt(t * t); }

struct TailSummary {
  std::vector<stats::Proportion> p;
  std::vector<double> weight;
  double ratio = 0.0;   // max weighted lower bound over min weighted upper bound
  double growth = 0.0;  // max over a < a' of weighted lower(a') / weighted upper(a)
  std::size_t informative = 0;
};

/// Tail frequencies hits[k]/trials weighted by weight[k]; the ratio compares
/// the largest weighted Wilson lower bound with the smallest weighted upper
/// bound, so a flat weighted tail passes up to binomial error. Cells without
/// events carry only an upper bound and are left out of the ratio; with
/// fewer than two informative cells the ratio is infinite.
inline TailSummary weighted_tails(const std::vector<std::size_t>& hits, std::size_t trials,
                                  const std::vector<double>& weight) {
  TailSummary s;
  s.weight = weight;
  double max_lower = 0.0;
  double min_upper = kInf;
  std::size_t informative = 0;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    s.p.push_back(stats::proportion(hits[k], trials));
    if (hits[k] == 0) continue;
    ++informative;
    max_lower = std::max(max_lower, weight[k] * s.p.back().lower);
    min_upper = std::min(min_upper, weight[k] * s.p.back().upper);
  }
  s.ratio = informative < 2 ? kInf : max_lower / min_upper;
  s.informative = informative;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    for (std::size_t q = k + 1; q < hits.size(); ++q) {
      s.growth = std::max(s.growth, weight[q] * s.p[q].lower / (weight[k] * s.p[k].upper));
    }
  }
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact checks.

/// Dynamic programming against path enumeration on all grids up to 7 x 7.
inline EstimatorReport oracle_equivalence(const ExperimentConfig& c) {
  EstimatorReport r;
  detail::echo_common(r, c);
  r.set("instances", std::to_string(c.instances));
  r.set("rho", c.rho);
  const std::vector<std::string> kinds{"equilibrium", "rarefaction", "zero-both"};
  std::size_t total = 0;
  double worst = 0.0;
  for (std::size_t kk = 0; kk < kinds.size(); ++kk) {
    const auto diffs = parallel_map<double>(c.instances, [&](std::size_t s) {
      double d = 0.0;
      for (int m = 1; m <= 7; ++m) {
        for (int n = 1; n <= 7; ++n) {
          const std::uint64_t seed =
              detail::seed_for(c, ExperimentId::kOracle, static_cast<std::uint32_t>(kk), s * 64 + static_cast<std::uint64_t>(m * 8 + n));
          const WeightArray w = sample_with_boundary(kinds[kk], c.rho, m, n, seed, c.lambda_left, c.lambda_right);
          d = std::max(d, std::abs(compute_field(w).corner() - brute_force_passage(w)));
        }
      }
      return d;
    });
    const double kind_worst = *std::max_element(diffs.begin(), diffs.end());
    r.metric("max_abs_diff_" + kinds[kk], kind_worst);
    worst = std::max(worst, kind_worst);
    total += c.instances * 49;
  }
  r.metric("grids_checked", static_cast<double>(total));
  r.check("oracle_max_abs_diff", worst, 0.0, c.tol.oracle_tolerance, "DP corner equals enumeration");
  return r;
}

struct ZeroedBoundsCounts {
  std::size_t lower_bound = 0;      // A_0 increments <= G^{W=0} increments, all 1 <= m1 < m2
  std::size_t west_equality = 0;    // v(n) < m1 < m2: G^{W=0} increments equal G increments
  std::size_t south_bound = 0;      // 0 <= m1 < m2 <= v(n): A_0 increments >= G^{S=0} increments
  std::size_t south_equality = 0;   // and G^{S=0} increments equal G increments
  std::size_t rightmost_order = 0;  // Z^_l <= Z_l^{W=0} on every row
  std::size_t pairs_west = 0;       // number of (m1, m2) pairs where the equality applied
  std::size_t pairs_south = 0;
};

/// Increment bounds between zeroed-boundary and equilibrium passage times on
/// one instance, for every column pair.
inline ZeroedBoundsCounts zeroed_bounds_instance(const WeightArray& w, double tol) {
  ZeroedBoundsCounts out;
  const int m = w.m();
  const int n = w.n();
  const LppField g = compute_field(w);
  const LppField gw = compute_field(apply_boundary(w, ZeroWest{}));
  const LppField gs = compute_field(apply_boundary(w, ZeroSouth{}));
  const LppField gz = compute_field(apply_boundary(w, ZeroBoth{}));
  std::vector<double> a0(static_cast<std::size_t>(m + 1), 0.0);
  for (int k = 1; k <= m; ++k) a0[static_cast<std::size_t>(k)] = interior_passage_A(w, 0, k, n);
  const CompetitionInterface ci = build_interface(g);
  const int v = ci.v;  // m + 1 when the interface never reaches row n
  for (int m1 = 0; m1 <= m; ++m1) {
    for (int m2 = m1 + 1; m2 <= m; ++m2) {
      const double da = a0[static_cast<std::size_t>(m2)] - a0[static_cast<std::size_t>(m1)];
      const double dg = g.G(m2, n) - g.G(m1, n);
      const double dw = gw.G(m2, n) - gw.G(m1, n);
      const double ds = gs.G(m2, n) - gs.G(m1, n);
      if (m1 >= 1 && da > dw + tol) ++out.lower_bound;
      if (v < m1) {
        ++out.pairs_west;
        if (std::abs(dw - dg) > tol) ++out.west_equality;
      }
      if (m2 <= v) {
        ++out.pairs_south;
        if (da < ds - tol) ++out.south_bound;
        if (std::abs(ds - dg) > tol) ++out.south_equality;
      }
    }
  }
  const LatticePath hat = backtrack_path(gz, TiePolicy::kRightmost);
  const LatticePath west = backtrack_path(gw, TiePolicy::kRightmost);
  for (int l = 0; l <= n; ++l) {
    if (path_row_coordinates(hat, l).rightmost > path_row_coordinates(west, l).rightmost) ++out.rightmost_order;
  }
  return out;
}

inline EstimatorReport zeroed_boundary_bounds(const ExperimentConfig& c, int m = 6, int n = 4) {
  EstimatorReport r;
  detail::echo_common(r, c);
  r.set("instances", std::to_string(c.instances));
  r.set("grid", std::to_string(m) + "x" + std::to_string(n));
  const auto counts = parallel_map<ZeroedBoundsCounts>(c.instances, [&](std::size_t k) {
    const double rho = c.densities[k % c.densities.size()];
    return zeroed_bounds_instance(sample_equilibrium(rho, m, n, detail::seed_for(c, ExperimentId::kZeroedBounds, 0, k)),
                                  c.tol.exact_tolerance);
  });
  ZeroedBoundsCounts sum;
  for (const auto& x : counts) {
    sum.lower_bound += x.lower_bound;
    sum.west_equality += x.west_equality;
    sum.south_bound += x.south_bound;
    sum.south_equality += x.south_equality;
    sum.rightmost_order += x.rightmost_order;
    sum.pairs_west += x.pairs_west;
    sum.pairs_south += x.pairs_south;
  }
  r.metric("pairs_with_west_equality", static_cast<double>(sum.pairs_west));
  r.metric("pairs_with_south_bound", static_cast<double>(sum.pairs_south));
  r.check("interior_vs_west_zeroed_violations", static_cast<double>(sum.lower_bound), 0, 0,
          "A_0(m2,n)-A_0(m1,n) <= G^{W=0}(m2,n)-G^{W=0}(m1,n) for all 1 <= m1 < m2");
  r.check("west_zeroed_equality_violations", static_cast<double>(sum.west_equality), 0, 0,
          "G^{W=0} increments equal G increments when v(n) < m1");
  r.check("interior_vs_south_zeroed_violations", static_cast<double>(sum.south_bound), 0, 0,
          "A_0 increments >= G^{S=0} increments when m2 <= v(n)");
  r.check("south_zeroed_equality_violations", static_cast<double>(sum.south_equality), 0, 0,
          "G^{S=0} increments equal G increments when m2 <= v(n)");
  r.check("rightmost_row_order_violations", static_cast<double>(sum.rightmost_order), 0, 0,
          "rightmost row coordinate of the zero-both path <= that of the west-zeroed path");
  return r;
}

/// Per-instance identities of the last-passage field, paths, interface and
/// reversed process.
inline EstimatorReport structural_identities(const ExperimentConfig& c) {
  EstimatorReport r;
  detail::echo_common(r, c);
  r.set("instances", std::to_string(c.instances));
  r.set("densities", detail::join(c.densities));
  const double tol = c.tol.exact_tolerance;
  struct Row {
    double recurrence = 0, increment = 0, decomposition = 0, reversal = 0;
    std::size_t x_mismatch = 0, centre = 0, coupling = 0, duality = 0, duality_checked = 0, implication = 0,
                one_sided = 0, transpose = 0, streaming = 0, coupled_exit = 0;
  };
  const auto rows = parallel_map<Row>(c.instances, [&](std::size_t k) {
    Row row;
    const double rho = c.densities[k % c.densities.size()];
    auto seed = [&](std::uint32_t sub) { return detail::seed_for(c, ExperimentId::kStructural, sub, k); };

    const WeightArray w = sample_equilibrium(rho, 12, 9, seed(0));
    const LppField f = compute_field(w);
    for (int j = 0; j <= f.n(); ++j) {
      for (int i = 0; i <= f.m(); ++i) {
        const double left = i > 0 ? f.G(i - 1, j) : 0.0;
        const double below = j > 0 ? f.G(i, j - 1) : 0.0;
        row.recurrence = std::max(row.recurrence, std::abs(f.G(i, j) - std::max(left, below) - w(i, j)));
        if (i >= 1 && j >= 1) {
          const double ii = std::max(f.I(i, j - 1) - f.J(i - 1, j), 0.0) + w(i, j);
          const double jj = std::max(f.J(i - 1, j) - f.I(i, j - 1), 0.0) + w(i, j);
          row.increment = std::max({row.increment, std::abs(f.I(i, j) - ii), std::abs(f.J(i, j) - jj)});
          if (f.X(i - 1, j - 1) != std::min(f.I(i, j - 1), f.J(i - 1, j))) ++row.x_mismatch;
        }
      }
    }
    for (TiePolicy p : {TiePolicy::kRightmost, TiePolicy::kLeftmost}) {
      const Decomposition d = decompose(f, p);
      row.decomposition = std::max(row.decomposition, std::abs(d.axis + d.interior - f.corner()));
    }
    const double a0 = interior_passage_A(w, 0);
    if (interior_passage_A(w, -1) != a0 || interior_passage_A(w, 1) != a0) ++row.centre;
    const double lambda = rho + 0.5 * (1.0 - rho);
    const WeightArray coupled = couple_density(w, lambda);
    if (check_monotone_coupling(w, coupled, tol)) ++row.coupling;
    if (backtrack_path(f).exit > backtrack_path(compute_field(coupled)).exit) ++row.coupled_exit;

    const LppField small = compute_field(sample_equilibrium(rho, 8, 5, seed(1)));
    const DualityVerdict dv = check_reversal_duality(small, c.tie);
    if (!dv.holds) ++row.duality;
    row.duality_checked = static_cast<std::size_t>(dv.checked);

    const LppField sq = compute_field(sample_equilibrium(rho, 6, 6, seed(2)));
    const ReversedProcess rev = reverse_process(sq);
    for (int j = 0; j <= 6; ++j) {
      for (int i = 0; i <= 6; ++i) {
        row.reversal = std::max(row.reversal, std::abs(rev.field.G(i, j) - (sq.corner() - sq.G(6 - i, 6 - j))));
      }
    }

    const CompetitionInterface ci = build_interface(f);
    if (ci.v >= ci.m && !(ci.w_hit && ci.w < ci.n)) ++row.implication;
    const int east = ci.v_hit ? std::max(ci.m - ci.v, 0) : 0;
    const int north = ci.w_hit ? std::max(ci.n - ci.w, 0) : 0;
    if ((east > 0) == (north > 0)) ++row.one_sided;

    const LppField tf = compute_field(transpose(w));
    if (backtrack_path(tf).exit != -backtrack_path(f).exit) ++row.transpose;

    const PassageSummary s = summarize_streaming(w);
    if (s.exit != backtrack_path(f).exit || std::abs(s.corner - f.corner()) > tol) ++row.streaming;
    return row;
  });
  Row t;
  for (const Row& x : rows) {
    t.recurrence = std::max(t.recurrence, x.recurrence);
    t.increment = std::max(t.increment, x.increment);
    t.decomposition = std::max(t.decomposition, x.decomposition);
    t.reversal = std::max(t.reversal, x.reversal);
    t.x_mismatch += x.x_mismatch;
    t.centre += x.centre;
    t.coupling += x.coupling;
    t.coupled_exit += x.coupled_exit;
    t.duality += x.duality;
    t.duality_checked += x.duality_checked;
    t.implication += x.implication;
    t.one_sided += x.one_sided;
    t.transpose += x.transpose;
    t.streaming += x.streaming;
  }
  r.metric("duality_positions_checked", static_cast<double>(t.duality_checked));
  r.check("recurrence_residual", t.recurrence, 0.0, c.tol.oracle_tolerance, "G = max(left, below) + omega");
  r.check("increment_recursion_residual", t.increment, 0.0, tol, "I = (I' - J')^+ + omega, J likewise");
  r.check("interior_minimum_mismatches", static_cast<double>(t.x_mismatch), 0, 0, "X = min(I, J) exactly");
  r.check("decomposition_residual", t.decomposition, 0.0, tol, "U_Z + A_Z = G(m,n), both tie policies");
  r.check("centre_mismatches", static_cast<double>(t.centre), 0, 0, "A_{-1} = A_0 = A_1");
  r.check("monotone_coupling_violations", static_cast<double>(t.coupling), 0, 0, "I <= I~, J >= J~");
  r.check("coupled_exit_order_violations", static_cast<double>(t.coupled_exit), 0, 0, "Z^rho <= Z^lambda");
  r.check("reversal_duality_failures", static_cast<double>(t.duality), 0, 0, "phi*_k = (m,n) - pihat_{m+n-k}");
  r.check("reversed_field_residual", t.reversal, 0.0, tol, "G*_{ij} = G_mn - G_{m-i,n-j}");
  r.check("interface_implication_violations", static_cast<double>(t.implication), 0, 0, "v(n) >= m implies w(m) < n");
  r.check("interface_side_violations", static_cast<double>(t.one_sided), 0, 0, "exactly one of the Z* terms nonzero");
  r.check("transposition_exit_mismatches", static_cast<double>(t.transpose), 0, 0, "Z(transpose) = -Z");
  r.check("streaming_mismatches", static_cast<double>(t.streaming), 0, 0, "path-free summary agrees with the field");

  const EstimatorReport z = zeroed_boundary_bounds(c);
  for (const auto& m : z.metrics) r.metrics.push_back(m);
  for (const auto& v : z.verdicts) r.verdicts.push_back(v);
  return r;
}

// ---------------------------------------------------------------------------
// Increments along down-right paths.

inline EstimatorReport burke_increment_test(const ExperimentConfig& c,
                                            const std::vector<std::string>& paths = {"north-east", "staircase"}) {
  EstimatorReport r;
  detail::echo_common(r, c);
  r.set("m", std::to_string(c.m));
  r.set("n", std::to_string(c.n));
  r.set("samples", std::to_string(c.samples));
  r.set("densities", detail::join(c.densities));
  const std::size_t family = c.densities.size() * paths.size() * 3;
  const double level = detail::family_level(c, family);
  r.set("family_size", std::to_string(family));
  r.set("per_test_level", level);
  for (std::size_t d = 0; d < c.densities.size(); ++d) {
    const double rho = c.densities[d];
    const std::string tag = "rho" + format_double(rho);
    std::vector<DownRightPath> sigma;
    for (const auto& p : paths) sigma.push_back(parse_down_right(p, c.m, c.n));
    struct One {
      std::vector<PathIncrements> inc;
      std::vector<double> up_i, up_j;
    };
    const auto runs = parallel_map<One>(c.samples, [&](std::size_t k) {
      const LppField f =
          compute_field(sample_equilibrium(rho, c.m, c.n, detail::seed_for(c, ExperimentId::kBurke, static_cast<std::uint32_t>(d), k)));
      One o;
      for (const auto& s : sigma) o.inc.push_back(collect_increments(f, s, rho));
      const int j = c.n / 2;
      for (int i = 1; i <= c.m; ++i) {
        o.up_i.push_back(f.I(i, j) * (1.0 - rho) - 1.0);
        o.up_j.push_back(f.J(i, j + 1) * rho - 1.0);
      }
      return o;
    });
    for (std::size_t p = 0; p < paths.size(); ++p) {
      std::vector<double> is, js, xs, lag_a, lag_b;
      for (const One& o : runs) {
        const PathIncrements& inc = o.inc[p];
        is.insert(is.end(), inc.i_values.begin(), inc.i_values.end());
        js.insert(js.end(), inc.j_values.begin(), inc.j_values.end());
        xs.insert(xs.end(), inc.x_values.begin(), inc.x_values.end());
        for (std::size_t q = 1; q < inc.standardized.size(); ++q) {
          lag_a.push_back(inc.standardized[q - 1]);
          lag_b.push_back(inc.standardized[q]);
        }
      }
      const std::string key = tag + "_" + paths[p];
      const auto ki = stats::ks_exponential(is, 1.0 - rho);
      const auto kj = stats::ks_exponential(js, rho);
      const auto kx = stats::ks_exponential(xs, 1.0);
      r.metric(key + "_I_count", static_cast<double>(is.size()));
      r.metric(key + "_J_count", static_cast<double>(js.size()));
      r.metric(key + "_X_count", static_cast<double>(xs.size()));
      r.metric(key + "_I_ks_statistic", ki.statistic);
      r.metric(key + "_J_ks_statistic", kj.statistic);
      r.metric(key + "_X_ks_statistic", kx.statistic);
      r.check(key + "_I_ks_p", ki.p_value, level, 1.0, "I ~ Exp(1-rho)");
      r.check(key + "_J_ks_p", kj.p_value, level, 1.0, "J ~ Exp(rho)");
      r.check(key + "_X_ks_p", kx.p_value, level, 1.0, "X ~ Exp(1)");
      const double corr = stats::pearson(lag_a, lag_b);
      const double bound = c.tol.se_bound / std::sqrt(static_cast<double>(lag_a.size()));
      r.check(key + "_lag1_correlation", corr, -bound, bound, "adjacent increments along the path uncorrelated");
    }
    std::vector<double> ua, ub;
    for (const One& o : runs) {
      ua.insert(ua.end(), o.up_i.begin(), o.up_i.end());
      ub.insert(ub.end(), o.up_j.begin(), o.up_j.end());
    }
    const double corr = stats::pearson(ua, ub);
    const double bound = c.tol.se_bound / std::sqrt(static_cast<double>(ua.size()));
    r.check(tag + "_up_right_control_correlation", corr, -kInf, -bound,
            "control: I(i,j) and J(i,j+1) are dependent, correlation clearly negative");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Means and variances.

inline EstimatorReport mean_formula_check(const ExperimentConfig& c) {
  EstimatorReport r;
  detail::echo_common(r, c);
  r.set("samples", std::to_string(c.samples));
  for (std::size_t p = 0; p < c.points.size(); ++p) {
    const auto [rho, t] = c.points[p];
    const Dimensions d = characteristic_point(rho, t);
    const bool streaming = detail::use_streaming(c, t);
    const auto g = parallel_map<double>(c.samples, [&](std::size_t k) {
      return sample_equilibrium_passage(rho, d.m, d.n, detail::seed_for(c, ExperimentId::kMeanFormula, static_cast<std::uint32_t>(p), k),
                                        streaming)
          .corner;
    });
    const stats::Moments mo = stats::moments(g);
    const double expected = d.m / (1.0 - rho) + d.n / rho;
    const std::string key = "rho" + format_double(rho) + "_t" + format_double(t);
    r.metric(key + "_m", d.m);
    r.metric(key + "_n", d.n);
    r.metric(key + "_mean", mo.mean, mo.se_mean);
    r.metric(key + "_expected", expected);
    r.check(key + "_z", (mo.mean - expected) / mo.se_mean, -c.tol.se_bound, c.tol.se_bound,
            "mean of G within 3 SE of m/(1-rho) + n/rho");
    r.point("mean_minus_expected", t, mo.mean - expected, mo.se_mean);
  }
  return r;
}

struct IdentityResult {
  double variance = 0.0, variance_se = 0.0;
  double u_plus = 0.0, u_plus_se = 0.0, u_minus = 0.0, u_minus_se = 0.0;
  double residual_east = 0.0, se_east = 0.0, jackknife_east = 0.0;
  double residual_west = 0.0, se_west = 0.0, jackknife_west = 0.0;
  double residual_sum = 0.0, se_sum = 0.0;
};

/// Both lines of the variance identity with influence-function standard
/// errors; a delete-a-group jackknife cross-checks them.
inline IdentityResult variance_identity_estimates(const std::vector<EquilibriumSample>& s, double rho, int m, int n) {
  const std::size_t count = s.size();
  const double nn = static_cast<double>(count);
  std::vector<double> g(count), up(count), um(count);
  for (std::size_t k = 0; k < count; ++k) {
    g[k] = s[k].corner;
    up[k] = s[k].axis_plus();
    um[k] = s[k].axis_minus();
  }
  const double a = n / (rho * rho) - m / ((1.0 - rho) * (1.0 - rho));
  const double ce = 2.0 / (1.0 - rho);
  const double cw = 2.0 / rho;
  auto residuals = [&](std::size_t lo, std::size_t hi) {
    double sg = 0, sp = 0, sm = 0, cnt = 0;
    for (std::size_t k = 0; k < count; ++k) {
      if (k >= lo && k < hi) continue;
      sg += g[k];
      sp += up[k];
      sm += um[k];
      ++cnt;
    }
    const double mg = sg / cnt;
    double ss = 0;
    for (std::size_t k = 0; k < count; ++k) {
      if (k >= lo && k < hi) continue;
      ss += (g[k] - mg) * (g[k] - mg);
    }
    const double var = ss / (cnt - 1.0);
    return std::array<double, 2>{var - (a + ce * sp / cnt), var - (-a + cw * sm / cnt)};
  };
  IdentityResult out;
  const stats::Moments mg = stats::moments(g);
  const stats::Moments mp = stats::moments(up);
  const stats::Moments mm = stats::moments(um);
  out.variance = mg.variance;
  out.variance_se = mg.se_variance;
  out.u_plus = mp.mean;
  out.u_plus_se = mp.se_mean;
  out.u_minus = mm.mean;
  out.u_minus_se = mm.se_mean;
  const auto full = residuals(count, count);
  out.residual_east = full[0];
  out.residual_west = full[1];
  out.residual_sum = 2.0 * mg.variance - ce * mp.mean - cw * mm.mean;
  std::vector<double> pe(count), pw(count), ps(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double dv = (g[k] - mg.mean) * (g[k] - mg.mean) - mg.variance;
    pe[k] = dv - ce * (up[k] - mp.mean);
    pw[k] = dv - cw * (um[k] - mm.mean);
    ps[k] = 2.0 * dv - ce * (up[k] - mp.mean) - cw * (um[k] - mm.mean);
  }
  out.se_east = stats::moments(pe).se_mean;
  out.se_west = stats::moments(pw).se_mean;
  out.se_sum = stats::moments(ps).se_mean;
  if (count >= 100) {
    out.jackknife_east = stats::jackknife_se_indexed(count, 50, [&](std::size_t lo, std::size_t hi) { return residuals(lo, hi)[0]; });
    out.jackknife_west = stats::jackknife_se_indexed(count, 50, [&](std::size_t lo, std::size_t hi) { return residuals(lo, hi)[1]; });
  }
  (void)nn;
  return out;
}

/// Var(G(1,1)) exactly: Var(max(a, b)) + 1 with a ~ Exp(1-rho), b ~ Exp(rho).
inline double exact_variance_one_by_one(double rho) {
  const double a = 1.0 - rho, b = rho;
  const double m1 = 1.0 / a + 1.0 / b - 1.0 / (a + b);
  const double m2 = 2.0 / (a * a) + 2.0 / (b * b) - 2.0 / ((a + b) * (a + b));
  return m2 - m1 * m1 + 1.0;
}

inline EstimatorReport variance_identity_check(const ExperimentConfig& c) {
  if (c.boundary != "equilibrium") throw std::invalid_argument("variance identity needs the equilibrium boundary");
  EstimatorReport r;
  detail::echo_common(r, c);
  r.set("rho", c.rho);
  r.set("m", std::to_string(c.m));
  r.set("n", std::to_string(c.n));
  r.set("samples", std::to_string(c.samples));
  r.set("micro_samples", std::to_string(c.micro_samples));
  struct Case {
    std::string tag;
    int m, n;
    std::size_t samples;
  };
  const std::vector<Case> cases{{"main", c.m, c.n, c.samples}, {"micro", 1, 1, c.micro_samples}};
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const Case& cs = cases[ci];
    const auto s = parallel_map<EquilibriumSample>(cs.samples, [&](std::size_t k) {
      return sample_equilibrium_passage(c.rho, cs.m, cs.n,
                                        detail::seed_for(c, ExperimentId::kVarianceIdentity, static_cast<std::uint32_t>(ci), k),
                                        true, c.tie);
    });
    const IdentityResult e = variance_identity_estimates(s, c.rho, cs.m, cs.n);
    const std::string k = cs.tag;
    r.metric(k + "_variance", e.variance, e.variance_se);
    r.metric(k + "_mean_axis_plus", e.u_plus, e.u_plus_se);
    r.metric(k + "_mean_axis_minus", e.u_minus, e.u_minus_se);
    r.metric(k + "_east_residual", e.residual_east, e.se_east);
    r.metric(k + "_west_residual", e.residual_west, e.se_west);
    r.metric(k + "_sum_residual", e.residual_sum, e.se_sum);
    r.check(k + "_east_line_z", e.residual_east / e.se_east, -c.tol.se_bound, c.tol.se_bound,
            "Var = n/rho^2 - m/(1-rho)^2 + 2/(1-rho) E U_{Z+}");
    r.check(k + "_west_line_z", e.residual_west / e.se_west, -c.tol.se_bound, c.tol.se_bound,
            "Var = m/(1-rho)^2 - n/rho^2 + 2/rho E U_{-Z-}");
    r.check(k + "_sum_z", e.residual_sum / e.se_sum, -c.tol.se_bound, c.tol.se_bound,
            "2 Var = 2/(1-rho) E U_{Z+} + 2/rho E U_{-Z-}");
    if (e.jackknife_east > 0.0) {
      r.metric(k + "_east_jackknife_se", e.jackknife_east);
      r.metric(k + "_west_jackknife_se", e.jackknife_west);
      r.check(k + "_jackknife_se_ratio", e.jackknife_east / e.se_east, 0.7, 1.4,
              "jackknife and moment standard errors agree");
    }
    if (cs.m == 1 && cs.n == 1) {
      const double exact = exact_variance_one_by_one(c.rho);
      r.metric("micro_exact_variance", exact);
      r.check("micro_exact_variance_z", (e.variance - exact) / e.variance_se, -c.tol.se_bound, c.tol.se_bound,
              "sample variance of G(1,1) against its closed form");
    }
  }
  return r;
}

inline EstimatorReport variance_comparison_check(const ExperimentConfig& c) {
  if (c.lambda < c.rho) throw std::invalid_argument("variance comparison needs lambda >= rho");
  EstimatorReport r;
  detail::echo_common(r, c);
  r.set("rho", c.rho);
  r.set("lambda", c.lambda);
  r.set("m", std::to_string(c.m));
  r.set("n", std::to_string(c.n));
  r.set("samples", std::to_string(c.samples));
  struct Pair {
    double g_rho, g_lambda;
    int z_rho, z_lambda;
  };
  const auto s = parallel_map<Pair>(c.samples, [&](std::size_t k) {
    const std::uint64_t seed = detail::seed_for(c, ExperimentId::kVarianceComparison, 0, k);
    const EquilibriumSample a = sample_equilibrium_passage(c.rho, c.m, c.n, seed, true, c.tie);
    const EquilibriumSample b = sample_equilibrium_passage(c.lambda, c.m, c.n, seed, true, c.tie);
    return Pair{a.corner, b.corner, a.exit, b.exit};
  });
  std::vector<double> gr(s.size()), gl(s.size());
  std::size_t exit_order = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    gr[k] = s[k].g_rho;
    gl[k] = s[k].g_lambda;
    if (s[k].z_rho > s[k].z_lambda) ++exit_order;
  }
  const stats::Moments mr = stats::moments(gr);
  const stats::Moments ml = stats::moments(gl);
  const double ratio = (c.rho / c.lambda) * (c.rho / c.lambda);
  const double extra = c.m * (1.0 / ((1.0 - c.lambda) * (1.0 - c.lambda)) - ratio / ((1.0 - c.rho) * (1.0 - c.rho)));
  const double rhs = ratio * mr.variance + extra;
  const double diff = ml.variance - rhs;
  std::vector<double> psi(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    psi[k] = (gl[k] - ml.mean) * (gl[k] - ml.mean) - ratio * (gr[k] - mr.mean) * (gr[k] - mr.mean);
  }
  const double se = stats::moments(psi).se_mean;
  r.metric("variance_rho", mr.variance, mr.se_variance);
  r.metric("variance_lambda", ml.variance, ml.se_variance);
  r.metric("rhs_extra_term", extra);
  r.metric("rhs", rhs);
  r.metric("lhs_minus_rhs", diff, se);
  // lambda = rho couples identical samples: difference and SE vanish together.
  const double z = diff == 0.0 && se == 0.0 ? 0.0 : diff / se;
  r.check("lhs_minus_rhs_z", z, -kInf, c.tol.se_bound, "Var(G^lambda) <= rho^2/lambda^2 Var(G^rho) + m(...)");
  r.check("coupled_exit_order_violations", static_cast<double>(exit_order), 0, 0, "Z^rho <= Z^lambda per instance");
  return r;
}

struct ScalingFit {
  stats::LinearFit fit;
  std::vector<double> variance, se;
};

inline ScalingFit log_log_fit(const std::vector<double>& t, const std::vector<stats::Moments>& m) {
  ScalingFit out;
  std::vector<double> x, y, sy;
  for (std::size_t k = 0; k < t.size(); ++k) {
    out.variance.push_back(m[k].variance);
    out.se.push_back(m[k].se_variance);
    x.push_back(std::log(t[k]));
    y.push_back(std::log(m[k].variance));
    sy.push_back(m[k].se_variance / m[k].variance);
  }
  out.fit = stats::weighted_fit(x, y, sy);
  return out;
}

/// Pass when the slope lies in the window and its confidence interval
/// overlaps it.
inline void slope_verdicts(EstimatorReport& r, const std::string& key, const stats::LinearFit& f, double lo, double hi,
                           const std::string& rule) {
  r.metric(key + "_slope", f.slope, f.se_slope);
  r.metric(key + "_ci_low", f.ci_low);
  r.metric(key + "_ci_high", f.ci_high);
  r.metric(key + "_chi2", f.chi2);
  r.check(key + "_slope", f.slope, lo, hi, rule);
  r.check(key + "_ci_overlap", std::min(f.ci_high, hi) - std::max(f.ci_low, lo), 0.0, kInf,
          "95% interval overlaps the window");
}

inline EstimatorReport variance_scaling(const ExperimentConfig& c) {
  if (c.t_grid.size() < 3) throw std::invalid_argument("scaling needs at least 3 grid points");
  EstimatorReport r;
  detail::echo_common(r, c);
  r.set("rho", c.rho);
  r.set("t_grid", detail::join(c.t_grid));
  r.set("samples", std::to_string(c.samples));
  std::vector<stats::Moments> mg, mu;
  for (std::size_t ti = 0; ti < c.t_grid.size(); ++ti) {
    const double t = c.t_grid[ti];
    const Dimensions d = characteristic_point(c.rho, t);
    const bool streaming = detail::use_streaming(c, t);
    const auto s = parallel_map<EquilibriumSample>(c.samples, [&](std::size_t k) {
      return sample_equilibrium_passage(c.rho, d.m, d.n,
                                        detail::seed_for(c, ExperimentId::kVarianceScaling, static_cast<std::uint32_t>(ti), k),
                                        streaming, c.tie);
    });
    std::vector<double> g, u;
    for (const auto& x : s) {
      g.push_back(x.corner);
      u.push_back(x.south_total);
    }
    mg.push_back(stats::moments(g));
    mu.push_back(stats::moments(u));
    r.metric("t" + format_double(t) + "_variance", mg.back().variance, mg.back().se_variance);
    r.metric("t" + format_double(t) + "_control_variance", mu.back().variance, mu.back().se_variance);
    r.point("variance", t, mg.back().variance, mg.back().se_variance);
    r.point("control_variance", t, mu.back().variance, mu.back().se_variance);
    r.point("variance_over_t23", t, mg.back().variance / detail::t_two_thirds(t),
            mg.back().se_variance / detail::t_two_thirds(t));
  }
  const ScalingFit main = log_log_fit(c.t_grid, mg);
  const ScalingFit control = log_log_fit(c.t_grid, mu);
  slope_verdicts(r, "variance", main.fit, c.tol.slope_low, c.tol.slope_high, "log-log slope of Var G in the window");
  r.metric("control_slope", control.fit.slope, control.fit.se_slope);
  r.metric("control_ci_low", control.fit.ci_low);
  r.metric("control_ci_high", control.fit.ci_high);
  r.check("control_slope", control.fit.slope, c.tol.control_low, c.tol.control_high, "diffusive control slope near 1");
  r.check("control_ci_low_above_window", control.fit.ci_low, c.tol.slope_high, kInf,
          "control interval excludes the exponent window");
  const std::size_t k = c.t_grid.size();
  const double a = mg[k - 1].variance / detail::t_two_thirds(c.t_grid[k - 1]);
  const double b = mg[k - 2].variance / detail::t_two_thirds(c.t_grid[k - 2]);
  r.check("variance_ratio_stability", std::max(a, b) / std::min(a, b), 1.0, c.tol.stability_ratio,
          "Var/t^(2/3) at the two largest t within a factor of 2");
  return r;
}

// ---------------------------------------------------------------------------
// Exit point laws.

inline EstimatorReport exit_tail(const ExperimentConfig& c) {
  if (c.boundary != "equilibrium") throw std::invalid_argument("exit tails need the equilibrium boundary");
  EstimatorReport r;
  detail::echo_common(r, c);
  r.set("rho", c.rho);
  r.set("t", c.t);
  r.set("samples", std::to_string(c.samples));
  r.set("a_grid", detail::join(c.a_grid));
  r.set("delta_grid", detail::join(c.delta_grid));
  const Dimensions d = characteristic_point(c.rho, c.t);
  const double scale = detail::t_two_thirds(c.t);
  const auto z = parallel_map<int>(c.samples, [&](std::size_t k) {
    return sample_equilibrium_passage(c.rho, d.m, d.n, detail::seed_for(c, ExperimentId::kExitTail, 0, k),
                                      detail::use_streaming(c, c.t), c.tie)
        .exit;
  });
  std::vector<std::size_t> hits;
  std::vector<double> weight;
  for (double a : c.a_grid) {
    std::size_t h = 0;
    for (int v : z) h += v >= a * scale ? 1 : 0;
    hits.push_back(h);
    weight.push_back(a * a * a);
  }
  const detail::TailSummary ts = detail::weighted_tails(hits, c.samples, weight);
  for (std::size_t k = 0; k < c.a_grid.size(); ++k) {
    const double a = c.a_grid[k];
    const std::string key = "a" + format_double(a);
    r.metric(key + "_tail_count", static_cast<double>(hits[k]));
    r.metric(key + "_tail_probability", ts.p[k].estimate, ts.p[k].se);
    r.metric(key + "_weighted_tail", weight[k] * ts.p[k].estimate, weight[k] * ts.p[k].se);
    r.metric(key + "_weighted_upper", weight[k] * ts.p[k].upper);
    if (hits[k] == 0) r.note(key + ": no tail events; weighted tail bounded above by " + format_double(weight[k] * ts.p[k].upper));
    if (a * scale > d.m) r.note(key + ": threshold exceeds m, tail is zero structurally");
    r.point("weighted_tail", a, weight[k] * ts.p[k].estimate, weight[k] * ts.p[k].se);
  }
  r.metric("weighted_tail_growth", ts.growth);
  r.check("weighted_tail_ratio", ts.ratio, 0.0, c.tol.tail_ratio, "a^3 P(Z >= a t^(2/3)) flat up to binomial error");
  std::vector<std::size_t> small;
  for (double delta : c.delta_grid) {
    std::size_t h = 0;
    for (int v : z) h += (v >= 1 && v <= delta * scale) ? 1 : 0;
    small.push_back(h);
    const auto p = stats::proportion(h, c.samples);
    r.metric("delta" + format_double(delta) + "_mass", p.estimate, p.se);
    r.point("small_window_mass", delta, p.estimate, p.se);
  }
  double worst = 0.0;
  for (std::size_t k = 1; k < small.size(); ++k) {
    worst = std::max(worst, static_cast<double>(small[k - 1]) - static_cast<double>(small[k]));
  }
  r.check("small_window_monotonicity", worst, -kInf, 0.0, "mass of {1 <= Z <= delta t^(2/3)} nondecreasing in delta");
  return r;
}

inline EstimatorReport zstar_distribution_check(const ExperimentConfig& c) {
  if (c.boundary != "equilibrium") throw std::invalid_argument("Z* check needs the equilibrium boundary");
  EstimatorReport r;
  detail::echo_common(r, c);
  r.set("rho", c.rho);
  r.set("t", c.t);
  r.set("samples", std::to_string(c.samples));
  const Dimensions d = characteristic_point(c.rho, c.t);
  const Dimensions dt = characteristic_point(1.0 - c.rho, c.t);
  struct Row {
    double z, zstar_indep, zt, z_same, zstar_same;
  };
  const auto rows = parallel_map<Row>(c.samples, [&](std::size_t k) {
    auto seed = [&](std::uint32_t sub) { return detail::seed_for(c, ExperimentId::kZStar, sub, k); };
    const LppField a = compute_field(sample_equilibrium(c.rho, d.m, d.n, seed(0)));
    const LppField b = compute_field(sample_equilibrium(c.rho, d.m, d.n, seed(1)));
    const LppField t = compute_field(sample_equilibrium(1.0 - c.rho, dt.m, dt.n, seed(2)));
    return Row{static_cast<double>(backtrack_path(a, c.tie).exit), static_cast<double>(z_star_of(b)),
               -static_cast<double>(backtrack_path(t, c.tie).exit), static_cast<double>(backtrack_path(b, c.tie).exit),
               static_cast<double>(z_star_of(b))};
  });
  std::vector<double> z, zs, zt;
  std::size_t differ = 0;
  for (const Row& x : rows) {
    z.push_back(x.z);
    zs.push_back(x.zstar_indep);
    zt.push_back(x.zt);
    if (x.z_same != x.zstar_same) ++differ;
  }
  const auto k1 = stats::ks_two_sample(z, zs);
  const auto k2 = stats::ks_two_sample(z, zt);
  r.metric("z_mean", stats::moments(z).mean, stats::moments(z).se_mean);
  r.metric("zstar_mean", stats::moments(zs).mean, stats::moments(zs).se_mean);
  r.metric("z_vs_zstar_ks_statistic", k1.statistic);
  r.metric("z_vs_transposed_ks_statistic", k2.statistic);
  r.metric("same_instance_disagreement_rate", static_cast<double>(differ) / static_cast<double>(c.samples));
  r.check("z_vs_zstar_ks_p", k1.p_value, c.tol.level, 1.0, "Z and Z* equal in law");
  r.check("z_vs_transposed_ks_p", k2.p_value, c.tol.level, 1.0, "Z^rho and -Z^{1-rho} equal in law");
  return r;
}

// ---------------------------------------------------------------------------
// TASEP against last passage.

inline EstimatorReport tasep_bridge(const ExperimentConfig& c) {
  EstimatorReport r;
  detail::echo_common(r, c);
  r.set("rho", c.rho);
  r.set("horizon", c.horizon);
  r.set("track", std::to_string(c.track));
  r.set("samples", std::to_string(c.samples));
  r.set("interarrivals", std::to_string(c.interarrivals));
  r.set("bins", std::to_string(c.bins));
  TasepOptions opt;
  opt.track = c.track;
  struct Run {
    bool valid = false, complete = false;
    std::size_t checks = 0, failures = 0, events = 0;
    std::vector<double> exchange;  // NaN when unrecorded
    std::vector<double> particle, hole;
  };
  const auto runs = parallel_map<Run>(c.samples, [&](std::size_t k) {
    const TasepTrajectory tr = run_tasep(c.rho, c.horizon, detail::seed_for(c, ExperimentId::kTasepBridge, 0, k), opt);
    const BurkeMarginals bm = burke_marginals(tr);
    return Run{tr.valid(), tr.complete(), tr.identity_checks, tr.identity_failures, tr.events, tr.exchange,
               bm.particle, bm.hole};
  });
  const int K = c.track;
  const auto fields = parallel_map<std::vector<double>>(c.samples, [&](std::size_t k) {
    const LppField f = compute_field(sample_equilibrium(c.rho, std::max(K, 1), std::max(K, 1),
                                                        detail::seed_for(c, ExperimentId::kTasepBridge, 1, k)));
    std::vector<double> g;
    for (int i = 0; i <= K; ++i) {
      for (int j = 0; j <= K; ++j) g.push_back(f.G(i, j));
    }
    return g;
  });
  std::size_t invalid = 0, incomplete = 0, checks = 0, failures = 0, events = 0;
  for (const Run& tr : runs) {
    if (!tr.valid) ++invalid;
    if (!tr.complete) ++incomplete;
    checks += tr.checks;
    failures += tr.failures;
    events += tr.events;
  }
  r.metric("events", static_cast<double>(events));
  r.metric("invalid_runs", static_cast<double>(invalid));
  r.metric("censored_runs", static_cast<double>(incomplete));
  r.metric("identity_checks", static_cast<double>(checks));
  r.check("exchange_identity_failures", static_cast<double>(failures), 0, 0, "P_j(T_ij) = i-j+1 and H_i(T_ij) = i-j");
  r.check("invalid_runs", static_cast<double>(invalid), 0, 0, "no tracked label reached the window margin");
  r.check("censored_runs", static_cast<double>(incomplete), 0, 0, "every tracked exchange happened before the horizon");

  int passed = 0;
  const int cells = (K + 1) * (K + 1);
  for (int i = 0; i <= K; ++i) {
    for (int j = 0; j <= K; ++j) {
      std::vector<double> tv, gv;
      for (std::size_t k = 0; k < runs.size(); ++k) {
        const double v = runs[k].exchange[static_cast<std::size_t>(i * (K + 1) + j)];
        if (runs[k].valid && !std::isnan(v)) tv.push_back(v);
        gv.push_back(fields[k][static_cast<std::size_t>(i * (K + 1) + j)]);
      }
      const auto ks = stats::ks_two_sample(tv, gv);
      if (ks.passes(c.tol.level)) ++passed;
      const std::string key = "T" + std::to_string(i) + std::to_string(j);
      r.metric(key + "_ks_p", ks.p_value);
      r.point("exchange_time_mean_tasep", i * (K + 1) + j, stats::mean(tv));
      r.point("exchange_time_mean_lpp", i * (K + 1) + j, stats::mean(gv));
    }
  }
  r.metric("cells", cells);
  const double needed = K == 5 ? c.tol.bridge_min_pass : std::ceil(cells * c.tol.bridge_min_pass / 36.0);
  r.check("bridge_cells_passing", passed, needed, cells, "two-sample KS T_ij vs G_ij at the 1% level");

  std::vector<double> pa, ha, pc, hc;
  std::size_t short_runs = 0;
  const double bin = c.horizon / c.bins;
  for (const Run& bm : runs) {
    if (bm.particle.size() < static_cast<std::size_t>(c.interarrivals) ||
        bm.hole.size() < static_cast<std::size_t>(c.interarrivals)) {
      ++short_runs;
    }
    const auto ip = interarrivals(bm.particle);
    const auto ih = interarrivals(bm.hole);
    pa.insert(pa.end(), ip.begin(), ip.begin() + std::min<std::ptrdiff_t>(c.interarrivals, static_cast<std::ptrdiff_t>(ip.size())));
    ha.insert(ha.end(), ih.begin(), ih.begin() + std::min<std::ptrdiff_t>(c.interarrivals, static_cast<std::ptrdiff_t>(ih.size())));
    std::vector<double> cp(static_cast<std::size_t>(c.bins), 0.0), ch(static_cast<std::size_t>(c.bins), 0.0);
    for (double t : bm.particle) cp[std::min(static_cast<std::size_t>(t / bin), cp.size() - 1)] += 1.0;
    for (double t : bm.hole) ch[std::min(static_cast<std::size_t>(t / bin), ch.size() - 1)] += 1.0;
    pc.insert(pc.end(), cp.begin(), cp.end());
    hc.insert(hc.end(), ch.begin(), ch.end());
  }
  const auto kp = stats::ks_exponential(pa, 1.0 - c.rho);
  const auto kh = stats::ks_exponential(ha, c.rho);
  r.metric("runs_with_fewer_jumps_than_used", static_cast<double>(short_runs));
  r.metric("particle_interarrival_count", static_cast<double>(pa.size()));
  r.metric("hole_interarrival_count", static_cast<double>(ha.size()));
  r.metric("particle_jump_rate", static_cast<double>(pc.size() ? std::accumulate(pc.begin(), pc.end(), 0.0) : 0.0) /
                                     (c.horizon * static_cast<double>(runs.size())));
  r.metric("hole_jump_rate", std::accumulate(hc.begin(), hc.end(), 0.0) / (c.horizon * static_cast<double>(runs.size())));
  r.check("particle_poisson_ks_p", kp.p_value, c.tol.level, 1.0, "P_0 interarrivals ~ Exp(1-rho)");
  r.check("hole_poisson_ks_p", kh.p_value, c.tol.level, 1.0, "H_0 interarrivals ~ Exp(rho)");
  const double corr = stats::pearson(pc, hc);
  const double bound = c.tol.se_bound / std::sqrt(static_cast<double>(pc.size()));
  r.check("count_correlation", corr, -bound, bound, "P_0 and H_0 bin counts uncorrelated");
  return r;
}

// ---------------------------------------------------------------------------
// Rarefaction boundaries.

inline void require_rarefaction_kind(const ExperimentConfig& c) {
  if (c.boundary != "zero-both" && c.boundary != "rarefaction") {
    throw std::invalid_argument("this experiment needs boundary zero-both or rarefaction");
  }
}

inline EstimatorReport rarefaction_fluctuations(const ExperimentConfig& c) {
  require_rarefaction_kind(c);
  if (c.t_grid.size() < 3) throw std::invalid_argument("scaling needs at least 3 grid points");
  EstimatorReport r;
  detail::echo_common(r, c);
  r.set("rho", c.rho);
  r.set("boundary", c.boundary);
  r.set("t_grid", detail::join(c.t_grid));
  r.set("samples", std::to_string(c.samples));
  std::vector<stats::Moments> mh;
  std::vector<double> deficits, ranges;
  std::size_t order = 0;
  for (std::size_t ti = 0; ti < c.t_grid.size(); ++ti) {
    const double t = c.t_grid[ti];
    const Dimensions d = characteristic_point(c.rho, t);
    struct Row {
      double a0, hat, eq;
    };
    const auto rows = parallel_map<Row>(c.samples, [&](std::size_t k) {
      const WeightArray w = sample_equilibrium(c.rho, d.m, d.n, detail::seed_for(c, ExperimentId::kRarefaction, static_cast<std::uint32_t>(ti), k));
      const double hat = compute_field(apply_boundary(w, boundary_from_name(c.boundary, c.rho, d.m, d.n, c.lambda_left, c.lambda_right))).corner();
      return Row{interior_passage_A(w, 0), hat, compute_field(w).corner()};
    });
    std::vector<double> hat, scaled;
    for (const Row& x : rows) {
      hat.push_back(x.hat);
      scaled.push_back((x.hat - t) / std::cbrt(t));
      if (x.a0 > x.hat + c.tol.exact_tolerance || x.hat > x.eq + c.tol.exact_tolerance) ++order;
    }
    mh.push_back(stats::moments(hat));
    const double deficit = (t - mh.back().mean) / std::cbrt(t);
    const double range = stats::quantile(scaled, 0.95) - stats::quantile(scaled, 0.05);
    deficits.push_back(deficit);
    ranges.push_back(range);
    const std::string key = "t" + format_double(t);
    r.metric(key + "_mean", mh.back().mean, mh.back().se_mean);
    r.metric(key + "_variance", mh.back().variance, mh.back().se_variance);
    r.metric(key + "_scaled_deficit", deficit, mh.back().se_mean / std::cbrt(t));
    r.metric(key + "_scaled_range_5_95", range);
    r.point("variance", t, mh.back().variance, mh.back().se_variance);
    r.point("scaled_deficit", t, deficit, mh.back().se_mean / std::cbrt(t));
    r.point("scaled_range_5_95", t, range);
  }
  r.check("coupled_order_violations", static_cast<double>(order), 0, 0, "A_0 <= G^ <= G^rho per instance");
  const ScalingFit fit = log_log_fit(c.t_grid, mh);
  slope_verdicts(r, "variance", fit.fit, c.tol.slope_low, c.tol.slope_high, "log-log slope of Var G^ in the window");
  const auto [dmin, dmax] = std::minmax_element(deficits.begin(), deficits.end());
  r.check("deficit_min_positive", *dmin, 0.0, kInf, "mean of G^ stays below t");
  r.check("deficit_ratio", *dmax / *dmin, 1.0, c.tol.deficit_ratio, "(t - E G^)/t^(1/3) bounded across the grid");
  const auto [qmin, qmax] = std::minmax_element(ranges.begin(), ranges.end());
  r.check("scaled_range_ratio", *qmax / *qmin, 1.0, c.tol.quantile_ratio, "5%-95% range of (G^ - t)/t^(1/3) stable");
  return r;
}

inline EstimatorReport transversal_fluctuations(const ExperimentConfig& c) {
  require_rarefaction_kind(c);
  EstimatorReport r;
  detail::echo_common(r, c);
  const double s = c.s_fraction * c.t;
  if (s > c.t) throw std::invalid_argument("s must not exceed t");
  r.set("rho", c.rho);
  r.set("boundary", c.boundary);
  r.set("t", c.t);
  r.set("s", s);
  r.set("alpha", c.alpha);
  r.set("samples", std::to_string(c.samples));
  r.set("a_grid", detail::join(c.a_grid));
  const Dimensions d = characteristic_point(c.rho, c.t);
  const Dimensions kl = characteristic_point(c.rho, s);
  r.metric("k", kl.m);
  r.metric("l", kl.n);
  struct Row {
    int right, left, west;
  };
  const auto rows = parallel_map<Row>(c.samples, [&](std::size_t k) {
    const WeightArray w = sample_equilibrium(c.rho, d.m, d.n, detail::seed_for(c, ExperimentId::kTransversal, 0, k));
    const LppField hat = compute_field(apply_boundary(w, boundary_from_name(c.boundary, c.rho, d.m, d.n, c.lambda_left, c.lambda_right)));
    const LppField west = compute_field(apply_boundary(w, ZeroWest{}));
    return Row{path_row_coordinates(backtrack_path(hat, TiePolicy::kRightmost), kl.n).rightmost,
               path_row_coordinates(backtrack_path(hat, TiePolicy::kLeftmost), kl.n).leftmost,
               path_row_coordinates(backtrack_path(west, TiePolicy::kRightmost), kl.n).rightmost};
  });
  const double scale = detail::t_two_thirds(c.t);
  std::size_t order = 0, west_order = 0;
  for (const Row& x : rows) {
    if (x.left > x.right) ++order;
    if (x.right > x.west) ++west_order;
  }
  r.check("left_right_order_violations", static_cast<double>(order), 0, 0, "Y^_l <= Z^_l per instance");
  r.check("west_zeroed_order_violations", static_cast<double>(west_order), 0, 0, "Z^_l <= Z_l^{W=0} per instance");
  for (int side = 0; side < 2; ++side) {
    const std::string name = side == 0 ? "right" : "left";
    std::vector<std::size_t> hits;
    std::vector<double> weight;
    for (double a : c.a_grid) {
      std::size_t h = 0;
      for (const Row& x : rows) {
        const double dev = side == 0 ? x.right - kl.m : kl.m - x.left;
        h += dev >= a * scale ? 1 : 0;
      }
      hits.push_back(h);
      weight.push_back(std::pow(a, 3.0 * c.alpha));
    }
    const detail::TailSummary ts = detail::weighted_tails(hits, c.samples, weight);
    for (std::size_t k = 0; k < c.a_grid.size(); ++k) {
      const std::string key = name + "_a" + format_double(c.a_grid[k]);
      r.metric(key + "_tail_count", static_cast<double>(hits[k]));
      r.metric(key + "_weighted_tail", weight[k] * ts.p[k].estimate, weight[k] * ts.p[k].se);
      r.point(name + "_weighted_tail", c.a_grid[k], weight[k] * ts.p[k].estimate, weight[k] * ts.p[k].se);
      if (hits[k] == 0) {
        r.note(key + ": no tail events; weighted tail bounded above by " + format_double(weight[k] * ts.p[k].upper));
      }
    }
    r.metric(name + "_informative_cells", static_cast<double>(ts.informative));
    r.metric(name + "_flat_ratio", ts.ratio);
    r.check(name + "_smallest_a_events", static_cast<double>(hits.front()), 1.0, kInf,
            "tail events observed at the smallest a");
    r.check(name + "_weighted_tail_growth", ts.growth, 0.0, c.tol.tail_ratio,
            "a^(3 alpha) weighted tails do not grow in a beyond binomial error");
  }
  return r;
}

// ---------------------------------------------------------------------------

inline EstimatorReport run_experiment(const ExperimentConfig& c) {
  validate_config(c);
  if (c.name == "oracle") return oracle_equivalence(c);
  if (c.name == "structural") return structural_identities(c);
  if (c.name == "zeroed-bounds") return zeroed_boundary_bounds(c);
  if (c.name == "burke") return burke_increment_test(c);
  if (c.name == "mean-formula") return mean_formula_check(c);
  if (c.name == "variance-identity") return variance_identity_check(c);
  if (c.name == "variance-scaling") return variance_scaling(c);
  if (c.name == "exit-tail") return exit_tail(c);
  if (c.name == "zstar") return zstar_distribution_check(c);
  if (c.name == "tasep-bridge") return tasep_bridge(c);
  if (c.name == "rarefaction") return rarefaction_fluctuations(c);
  if (c.name == "transversal") return transversal_fluctuations(c);
  if (c.name == "variance-comparison") return variance_comparison_check(c);
  throw std::invalid_argument("unknown experiment: " + c.name);
}

}  // namespace lpp
