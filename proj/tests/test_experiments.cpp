#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "lpp/experiments.hpp"

namespace lpp {
namespace {

std::string csv_of(const EstimatorReport& r) {
  std::stringstream ss;
  write_report_csv(ss, r);
  return ss.str();
}

ExperimentConfig small(const std::string& name) {
  ExperimentConfig c = quick_config(name);
  c.instances = 4;
  c.samples = 40;
  c.micro_samples = 2000;
  c.t = 120;
  c.t_grid = {60, 120, 240};
  c.points = {{0.5, 40}};
  c.m = 8;
  c.n = 6;
  c.horizon = 30;
  c.track = 2;
  return c;
}

TEST(Experiments, EveryExperimentRunsAtSmallSize) {
  for (const auto& name : experiment_names()) {
    SCOPED_TRACE(name);
    const EstimatorReport r = run_experiment(small(name));
    EXPECT_EQ(r.experiment, name);
    EXPECT_FALSE(r.verdicts.empty());
    for (const auto& v : r.verdicts) EXPECT_EQ(v.pass, v.recheck()) << v.name;
  }
}

TEST(Experiments, ExactChecksPassOnSmallRuns) {
  for (const char* name : {"oracle", "structural", "zeroed-bounds"}) {
    const EstimatorReport r = run_experiment(small(name));
    EXPECT_TRUE(r.passed()) << name;
  }
}

TEST(Experiments, ReportsDoNotDependOnThreadCount) {
  const char* old = std::getenv("LPP_THREADS");
  const std::string saved = old ? old : "";
  for (const char* name : {"burke", "variance-identity", "tasep-bridge"}) {
    setenv("LPP_THREADS", "1", 1);
    const std::string one = csv_of(run_experiment(small(name)));
    setenv("LPP_THREADS", "3", 1);
    const std::string three = csv_of(run_experiment(small(name)));
    EXPECT_EQ(one, three) << name;
  }
  if (old) {
    setenv("LPP_THREADS", saved.c_str(), 1);
  } else {
    unsetenv("LPP_THREADS");
  }
}

TEST(Experiments, SeedChangesTheReport) {
  ExperimentConfig a = small("mean-formula");
  ExperimentConfig b = a;
  b.seed = 2;
  EXPECT_NE(csv_of(run_experiment(a)), csv_of(run_experiment(b)));
}

TEST(Experiments, PreconditionsAreEnforced) {
  ExperimentConfig c = small("variance-identity");
  c.boundary = "zero-both";
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  c = small("rarefaction");
  c.boundary = "equilibrium";
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  c = small("variance-comparison");
  c.lambda = 0.3;
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  c = small("exit-tail");
  c.boundary = "zero-west";
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  c = small("burke");
  c.name = "unknown";
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  c = small("variance-scaling");
  c.t_grid = {100, 50, 200};
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
}

TEST(Experiments, ExactVarianceOfTheOneByOneCorner) {
  // max of two Exp(1/2) has variance 4 * (1 + 1/4) = 5; the corner adds Exp(1).
  EXPECT_DOUBLE_EQ(exact_variance_one_by_one(0.5), 6.0);
  EXPECT_DOUBLE_EQ(exact_variance_one_by_one(0.3), exact_variance_one_by_one(0.7));
}

TEST(Experiments, IdentityEstimatesHaveZeroMeanResidualOnTheMicroCase) {
  std::vector<EquilibriumSample> s;
  for (std::uint64_t k = 0; k < 20000; ++k) s.push_back(sample_equilibrium_passage(0.4, 1, 1, 1000 + k, true));
  const IdentityResult e = variance_identity_estimates(s, 0.4, 1, 1);
  EXPECT_LT(std::abs(e.residual_east / e.se_east), 4.0);
  EXPECT_LT(std::abs(e.residual_west / e.se_west), 4.0);
  EXPECT_GT(e.jackknife_east, 0.0);
  EXPECT_NEAR(e.variance, exact_variance_one_by_one(0.4), 5 * e.variance_se);
}

TEST(Experiments, WeightedTailsLeaveEmptyCellsOutOfTheRatio) {
  const auto s = detail::weighted_tails({400, 50, 0}, 1000, {1.0, 8.0, 27.0});
  EXPECT_EQ(s.informative, 2u);
  EXPECT_GT(s.ratio, 0.0);
  EXPECT_LT(s.ratio, 2.0);
  EXPECT_LT(s.growth, 1.0);
  const auto one = detail::weighted_tails({10, 0, 0}, 1000, {1.0, 2.0, 3.0});
  EXPECT_EQ(one.ratio, kInf);
  EXPECT_EQ(one.growth, 0.0);
  const auto rising = detail::weighted_tails({10, 300}, 1000, {1.0, 1.0});
  EXPECT_GT(rising.growth, 5.0);
}

TEST(Experiments, ZeroedBoundsHoldOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto c = zeroed_bounds_instance(sample_equilibrium(0.2 + 0.012 * seed, 7, 5, seed), 1e-9);
    EXPECT_EQ(c.lower_bound + c.west_equality + c.south_bound + c.south_equality + c.rightmost_order, 0u) << seed;
  }
}

TEST(Experiments, TasepBridgeRecordsNoIdentityFailures) {
  const EstimatorReport r = run_experiment(small("tasep-bridge"));
  const Verdict* v = r.find_verdict("exchange_identity_failures");
  ASSERT_NE(v, nullptr);
  EXPECT_TRUE(v->pass);
  ASSERT_NE(r.find_metric("identity_checks"), nullptr);
  EXPECT_GT(r.find_metric("identity_checks")->value, 0.0);
}

}  // namespace
}  // namespace lpp

namespace lpp {
namespace {

TEST(VarianceComparison, EqualDensitiesHaveNoExtraTerm) {
  ExperimentConfig c = default_config("variance-comparison");
  c.lambda = c.rho;
  c.samples = 200;
  const EstimatorReport r = run_experiment(c);
  EXPECT_EQ(r.find_metric("rhs_extra_term")->value, 0.0);
  EXPECT_EQ(r.find_metric("lhs_minus_rhs")->value, 0.0);
  EXPECT_TRUE(r.passed());
}

TEST(VarianceComparison, ExtraTermIsExact) {
  ExperimentConfig c = default_config("variance-comparison");
  c.samples = 50;
  const EstimatorReport r = run_experiment(c);
  // 30 * (25/4 - (4/9) / (9/25)) = 30 * 1625/324
  const double expected = 30.0 * 1625.0 / 324.0;
  EXPECT_NEAR(r.find_metric("rhs_extra_term")->value, expected, 1e-12);
}

TEST(Transversal, TopRowCoordinatesAreTheCorner) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const WeightArray w = apply_boundary(sample_equilibrium(0.5, 9, 7, seed), ZeroBoth{});
    const LppField f = compute_field(w);
    const int right = path_row_coordinates(backtrack_path(f, TiePolicy::kRightmost), 7).rightmost;
    const int left = path_row_coordinates(backtrack_path(f, TiePolicy::kLeftmost), 7).leftmost;
    EXPECT_EQ(right, 9);
    // The path may enter the top row before the corner, so only the order is fixed.
    EXPECT_LE(left, right);
  }
}

TEST(ZeroedBounds, ZeroBothAndZeroWestShareTheInterior) {
  const WeightArray w = sample_equilibrium(0.5, 6, 4, 3);
  const WeightArray a = apply_boundary(w, ZeroBoth{});
  const WeightArray b = apply_boundary(w, ZeroWest{});
  for (int x = -4; x <= 6; ++x) EXPECT_EQ(interior_passage_A(a, x), interior_passage_A(b, x));
}

}  // namespace
}  // namespace lpp
