#include <gtest/gtest.h>

#include <cmath>

#include "lpp/tasep.hpp"

namespace lpp {
namespace {

TEST(TasepInit, PalmConditionedOrigin) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const TasepState s = init_palm_conditioned(0.4, -50, 51, seed);
    EXPECT_FALSE(s.occupied(0));
    EXPECT_TRUE(s.occupied(1));
    EXPECT_EQ(s.label(0), 0);
    EXPECT_EQ(s.label(1), 0);
    EXPECT_TRUE(s.labels_ordered());
  }
}

TEST(TasepInit, LabelsCountOutwards) {
  const TasepState s = TasepState::from_occupation(-3, {1, 0, 1, 0, 1, 0, 1, 1});
  // sites -3..4: P2 H-1 P1 H0 P0 H1 P-1 P-2
  EXPECT_EQ(s.label(-3), 2);
  EXPECT_EQ(s.label(-2), -1);
  EXPECT_EQ(s.label(-1), 1);
  EXPECT_EQ(s.label(2), 1);
  EXPECT_EQ(s.label(3), -1);
  EXPECT_EQ(s.label(4), -2);
}

TEST(TasepInit, DensityWithinThreeStandardErrors) {
  const double rho = 0.3;
  const TasepState s = init_palm_conditioned(rho, -5000, 5001, 3);
  const double se = std::sqrt(rho * (1.0 - rho) / 10000.0);
  EXPECT_NEAR(s.empirical_density(), rho, 3.0 * se);
}

TEST(TasepInit, RejectsWindowWithoutOrigin) {
  EXPECT_THROW(init_palm_conditioned(0.5, 1, 10, 1), std::invalid_argument);
  EXPECT_THROW(init_palm_conditioned(0.5, -10, 0, 1), std::invalid_argument);
  EXPECT_THROW(init_palm_conditioned(1.5, -10, 10, 1), std::invalid_argument);
  EXPECT_THROW(TasepState::from_occupation(-2, {0, 0, 1, 1}), std::invalid_argument);
}

TEST(TasepSimulate, BlockedConfigurationHasNoEvents) {
  const TasepState s = TasepState::from_occupation(-3, {0, 0, 0, 0, 1, 1, 1, 1});
  const TasepTrajectory tr = simulate(s, 100.0, 1);
  EXPECT_EQ(tr.events, 0u);
  EXPECT_TRUE(tr.p0_jumps.empty());
}

TEST(TasepSimulate, ExchangeIdentityAndOrdering) {
  TasepOptions opt;
  opt.check_invariants = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TasepTrajectory tr = run_tasep(0.4, 40.0, seed, opt);
    ASSERT_TRUE(tr.valid());
    EXPECT_GT(tr.identity_checks, 20u);
    EXPECT_EQ(tr.identity_failures, 0u);
    EXPECT_EQ(tr.T(0, 0), 0.0);
    for (int i = 0; i <= tr.track; ++i) {
      for (int j = 0; j <= tr.track; ++j) {
        if (!tr.recorded(i, j)) continue;
        if (i < tr.track && tr.recorded(i + 1, j)) {
          EXPECT_LE(tr.T(i, j), tr.T(i + 1, j));
        }
        if (j < tr.track && tr.recorded(i, j + 1)) {
          EXPECT_LE(tr.T(i, j), tr.T(i, j + 1));
        }
      }
    }
  }
}

TEST(TasepSimulate, AxisExchangesAreTheMarginalJumps) {
  const TasepTrajectory tr = run_tasep(0.5, 30.0, 11);
  for (int i = 1; i <= tr.track; ++i) {
    if (static_cast<std::size_t>(i) <= tr.p0_jumps.size()) {
      EXPECT_EQ(tr.T(i, 0), tr.p0_jumps[static_cast<std::size_t>(i - 1)]);
    }
    if (static_cast<std::size_t>(i) <= tr.h0_jumps.size()) {
      EXPECT_EQ(tr.T(0, i), tr.h0_jumps[static_cast<std::size_t>(i - 1)]);
    }
  }
}

TEST(TasepSimulate, FinalPositionsSatisfyOrder) {
  const TasepTrajectory tr = run_tasep(0.5, 20.0, 5);
  for (int j = 0; j < tr.track; ++j) EXPECT_LT(tr.particle_position[j + 1], tr.particle_position[j]);
  for (int i = 0; i < tr.track; ++i) EXPECT_LT(tr.hole_position[i], tr.hole_position[i + 1]);
  EXPECT_EQ(tr.particle_position[0], 1 + static_cast<int>(tr.p0_jumps.size()));
  EXPECT_EQ(tr.hole_position[0], -static_cast<int>(tr.h0_jumps.size()));
}

TEST(TasepSimulate, Deterministic) {
  TasepOptions opt;
  opt.record_log = true;
  const TasepTrajectory a = run_tasep(0.4, 15.0, 9, opt);
  const TasepTrajectory b = run_tasep(0.4, 15.0, 9, opt);
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t k = 0; k < a.log.size(); ++k) {
    EXPECT_EQ(a.log[k].t, b.log[k].t);
    EXPECT_EQ(a.log[k].site, b.log[k].site);
  }
}

TEST(TasepSimulate, NarrowWindowTripsMargin) {
  TasepOptions opt;
  opt.margin = 4;
  const TasepTrajectory tr = simulate(init_palm_conditioned(0.5, -6, 7, 2), 200.0, 2, opt);
  EXPECT_TRUE(tr.margin_hit);
  EXPECT_FALSE(tr.valid());
}

TEST(TasepSimulate, StopWhenComplete) {
  TasepOptions opt;
  opt.stop_when_complete = true;
  opt.track = 2;
  const TasepTrajectory tr = run_tasep(0.5, 200.0, 4, opt);
  EXPECT_TRUE(tr.complete());
  EXPECT_LT(tr.end_time, 200.0);
}

TEST(TasepIo, CsvShapes) {
  TasepOptions opt;
  opt.record_log = true;
  opt.track = 1;
  const TasepTrajectory tr = run_tasep(0.5, 5.0, 4, opt);
  std::ostringstream log, t;
  write_event_log_csv(log, tr);
  write_exchange_csv(t, tr);
  EXPECT_EQ(log.str().rfind("t,kind,label,site\n", 0), 0u);
  EXPECT_EQ(t.str().rfind("i,j,T\n0,0,0\n", 0), 0u);
}

TEST(Interarrivals, Differences) {
  const std::vector<double> d = interarrivals({1.0, 1.5, 4.0});
  EXPECT_EQ(d, (std::vector<double>{1.0, 0.5, 2.5}));
}

}  // namespace
}  // namespace lpp
