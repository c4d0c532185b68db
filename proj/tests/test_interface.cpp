#include <gtest/gtest.h>

#include "lpp/interface.hpp"
#include "test_support.hpp"

namespace lpp {
namespace {

TEST(Interface, TwoByTwo) {
  const CompetitionInterface ci = build_interface(compute_field(testing::two_by_two()));
  const std::vector<Site> expected{{0, 0}, {1, 0}, {2, 0}};
  EXPECT_EQ(ci.sites, expected);
  EXPECT_EQ(ci.stop, InterfaceStop::kEast);
  EXPECT_TRUE(ci.w_hit);
  EXPECT_EQ(ci.w, 0);
  EXPECT_FALSE(ci.v_hit);
  EXPECT_EQ(ci.v, 3);
  EXPECT_EQ(ci.z_star(), -2);
}

TEST(Interface, StepsAreUpRightAndFollowSmallerValue) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const LppField f = compute_field(sample_equilibrium(0.5, 10, 10, seed));
    const CompetitionInterface ci = build_interface(f);
    EXPECT_EQ(ci.degenerate_steps, 0);
    for (std::size_t k = 1; k < ci.sites.size(); ++k) {
      const Site a = ci.sites[k - 1];
      const Site b = ci.sites[k];
      const double east = f.G(a.i + 1, a.j);
      const double north = f.G(a.i, a.j + 1);
      const Site want = east < north ? Site{a.i + 1, a.j} : Site{a.i, a.j + 1};
      EXPECT_EQ(b, want);
    }
    const Site last = ci.sites.back();
    EXPECT_TRUE(last.i == f.m() || last.j == f.n());
    EXPECT_TRUE(ci.v_hit || ci.w_hit);
  }
}

TEST(Interface, ExactlyOneSideIsReached) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const CompetitionInterface ci = build_interface(compute_field(sample_equilibrium(0.3, 7, 12, seed)));
    if (ci.stop == InterfaceStop::kEast) {
      EXPECT_TRUE(ci.w_hit);
      EXPECT_LE(ci.z_star(), 0);
    } else {
      EXPECT_TRUE(ci.v_hit);
      EXPECT_GE(ci.z_star(), 0);
    }
  }
}

TEST(Interface, TiesStepEast) {
  const CompetitionInterface ci = build_interface(compute_field(WeightArray::from_function(3, 3, [](int, int) { return 0.0; })));
  EXPECT_EQ(ci.degenerate_steps, 3);
  EXPECT_EQ(ci.sites.back(), (Site{3, 0}));
}

TEST(Reversal, ValueIdentity) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const LppField f = compute_field(sample_equilibrium(0.45, 9, 7, seed));
    const ReversedProcess r = reverse_process(f);
    for (int j = 0; j <= f.n(); ++j) {
      for (int i = 0; i <= f.m(); ++i) {
        EXPECT_NEAR(r.field.G(i, j), f.corner() - f.G(f.m() - i, f.n() - j), 1e-9 * (1.0 + f.corner()));
      }
    }
  }
}

TEST(Reversal, KeepsEquilibriumKindWithoutProvenance) {
  const ReversedProcess r = reverse_process(compute_field(sample_equilibrium(0.45, 4, 4, 1)));
  EXPECT_TRUE(std::holds_alternative<Equilibrium>(r.weights->boundary()));
  EXPECT_FALSE(r.weights->provenance().has_value());
  const ReversedProcess c = reverse_process(compute_field(testing::two_by_two()));
  EXPECT_TRUE(std::holds_alternative<Custom>(c.weights->boundary()));
}

TEST(Reversal, TwoByTwoWeights) {
  const LppField f = compute_field(testing::two_by_two());
  const ReversedProcess r = reverse_process(f);
  EXPECT_EQ((*r.weights)(1, 0), f.I(2, 2));
  EXPECT_EQ((*r.weights)(0, 1), f.J(2, 2));
  EXPECT_EQ((*r.weights)(2, 2), f.X(0, 0));
  EXPECT_EQ(r.field.corner(), f.corner());
}

TEST(Duality, HoldsOnRandomInstances) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const LppField f = compute_field(sample_equilibrium(0.5, 8, 5, seed));
    const DualityVerdict v = check_reversal_duality(f);
    EXPECT_TRUE(v.holds) << "seed " << seed << " k " << v.first_mismatch;
    EXPECT_FALSE(v.ambiguous);
    checked += v.checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Duality, TwoByTwo) {
  const DualityVerdict v = check_reversal_duality(compute_field(testing::two_by_two()));
  EXPECT_TRUE(v.holds);
  EXPECT_EQ(v.checked, 3);
}

TEST(Duality, ExitMatchesReversedInterfaceZStar) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const LppField f = compute_field(sample_equilibrium(0.6, 10, 10, seed));
    const int z = backtrack_path(f).exit;
    EXPECT_EQ(z_star_of(reverse_process(f).field), z) << "seed " << seed;
  }
}

TEST(ZStar, ForcedByLargeSouthAxis) {
  // Huge west weights force the interface east along the bottom row.
  const LppField f = compute_field(WeightArray::from_function(4, 3, [](int i, int j) {
    if (i == 0) return 100.0;
    return j == 0 ? 0.5 : 1.0;
  }));
  const CompetitionInterface ci = build_interface(f);
  EXPECT_EQ(ci.stop, InterfaceStop::kEast);
  EXPECT_EQ(ci.w, 0);
  EXPECT_EQ(ci.z_star(), -3);
}

}  // namespace
}  // namespace lpp
