#include <gtest/gtest.h>

#include "lpp/path.hpp"
#include "test_support.hpp"

namespace lpp {
namespace {

void expect_valid_path(const LatticePath& p, const LppField& f) {
  ASSERT_EQ(p.sites.size(), static_cast<std::size_t>(f.m() + f.n() + 1));
  EXPECT_EQ(p.sites.front(), (Site{0, 0}));
  EXPECT_EQ(p.sites.back(), (Site{f.m(), f.n()}));
  int horizontal = 0;
  for (std::size_t k = 1; k < p.sites.size(); ++k) {
    const int di = p.sites[k].i - p.sites[k - 1].i;
    const int dj = p.sites[k].j - p.sites[k - 1].j;
    EXPECT_TRUE((di == 1 && dj == 0) || (di == 0 && dj == 1));
    horizontal += di;
  }
  EXPECT_EQ(horizontal, f.m());
  EXPECT_NEAR(p.weight, f.corner(), 1e-9);
  EXPECT_NE(p.exit, 0);
}

TEST(Backtrack, TwoByTwoPath) {
  const LppField f = compute_field(testing::two_by_two());
  const LatticePath p = backtrack_path(f);
  const std::vector<Site> expected{{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}};
  EXPECT_EQ(p.sites, expected);
  EXPECT_EQ(p.exit, -2);
  EXPECT_EQ(p.weight, 10.0);
}

TEST(Backtrack, HugsSouthAxisWhenInteriorIsEmpty) {
  const LppField f = compute_field(WeightArray::from_function(5, 4, [](int i, int j) {
    if (j == 0) return 10.0;
    return i == 0 ? 0.1 : 0.0;
  }));
  for (TiePolicy p : {TiePolicy::kRightmost, TiePolicy::kLeftmost}) {
    const LatticePath path = backtrack_path(f, p);
    EXPECT_EQ(path.exit, 5);
    expect_valid_path(path, f);
  }
}

TEST(Backtrack, PoliciesAgreeForContinuousWeights) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const LppField f = compute_field(sample_equilibrium(0.5, 15, 11, seed));
    const LatticePath r = backtrack_path(f, TiePolicy::kRightmost);
    const LatticePath l = backtrack_path(f, TiePolicy::kLeftmost);
    EXPECT_EQ(r.sites, l.sites);
    EXPECT_EQ(r.ties, 0);
    expect_valid_path(r, f);
  }
}

TEST(Backtrack, ZeroAxesPoliciesSplitAtTheOrigin) {
  const LppField f = compute_field(testing::zero_both(0.5, 6, 6, 3));
  const LatticePath r = backtrack_path(f, TiePolicy::kRightmost);
  const LatticePath l = backtrack_path(f, TiePolicy::kLeftmost);
  EXPECT_EQ(r.exit, 1);
  EXPECT_EQ(l.exit, -1);
  EXPECT_GE(r.ties, 1);
  for (int row = 0; row <= 6; ++row) {
    EXPECT_LE(path_row_coordinates(l, row).leftmost, path_row_coordinates(r, row).rightmost);
  }
}

TEST(RowCoordinates, TwoByTwo) {
  const LatticePath p = backtrack_path(compute_field(testing::two_by_two()));
  EXPECT_EQ(path_row_coordinates(p, 2).rightmost, 2);
  EXPECT_EQ(path_row_coordinates(p, 2).leftmost, 0);
  EXPECT_EQ(path_row_coordinates(p, 1).rightmost, 0);
  EXPECT_THROW(path_row_coordinates(p, 3), std::out_of_range);
}

TEST(RowCoordinates, RowZeroGivesPositivePartOfExit) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const LppField f = compute_field(sample_equilibrium(0.5, 9, 9, seed));
    const LatticePath p = backtrack_path(f);
    EXPECT_EQ(path_row_coordinates(p, 0).rightmost, std::max(p.exit, 0));
    EXPECT_EQ(path_row_coordinates(p, f.n()).rightmost, f.m());
  }
}

TEST(Decompose, TwoByTwo) {
  const Decomposition d = decompose(compute_field(testing::two_by_two()));
  EXPECT_EQ(d.exit, -2);
  EXPECT_EQ(d.axis, 6.0);
  EXPECT_EQ(d.interior, 4.0);
  EXPECT_EQ(d.axis + d.interior, d.total);
}

TEST(Decompose, SplitsCornerValueExactly) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const LppField f = compute_field(sample_equilibrium(0.6, 13, 8, seed));
    const Decomposition d = decompose(f);
    EXPECT_NEAR(d.axis + d.interior, f.corner(), 1e-9);
    EXPECT_EQ(d.exit, backtrack_path(f).exit);
  }
}

TEST(Decompose, ZeroAxes) {
  const LppField f = compute_field(testing::zero_both(0.5, 7, 5, 9));
  const Decomposition d = decompose(f);
  EXPECT_EQ(d.axis, 0.0);
  EXPECT_NEAR(f.corner(), interior_passage_A(f.weights(), 0), 1e-12);
}

TEST(StreamingSummary, AgreesWithFullField) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const WeightArray w = sample_equilibrium(0.35, 11, 14, seed);
    const LppField f = compute_field(w);
    const PassageSummary s = summarize_streaming(w);
    EXPECT_NEAR(s.corner, f.corner(), 1e-9);
    EXPECT_EQ(s.exit, backtrack_path(f).exit);
    EXPECT_EQ(s.south_total, f.G(f.m(), 0));
    EXPECT_EQ(s.west_total, f.G(0, f.n()));
  }
  const WeightArray z = testing::zero_both(0.5, 6, 6, 1);
  EXPECT_EQ(summarize_streaming(z, TiePolicy::kRightmost).exit, 1);
  EXPECT_EQ(summarize_streaming(z, TiePolicy::kLeftmost).exit, -1);
}

TEST(Transposition, NegatesExitAndSwapsIncrements) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const WeightArray w = sample_equilibrium(0.3, 8, 12, seed);
    const LppField f = compute_field(w);
    const LppField t = compute_field(transpose(w));
    for (int j = 0; j <= f.n(); ++j) {
      for (int i = 0; i <= f.m(); ++i) {
        EXPECT_EQ(t.G(j, i), f.G(i, j));
        if (i >= 1) {
          EXPECT_EQ(t.J(j, i), f.I(i, j));
        }
      }
    }
    EXPECT_EQ(backtrack_path(t).exit, -backtrack_path(f).exit);
  }
}

}  // namespace
}  // namespace lpp
