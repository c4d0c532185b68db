#include <gtest/gtest.h>

#include <sstream>

#include "lpp/io.hpp"
#include "test_support.hpp"

namespace lpp {
namespace {

WeightArray round_trip(const WeightArray& w) {
  std::stringstream ss;
  write_weights_csv(ss, w);
  return read_weights_csv(ss);
}

TEST(WeightsCsv, EquilibriumRoundTripKeepsProvenance) {
  const WeightArray w = sample_equilibrium(0.35, 5, 4, 77);
  const WeightArray r = round_trip(w);
  EXPECT_EQ(r, w);
  ASSERT_TRUE(r.provenance().has_value());
  EXPECT_EQ(r.provenance()->seed, 77u);
  EXPECT_EQ(couple_density(r, 0.6), couple_density(w, 0.6));
}

TEST(WeightsCsv, TransposedProvenanceIsRecovered) {
  const WeightArray t = transpose(sample_equilibrium(0.35, 5, 4, 77));
  const WeightArray r = round_trip(t);
  ASSERT_TRUE(r.provenance().has_value());
  EXPECT_TRUE(r.provenance()->transposed);
}

TEST(WeightsCsv, EditedValuesDropProvenance) {
  const WeightArray w = sample_equilibrium(0.5, 3, 3, 1);
  std::stringstream ss;
  write_weights_csv(ss, w);
  std::string text = ss.str();
  text.replace(text.find("\n1,1,") + 5, 3, "123");
  std::stringstream in(text);
  const WeightArray r = read_weights_csv(in);
  EXPECT_FALSE(r.provenance().has_value());
}

TEST(WeightsCsv, OtherKinds) {
  const WeightArray base = sample_equilibrium(0.5, 4, 3, 2);
  EXPECT_EQ(round_trip(apply_boundary(base, ZeroBoth{})).boundary().index(), BoundaryKind(ZeroBoth{}).index());
  EXPECT_EQ(round_trip(apply_boundary(base, ZeroWest{})).boundary().index(), BoundaryKind(ZeroWest{}).index());
  const WeightArray fan = apply_boundary(base, fan_multipliers(0.5, 0.7, 0.3, 4, 3));
  const WeightArray r = round_trip(fan);
  EXPECT_TRUE(std::holds_alternative<Custom>(r.boundary()));
  for (std::size_t k = 0; k < r.values().size(); ++k) EXPECT_EQ(r.values()[k], fan.values()[k]);
  EXPECT_EQ(round_trip(testing::two_by_two()), testing::two_by_two());
}

TEST(WeightsCsv, RejectsMalformedInput) {
  std::stringstream bad_header("m,n,kind\n");
  EXPECT_THROW(read_weights_csv(bad_header), std::invalid_argument);
  std::stringstream truncated("m,n,kind,rho,seed\n1,1,custom,,\ni,j,omega\n0,0,0\n");
  EXPECT_THROW(read_weights_csv(truncated), std::invalid_argument);
  std::stringstream bad_kind("m,n,kind,rho,seed\n0,0,mystery,,\ni,j,omega\n0,0,0\n");
  EXPECT_THROW(read_weights_csv(bad_kind), std::invalid_argument);
  std::stringstream negative("m,n,kind,rho,seed\n1,0,custom,,\ni,j,omega\n0,0,0\n1,0,-1\n");
  EXPECT_THROW(read_weights_csv(negative), std::invalid_argument);
}

TEST(FieldCsv, TwoByTwo) {
  std::ostringstream out;
  write_field_csv(out, compute_field(testing::two_by_two()));
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("i,j,G,I,J,X\n0,0,0,,,2\n", 0), 0u);
  EXPECT_NE(text.find("\n2,2,10,1,3,\n"), std::string::npos);
}

TEST(SitesCsv, RoundTrip) {
  const LatticePath p = backtrack_path(compute_field(sample_equilibrium(0.5, 6, 6, 3)));
  std::stringstream ss;
  write_sites_csv(ss, p.sites);
  EXPECT_EQ(read_sites_csv(ss), p.sites);
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(parse_double(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(format_fixed(2.0 / 3.0, 3), "0.667");
  EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
}

}  // namespace
}  // namespace lpp
