#include <gtest/gtest.h>

#include "puiseux/landscape.hpp"

using namespace puiseux;

namespace {

const char* kMixedCycles =
    "(z^14+3z^15)+(2z^15+2z^16)w+(3z^15-20z^16)w^2+(4z^15)w^3+(10z^5-z^6+2z^7)w^4+(8z^10)w^5+(9z^10)w^6+(20z)w^7+"
    "(3z)w^8+2w^9+5w^10";
const char* kInverse55 = "z-(w-1)(w-2)^2(w-3)^3(w-4)^4(w-5)^5(w-6)^6(w-7)^7(w-8)^8(w-9)^9(w-10)^10";
const char* kSheetPoles =
    "(3+4z)+(-6z^2-3/2z^5)w+(1/2-16z+7/8z^2)w^2+(3/4-2z+12z^4)w^3+(15+z^2/3+22/15z^3)w^7+"
    "(-1/1000-z/25+z^2/2-z^3/5+2z^4)w^8";

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Inventory, ExplicitDiscriminant) {
  // w^2 = z (z-1)(z-2)^... : branch points at 1 and 2, origin singular
  Inventory inv = inventory(parse("w^2-z(z-1)(z-2)"), 100);
  EXPECT_TRUE(inv.origin_singular);
  ASSERT_EQ(inv.rings.size(), 2u);
  EXPECT_NEAR(inv.rings[0].modulus.re().to_double(), 1, 1e-15);
  EXPECT_NEAR(inv.rings[1].modulus.re().to_double(), 2, 1e-15);
  // nearest neighbour of 1 is the origin or 2, both at distance 1
  EXPECT_NEAR(inv.rings[0].members[0].nearest_neighbor_distance.re().to_double(), 1, 1e-15);
}

TEST(Inventory, LonePointMeasuresAgainstOrigin) {
  // single branch point at 1, origin regular
  Inventory inv = inventory(parse("w^2-(1-z)"), 100);
  EXPECT_FALSE(inv.origin_singular);
  ASSERT_EQ(inv.rings.size(), 1u);
  EXPECT_NEAR(inv.rings[0].members[0].nearest_neighbor_distance.re().to_double(), 1, 1e-15);
}

TEST(Inventory, PolesAreFlagged) {
  // (z^2+1) w^2 - 1: a_n vanishes at +-i
  Inventory inv = inventory(parse("(z^2+1)w^2-1"), 100);
  ASSERT_EQ(inv.rings.size(), 1u);
  ASSERT_EQ(inv.rings[0].members.size(), 2u);
  for (const auto& p : inv.rings[0].members) EXPECT_TRUE(p.is_pole);
  // ascending argument: -i first
  EXPECT_LT(inv.rings[0].members[0].location.im().to_double(), 0);
}

TEST(Inventory, EmptyInventoryDefaultsBasePoint) {
  Inventory inv = inventory(parse("w^2-z"), 60);
  EXPECT_TRUE(inv.rings.empty());
  EXPECT_TRUE(inv.origin_singular);
  BasePoint b = base_point(inv, 128);
  EXPECT_TRUE(b.defaulted);
  EXPECT_EQ(b.z.re().to_double(), 0.5);
}

TEST(Inventory, SheetPolesRingsAndPoles) {
  // the first six rings hold ten points, four of them poles
  Inventory inv = inventory(parse(kSheetPoles), 400);
  ASSERT_GE(inv.rings.size(), 6u);
  std::size_t points = 0;
  int poles = 0;
  for (std::size_t k = 0; k < 6; ++k)
    for (const auto& p : inv.rings[k].members) {
      ++points;
      poles += p.is_pole;
    }
  EXPECT_EQ(points, 10u);
  EXPECT_EQ(poles, 4);
  const double moduli[] = {0.019968, 0.1, 0.3288, 0.4943, 0.5004, 0.5489};
  for (std::size_t k = 0; k < 6; ++k) EXPECT_LT(rel(inv.rings[k].modulus.re().to_double(), moduli[k]), 5e-4) << k;
  EXPECT_TRUE(inv.rings[0].members[0].is_pole);
  EXPECT_TRUE(inv.rings[1].members[0].is_pole);
  EXPECT_TRUE(inv.rings[4].members[0].is_pole);
  EXPECT_FALSE(inv.rings[2].members[0].is_pole);
}

TEST(Inventory, MixedCyclesRings) {
  Inventory inv = inventory(parse(kMixedCycles), 400);
  ASSERT_GE(inv.rings.size(), 4u);
  const double moduli[] = {0.002469, 0.3329, 0.3341, 0.6364};
  const std::size_t sizes[] = {1, 2, 1, 2};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_LT(rel(inv.rings[k].modulus.re().to_double(), moduli[k]), 5e-4) << k;
    EXPECT_EQ(inv.rings[k].members.size(), sizes[k]) << k;
  }
}

TEST(Inventory, Inverse55Moduli) {
  Inventory inv = inventory(parse(kInverse55), 300);
  ASSERT_EQ(inv.rings.size(), 9u);
  const double moduli[] = {2.12e10, 3.69e10, 7.24e12, 2.34e13, 3.75e16, 1.95e21, 4.79e26, 2.9e32, 2.39e38};
  for (std::size_t k = 0; k < 9; ++k) EXPECT_LT(rel(inv.rings[k].modulus.re().to_double(), moduli[k]), 5e-3) << k;
}

TEST(Inventory, WithoutRingsRenumbers) {
  Inventory inv = inventory(parse(kSheetPoles), 200);
  Inventory cut = without_rings(inv, {1});
  ASSERT_EQ(cut.rings.size(), inv.rings.size() - 1);
  EXPECT_EQ(cut.rings[0].index, 1);
  EXPECT_EQ(cut.rings[0].modulus.re().to_double(), inv.rings[1].modulus.re().to_double());
}

TEST(Labels, SheetPolesValuesAtBasePoint) {
  BiPoly f = parse(kSheetPoles);
  Inventory inv = inventory(f, 400);
  ExpandConfig cfg;
  cfg.terms = 64;
  Basis b = expand_basis(f, cfg);
  SigComplex zm = base_point(inv, digits_to_bits(400) + 16).z;
  auto labels = sort_branches(f, b.series, zm, 400);
  ASSERT_EQ(labels.size(), 8u);
  const double expect[8][2] = {{-0.790, 0},        {-0.5016, -0.6319}, {-0.5016, 0.6319}, {0.1807, -0.7589},
                               {0.1807, 0.7589},   {0.7162, -0.3666},  {0.7162, 0.3666},  {11113, 0}};
  for (std::size_t k = 0; k < 8; ++k) {
    EXPECT_EQ(labels[k].label.index, static_cast<int>(k) + 1);
    SigComplex v = eval(b.series[labels[k].basis_index], 0, zm);
    double tol = k == 7 ? 1 : 1e-3;
    EXPECT_NEAR(v.re().to_double(), expect[k][0], tol) << k;
    EXPECT_NEAR(v.im().to_double(), expect[k][1], tol) << k;
  }
}
