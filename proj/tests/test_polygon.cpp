#include <gtest/gtest.h>

#include <algorithm>

#include "puiseux/polygon.hpp"

using namespace puiseux;

namespace {

std::vector<long> cycles(const PolygonNode& root) {
  std::vector<long> d;
  for (const Leaf* l : collect_leaves(root)) d.push_back(l->d);
  std::sort(d.begin(), d.end());
  return d;
}

PolygonNode tree_of(const char* text, double digits = 200) {
  Normalized n = normalize(parse(text));
  PolygonConfig cfg{digits, digits - 10, digits - 10};
  return build_tree(FracPoly::from(n.g, digits_to_bits(digits) + 16), cfg, nullptr);
}

}  // namespace

TEST(LowerLeg, CollinearPointsFormOneSegment) {
  std::vector<PolyPoint> pts{{0, 2}, {1, 1}, {2, 0}};
  auto leg = lower_leg(pts, true);
  ASSERT_EQ(leg.size(), 1u);
  EXPECT_EQ(leg[0].lambda, 1);
  EXPECT_EQ(leg[0].beta, 2);
  EXPECT_EQ(leg[0].points.size(), 3u);
}

TEST(LowerLeg, SlopesDecreaseAndZeroSlopeOptional) {
  // points (0,5), (1,2), (2,1), (3,1)
  std::vector<PolyPoint> pts{{0, 5}, {1, 2}, {2, 1}, {3, 1}};
  auto leg = lower_leg(pts, false);
  ASSERT_EQ(leg.size(), 3u);
  EXPECT_EQ(leg[0].lambda, 3);
  EXPECT_EQ(leg[1].lambda, 1);
  EXPECT_EQ(leg[2].lambda, 0);
  EXPECT_EQ(lower_leg(pts, true).size(), 2u);
}

TEST(LowerLeg, PointsAboveHullAreIgnored) {
  std::vector<PolyPoint> pts{{0, 4}, {1, 3}, {2, 0}};
  auto leg = lower_leg(pts, true);
  ASSERT_EQ(leg.size(), 1u);
  EXPECT_EQ(leg[0].lambda, 2);
  EXPECT_EQ(leg[0].points.size(), 2u);
}

TEST(Normalize, PoleAtOriginRemoved) {
  // z w^2 - 1: branches ~ z^(-1/2), normal exponent 1
  Normalized n = normalize(parse("z*w^2-1"));
  EXPECT_EQ(n.E, 1);
  // g has a constant leading coefficient
  EXPECT_EQ(n.g.leading().order(), 0);
}

TEST(CharEq, OrbitReduction) {
  // w^4 - z: one segment, K(x) = x^4 - 1 = Kt(x^4) with q = 4
  PolygonNode t = tree_of("w^4-z", 60);
  ASSERT_EQ(t.char_eqs.size(), 1u);
  EXPECT_EQ(t.char_eqs[0].q, 4);
  EXPECT_EQ(cycles(t), (std::vector<long>{4}));
}

TEST(PolygonTree, ThreeLevelDescentWithTwoSixCycles) {
  PolygonNode t = tree_of("((w^3+z^2)^2+z^3w^2)^2+z^7w^3", 200);
  EXPECT_EQ(tree_depth(t), 3);
  EXPECT_EQ(cycles(t), (std::vector<long>{6, 6}));
}

TEST(PolygonTree, MixedCyclesSumToDegree) {
  PolygonNode t = tree_of(
      "(z^14+3z^15)+(2z^15+2z^16)w+(3z^15-20z^16)w^2+(4z^15)w^3+(10z^5-z^6+2z^7)w^4+(8z^10)w^5+(9z^10)w^6+"
      "(20z)w^7+(3z)w^8+2w^9+5w^10");
  EXPECT_EQ(cycles(t), (std::vector<long>{1, 2, 3, 4}));
}

TEST(PolygonTree, DumpIsJson) {
  PolygonNode t = tree_of("w^2-z", 60);
  std::string d = dump_tree(t);
  EXPECT_NE(d.find("segments"), std::string::npos);
}
