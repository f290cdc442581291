#include <gtest/gtest.h>

#include <algorithm>
#include <complex>

#include "puiseux/errors.hpp"
#include "puiseux/roots.hpp"

using namespace puiseux;

namespace {

// (x-1)(x-2)^2(x-3)^3(x-4)^4
UniPoly clustered_poly() {
  return UniPoly({27648, -110592, 192384, -192832, 123852, -53428, 15715, -3118, 400, -30, 1});
}

std::vector<int> multiplicities(const std::vector<RootCluster>& cl) {
  std::vector<int> m;
  for (const auto& c : cl) m.push_back(c.multiplicity);
  std::sort(m.begin(), m.end());
  return m;
}

}  // namespace

TEST(Roots, SimpleRootsOfKnownPolynomial) {
  // (x^2+1)(x-1/3)
  UniPoly p({mpq_class(-1, 3), 1, mpq_class(-1, 3), 1});
  auto r = roots(p, 100);
  ASSERT_EQ(r.size(), 3u);
  long bits = 400;
  Complex third(Real(mpq_class(1, 3), bits), Real(bits));
  Complex plus_i(Real(bits), Real(1, bits)), minus_i(Real(bits), Real(-1, bits));
  EXPECT_LT(log10_dist(r[0].value(), minus_i), -95);
  EXPECT_LT(log10_dist(r[1].value(), plus_i), -95);
  EXPECT_LT(log10_dist(r[2].value(), third), -95);
}

TEST(Roots, ZeroRootsAreExact) {
  auto r = roots(UniPoly({0, 0, -1, 1}), 50);
  ASSERT_EQ(r.size(), 3u);
  int zeros = 0;
  for (const auto& x : r) zeros += x.value().is_zero() && x.is_exact();
  EXPECT_EQ(zeros, 2);
}

// Machine-precision roots are ten distinct numbers; grouping at a few digits
// recovers the multiplicities.
TEST(Clustering, MachinePrecisionRootsAndReducedAccuracy) {
  NumPoly p = to_num(clustered_poly(), 53);
  std::vector<SigComplex> r = roots(p, 15);
  ASSERT_EQ(r.size(), 10u);
  std::vector<SigComplex> plain;
  for (const auto& x : r) plain.emplace_back(x.value(), -15);
  EXPECT_EQ(cluster(plain, 15).size(), 10u);
  auto cl = cluster(plain, 2);
  EXPECT_EQ(multiplicities(cl), (std::vector<int>{1, 2, 3, 4}));
}

TEST(Clustering, HighPrecisionClusteredRoots) {
  NumPoly p = to_num(clustered_poly(), digits_to_bits(400) + 16);
  auto cl = clustered_roots(p, 400, 390);
  ASSERT_EQ(cl.size(), 4u);
  EXPECT_EQ(multiplicities(cl), (std::vector<int>{1, 2, 3, 4}));
  for (const auto& c : cl) {
    long k = c.multiplicity;  // root k has multiplicity k
    Complex exact(k, c.center.bits());
    EXPECT_LT(log10_dist(c.center.value(), exact), -100) << k;
  }
}

TEST(Clustering, InclusionRadiiReflectMultiplicity) {
  NumPoly p = to_num(clustered_poly(), digits_to_bits(60) + 16);
  auto r = isolate(p, 60);
  ASSERT_EQ(r.size(), 10u);
  for (const auto& x : r) {
    double re = x.re().to_double();
    Complex nearest(static_cast<long>(std::lround(re)), x.bits());
    // every inclusion disk holds its exact root
    EXPECT_LE(log10_dist(x.value(), nearest), x.log10_error() + 1e-6);
  }
}

TEST(Fiber, SortedWithSeparation) {
  BiPoly f = parse("w^3-z");
  long bits = 300;
  SigComplex z = SigComplex::exact(8, bits);
  Fiber fb = fiber(f, z, 80);
  ASSERT_EQ(fb.roots.size(), 3u);
  // roots 2, 2 e^{+-2 pi i/3}; sorted by real part then imaginary
  EXPECT_LT(log10_dist(fb.roots[2].value(), Complex(2, bits)), -75);
  EXPECT_LT(fb.roots[0].im().to_double(), fb.roots[1].im().to_double());
  EXPECT_NEAR(fb.p_min.re().to_double(), 2 * std::sqrt(3.0), 1e-12);
  for (double s : fb.log10_separation) EXPECT_NEAR(s, std::log10(2 * std::sqrt(3.0)), 1e-12);
}

TEST(Fiber, AllRootsZero) {
  Fiber fb = fiber(parse("w^2-(1-z)"), SigComplex::exact(1, 200), 50);
  ASSERT_EQ(fb.roots.size(), 2u);
  for (const auto& r : fb.roots) EXPECT_TRUE(r.value().is_zero());
}

TEST(Fiber, DegenerateLeadingCoefficient) {
  BiPoly f = parse("(1-z)w^2+w+1");
  EXPECT_THROW(fiber(f, SigComplex::exact(1, 128), 30), DegenerateFiberError);
}

TEST(Match, AssignsAndRejects) {
  BiPoly f = parse("w^2-4");
  long bits = 200;
  Fiber fb = fiber(f, SigComplex::exact(0, bits), 50);
  std::vector<SigComplex> vals{SigComplex::exact(mpq_class(2000001, 1000000), bits), SigComplex::exact(-2, bits)};
  Assignment a = match(vals, fb, 100);
  EXPECT_EQ(a.index[0], 1u);
  EXPECT_EQ(a.index[1], 0u);
  // 0.05 away: tolerance is 4/100
  vals[0] = SigComplex::exact(mpq_class(205, 100), bits);
  EXPECT_THROW(match(vals, fb, 100), MatchToleranceError);
  // two values on one root
  vals = {SigComplex::exact(2, bits), SigComplex::exact(2, bits)};
  EXPECT_THROW(match(vals, fb, 100), AmbiguousMatchError);
}

TEST(Match, GlobalRuleUsesSmallestSeparation) {
  // roots 0, 1e-3, 10: value 10.0005 passes locally (10/100) but not globally (1e-5)
  BiPoly f = parse("w(w-1/1000)(w-10)");
  long bits = 200;
  Fiber fb = fiber(f, SigComplex::exact(0, bits), 50);
  std::vector<SigComplex> v{SigComplex::exact(mpq_class(100005, 10000), bits)};
  EXPECT_NO_THROW(match(v, fb, 100, MatchRule::local));
  EXPECT_THROW(match(v, fb, 100, MatchRule::global), MatchToleranceError);
}
