#include <gtest/gtest.h>

#include "puiseux/continuation.hpp"
#include "puiseux/errors.hpp"
#include "puiseux/report.hpp"

using namespace puiseux;

namespace {

mpq_class q(const long (&x)[2]) { return mpq_class(x[0], x[1]); }

RadiusConfig small_config() {
  RadiusConfig cfg;
  cfg.digits = 100;
  cfg.terms = 32;
  cfg.checks = 20;
  return cfg;
}

}  // namespace

// Quadrature conditions sum b_i c_i^k = 1/(k+1) for both weight sets and
// the row-sum condition sum_j a_ij = c_i, in exact arithmetic.
TEST(Rkf78, OrderConditions) {
  const Rkf78Tableau& t = rkf78();
  for (int i = 0; i < Rkf78Tableau::stages; ++i) {
    mpq_class row = 0;
    for (int j = 0; j < i; ++j) row += q(t.a[i][j]);
    EXPECT_EQ(row, q(t.c[i])) << "row " << i;
  }
  for (int k = 0; k <= 7; ++k) {
    mpq_class s7 = 0, s8 = 0;
    for (int i = 0; i < Rkf78Tableau::stages; ++i) {
      mpq_class ck = 1;
      for (int m = 0; m < k; ++m) ck *= q(t.c[i]);
      s7 += q(t.b7[i]) * ck;
      s8 += q(t.b8[i]) * ck;
    }
    if (k <= 6) EXPECT_EQ(s7, mpq_class(1, k + 1)) << "7th order, k = " << k;
    EXPECT_EQ(s8, mpq_class(1, k + 1)) << "8th order, k = " << k;
  }
  // sum b_i a_ij c_j = 1/6
  mpq_class s = 0;
  for (int i = 0; i < Rkf78Tableau::stages; ++i)
    for (int j = 0; j < i; ++j) s += q(t.b8[i]) * q(t.a[i][j]) * q(t.c[j]);
  EXPECT_EQ(s, mpq_class(1, 6));
}

TEST(Integrate, SquareRootAlongRealAxis) {
  BiPoly f = parse("w^2-z");
  long bits = 256;
  OdeConfig cfg;
  IntegrationTrace t =
      integrate(f, SigComplex::exact(1, bits), SigComplex::exact(1, bits), SigComplex::exact(4, bits), cfg);
  EXPECT_LT(log10_dist(t.value.value(), Complex(2, bits)), -25);
  EXPECT_GT(t.steps, 0);
}

TEST(Integrate, ComplexPathFollowsBranch) {
  // w^3 = z from 1 to i: principal cube root e^{i pi/6}
  BiPoly f = parse("w^3-z");
  long bits = 256;
  OdeConfig cfg;
  SigComplex zi(Complex(Real(bits), Real(1, bits)), -1000);
  IntegrationTrace t = integrate(f, SigComplex::exact(1, bits), SigComplex::exact(1, bits), zi, cfg);
  Real half(mpq_class(1, 2), bits), r3(3, bits);
  mpfr_sqrt(r3.get(), r3.get(), MPFR_RNDN);
  mpfr_mul(r3.get(), r3.get(), half.get(), MPFR_RNDN);
  EXPECT_LT(log10_dist(t.value.value(), Complex(r3, half)), -25);
}

TEST(Integrate, SingularTargetFails) {
  // f_w vanishes at the endpoint
  BiPoly f = parse("w^2-z");
  long bits = 256;
  OdeConfig cfg;
  cfg.max_steps = 2000;
  EXPECT_THROW(integrate(f, SigComplex::exact(1, bits), SigComplex::exact(1, bits), SigComplex::exact(0, bits), cfg),
               IntegrationError);
}

TEST(LocalBasis, RamifiedAndPole) {
  ExpandConfig cfg;
  cfg.digits = 60;
  cfg.terms = 8;
  long bits = 256;
  LocalBasis a = local_basis(parse("w^2-(1-z)"), SigComplex::exact(1, bits), cfg);
  ASSERT_EQ(a.branches.size(), 1u);
  EXPECT_TRUE(a.branches[0].ramified);
  LocalBasis b = local_basis(parse("(1-z)w-1"), SigComplex::exact(1, bits), cfg);
  ASSERT_EQ(b.branches.size(), 1u);
  EXPECT_TRUE(b.branches[0].pole);
  EXPECT_THROW(local_basis(parse("w^2-(1-z)"), SigComplex::exact(2, bits), cfg), InvariantViolation);
}

// sqrt(1-z): coefficients below 0.29 k^(-3/2), so 256 terms leave a tail
// under 6e-4 at |z| = 0.99
TEST(Radius, BranchPointAtOne) {
  RadiusConfig cfg = small_config();
  cfg.terms = 256;
  RadiusReport r = radius_all(parse("w^2-(1-z)"), cfg);
  ASSERT_EQ(r.results.size(), 2u);
  for (const auto& c : r.results) {
    ASSERT_TRUE(c.ring.has_value());
    EXPECT_EQ(*c.ring, 1);
    EXPECT_NEAR(c.modulus.re().to_double(), 1, 1e-15);
    ASSERT_TRUE(c.log10_max_error.has_value());
    EXPECT_LT(*c.log10_max_error, -3);
  }
}

TEST(Radius, PoleAtOne) {
  RadiusReport r = radius_all(parse("(1-z)w-1"), small_config());
  ASSERT_EQ(r.results.size(), 1u);
  ASSERT_TRUE(r.results[0].ring.has_value());
  EXPECT_EQ(*r.results[0].ring, 1);
  StraddleResult s = straddle_test(r, r.results[0], 4096);
  EXPECT_TRUE(s.agrees());
}

TEST(Radius, RandomPointCheckSmallInsideRadius) {
  ExpandConfig cfg;
  cfg.digits = 60;
  cfg.terms = 64;
  Basis b = expand_basis(parse("(1-z)w-1"), cfg);
  double e = random_point_check(parse("(1-z)w-1"), b.series[0], 1.0, 50, 7);
  EXPECT_LT(e, 1e-3);
}

TEST(Radius, MaxRingStopsScan) {
  // only the branch with the pole at -0.02 is assigned in the first two rings
  RadiusConfig cfg;
  cfg.digits = 200;
  cfg.checks = 5;
  cfg.max_ring = 2;
  RadiusReport r = radius_all(parse("(3+4z)+(-6z^2-3/2z^5)w+(1/2-16z+7/8z^2)w^2+(3/4-2z+12z^4)w^3+"
                                    "(15+z^2/3+22/15z^3)w^7+(-1/1000-z/25+z^2/2-z^3/5+2z^4)w^8"),
                              cfg);
  EXPECT_FALSE(r.complete);
  for (const auto& s : r.steps) EXPECT_LE(s.ring, 2);
  int assigned = 0;
  for (const auto& c : r.results) {
    if (!c.ring) continue;
    ++assigned;
    EXPECT_EQ(c.label.index, 8);
    EXPECT_EQ(*c.ring, 1);
  }
  EXPECT_EQ(assigned, 1);
}

TEST(Radius, ReportsAreReproducible) {
  const char* text = "(1-z)w^2-z";
  RunConfig rc;
  rc.precision = 100;
  rc.terms = 32;
  rc.checks = 20;
  rc.seed = 42;
  auto a = radius_document(radius_all(parse(text), rc.radius()), text, rc).dump();
  auto b = radius_document(radius_all(parse(text), rc.radius()), text, rc).dump();
  EXPECT_EQ(a, b);
}
