#include <gtest/gtest.h>

#include <random>

#include "puiseux/errors.hpp"
#include "puiseux/numerics.hpp"

using namespace puiseux;

namespace {

// |x - q| for a complex value against an exact rational pair, as log10.
double log10_gap(const SigComplex& x, const mpq_class& re, const mpq_class& im) {
  long bits = x.bits() + 64;
  Complex exact(Real(re, bits), Real(im, bits));
  return log10_dist(x.value().with_bits(bits), exact);
}

SigComplex rational(const mpq_class& re, const mpq_class& im, long bits) {
  return SigComplex::exact(re, bits) + SigComplex::exact(im, bits) * SigComplex(Complex(Real(bits), Real(1, bits)), -1e300);
}

}  // namespace

TEST(Numerics, DigitsBitsRoundTrip) {
  for (double d : {10.0, 50.0, 400.0, 1000.0}) {
    EXPECT_GE(bits_to_digits(digits_to_bits(d)), d);
    EXPECT_LT(bits_to_digits(digits_to_bits(d)), d + 1);
  }
}

TEST(Numerics, ExactRationalsStayExactWhenBinary) {
  SigComplex a = SigComplex::exact(mpq_class(3, 4), 128);
  EXPECT_TRUE(a.is_exact());
  SigComplex b = SigComplex::exact(mpq_class(1, 3), 128);
  EXPECT_FALSE(b.is_exact());
  EXPECT_LT(b.log10_error(), -37);
}

// Error bounds must contain the true error of random rational expressions.
TEST(Numerics, ErrorBoundsContainTrueErrorProperty) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 997);
  for (int trial = 0; trial < 200; ++trial) {
    mpq_class ar(num(rng), den(rng)), ai(num(rng), den(rng)), br(num(rng), den(rng)), bi(num(rng), den(rng));
    ar.canonicalize();
    ai.canonicalize();
    br.canonicalize();
    bi.canonicalize();
    long bits = 80;
    SigComplex a = rational(ar, ai, bits), b = rational(br, bi, bits);
    // product (ar + i ai)(br + i bi)
    mpq_class pr = ar * br - ai * bi, pi = ar * bi + ai * br;
    SigComplex p = a * b;
    EXPECT_LE(log10_gap(p, pr, pi), p.log10_error() + 1e-9);
    mpq_class sr = ar + br, si = ai + bi;
    SigComplex s = a + b;
    EXPECT_LE(log10_gap(s, sr, si), s.log10_error() + 1e-9);
    if (br != 0 || bi != 0) {
      mpq_class n2 = br * br + bi * bi;
      mpq_class qr = (ar * br + ai * bi) / n2, qi = (ai * br - ar * bi) / n2;
      SigComplex q = a / b;
      EXPECT_LE(log10_gap(q, qr, qi), q.log10_error() + 1e-9);
    }
  }
}

TEST(Numerics, CancellationLosesSignificance) {
  long bits = 64;
  SigComplex x = SigComplex::with_precision(Complex(Real(1, bits), Real(bits)), 10);
  SigComplex y = SigComplex::with_precision(Complex(Real(1, bits), Real(bits)), 10);
  SigComplex d = x - y;
  EXPECT_TRUE(is_numerically_zero(d));
  EXPECT_TRUE(numerically_equal(x, y));
}

TEST(Numerics, NumericallyZeroAtWorkingAccuracy) {
  long bits = 200;
  Real tiny(bits);
  mpfr_set_str(tiny.get(), "1e-45", 10, MPFR_RNDN);
  SigComplex t(Complex(tiny, Real(bits)), -55);
  EXPECT_FALSE(is_numerically_zero(t));
  EXPECT_TRUE(is_numerically_zero(t, 40));
  EXPECT_FALSE(is_numerically_zero(t, 50));
}

TEST(Numerics, PrincipalRootAndUnitRoots) {
  long bits = 256;
  SigComplex m4 = SigComplex::exact(-4, bits);
  SigComplex r = principal_root(m4, 2);
  // principal sqrt(-4) = 2i
  EXPECT_LT(log10_gap(r, 0, 2), -70);
  for (long d : {3L, 5L, 12L}) {
    SigComplex u = sig_unit_root(1, d, bits);
    SigComplex p = pow(u, d);
    EXPECT_LT(log10_gap(p, 1, 0), -70) << d;
  }
}

TEST(Numerics, SigTextRoundTrip) {
  long bits = 300;
  SigComplex x = SigComplex::exact(mpq_class(22, 7), bits) + rational(0, mpq_class(-5, 3), bits);
  SigComplex y = parse_sig(format_sig(x));
  EXPECT_LT(log10_dist(x.value(), y.value()), -85);
  EXPECT_NEAR(x.log10_error(), y.log10_error(), 1.0);
  EXPECT_THROW(parse_sig("1.5@@"), ParseError);
}

TEST(Numerics, FormatShort) {
  EXPECT_EQ(std::stod(format_short(Real(mpq_class(1, 4), 64), 3)), 0.25);
  EXPECT_EQ(std::stod(format_short(Real(-3, 64), 4)), -3);
  // three significant digits of 1/3
  EXPECT_NEAR(std::stod(format_short(Real(mpq_class(1, 3), 64), 3)), 0.333, 1e-12);
}
