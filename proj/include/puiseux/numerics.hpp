#pragma once

// Multiprecision real/complex values and significance-tracked complex numbers.
//
// Real and Complex are thin RAII wrappers over MPFR. SigComplex adds an
// absolute error bound carried as log10(error), so every value knows how many
// digits to the right of the decimal point are trustworthy (its accuracy).
//
// Propagation table (e_x is the error bound of x, |x| its magnitude, u the
// unit roundoff 2^(1-bits) of the result):
//
//   a + b, a - b : e = e_a + e_b                        (+ 2u|r| if rounded)
//   a * b        : e = |a| e_b + |b| e_a + e_a e_b       (+ 2u|r| if rounded)
//   a / b        : e = (e_a + |q| e_b) / (|b| - e_b)     (+ 4u|q|)
//                  no significance at all if e_b >= |b|
//   x^(1/n)      : e = |r| (e_x / |x|) / n               (+ 4u|r|)
//
// Values converted from exact rationals that are representable in binary are
// exact (error bound zero); everything else starts at half an ulp.

#include <mpfr.h>
#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace puiseux {

/// Binary precision needed to hold `digits` decimal digits.
long digits_to_bits(double digits);
/// Decimal digits represented by a binary precision.
double bits_to_digits(long bits);

class Real {
 public:
  explicit Real(long bits = 64);
  Real(long value, long bits);
  Real(const mpq_class& value, long bits);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  /// Parses a decimal literal; returns nullopt on malformed text.
  static std::optional<Real> parse(std::string_view text, long bits);

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  long bits() const { return static_cast<long>(mpfr_get_prec(v_)); }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// log10|x|, -inf for zero. Accurate to double precision.
  double log10_abs() const;

  /// Same value rounded to a different precision.
  Real with_bits(long bits) const;

  /// Shortest decimal that reads back bit-identically at this precision.
  std::string to_string() const;
  /// Decimal with a fixed number of significant digits.
  std::string to_string(int digits) const;

 private:
  mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator-(const Real& a);
bool operator<(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);
Real abs(const Real& x);
Real sqrt(const Real& x);

/// Plain multiprecision complex number (no error tracking).
struct Complex {
  Real re;
  Real im;

  explicit Complex(long bits = 64) : re(bits), im(bits) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(long value, long bits) : re(value, bits), im(bits) {}
  Complex(const mpq_class& value, long bits) : re(value, bits), im(bits) {}

  long bits() const { return std::max(re.bits(), im.bits()); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  double log10_abs() const;
  Complex with_bits(long bits) const { return {re.with_bits(bits), im.with_bits(bits)}; }
  Complex conj() const { return {re, -im}; }
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator-(const Complex& a);
Real abs(const Complex& z);
Complex polar(const Real& modulus, const Real& angle);
/// exp(2 pi i j / d).
Complex unit_root(long j, long d, long bits);
/// Principal branch: exp(log(z) / n), argument in (-pi, pi].
Complex principal_root(const Complex& z, long n);
Complex pow(const Complex& z, long k);
Real arg(const Complex& z);
/// Distance |a - b| as log10, -inf when equal.
double log10_dist(const Complex& a, const Complex& b);

/// log10(10^a + 10^b) with -inf treated as zero.
double log10_sum(double a, double b);

/// Complex value with an absolute error bound.
class SigComplex {
 public:
  explicit SigComplex(long bits = 64);
  SigComplex(Complex value, double log10_error);

  /// Exact conversion of a rational (error bound only from rounding).
  static SigComplex exact(const mpq_class& value, long bits);
  static SigComplex exact(long value, long bits);
  /// Value known to `precision` significant digits.
  static SigComplex with_precision(Complex value, double precision);

  const Complex& value() const { return v_; }
  const Real& re() const { return v_.re; }
  const Real& im() const { return v_.im; }
  long bits() const { return v_.bits(); }

  /// log10 of the absolute error bound; -inf for exact values, +inf when no
  /// digit is significant.
  double log10_error() const { return lerr_; }
  /// Digits to the right of the decimal point that are significant.
  double accuracy() const { return -lerr_; }
  /// Total significant digits, accuracy + log10|x| (0 for exact zero).
  double precision() const;
  double log10_abs() const { return v_.log10_abs(); }
  bool is_exact() const { return lerr_ == -std::numeric_limits<double>::infinity(); }

  SigComplex conj() const { return {v_.conj(), lerr_}; }
  SigComplex with_bits(long bits) const;

 private:
  Complex v_;
  double lerr_;
};

SigComplex operator+(const SigComplex& a, const SigComplex& b);
SigComplex operator-(const SigComplex& a, const SigComplex& b);
SigComplex operator*(const SigComplex& a, const SigComplex& b);
SigComplex operator/(const SigComplex& a, const SigComplex& b);
SigComplex operator-(const SigComplex& a);
SigComplex& operator+=(SigComplex& a, const SigComplex& b);
SigComplex& operator-=(SigComplex& a, const SigComplex& b);
SigComplex& operator*=(SigComplex& a, const SigComplex& b);
SigComplex pow(const SigComplex& z, long k);
SigComplex principal_root(const SigComplex& z, long n);
SigComplex sig_unit_root(long j, long d, long bits);

/// make(re, im, precision): decimal texts known to `precision` digits.
/// Throws ParseError on malformed text.
SigComplex make(std::string_view re_text, std::string_view im_text, int precision);

/// True when x has no significant digit once its accuracy is capped at
/// `working_accuracy`, i.e. |x| <= max(error(x), 10^-working_accuracy).
bool is_numerically_zero(const SigComplex& x, double working_accuracy);
/// Same as above using only the value's own error bound.
bool is_numerically_zero(const SigComplex& x);
/// Caps the accuracy at `digits`. Never increases accuracy.
SigComplex reduce_accuracy(const SigComplex& x, double digits);
/// Numerical equality: the difference is numerically zero.
bool numerically_equal(const SigComplex& a, const SigComplex& b);

/// Text form "re@P~A" or "re,im@P~A": mantissa digits P (working precision
/// of the stored value) and accuracy A ("inf" for exact). The "~A" part is
/// optional on input; without it the value is taken to be known to P digits.
std::string format_sig(const SigComplex& x);
SigComplex parse_sig(std::string_view text);
/// Short human-readable form with `digits` significant digits.
std::string format_short(const Complex& z, int digits = 6);
std::string format_short(const Real& x, int digits = 6);

}  // namespace puiseux
