#include "puiseux/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "puiseux/errors.hpp"

namespace puiseux {

namespace {

constexpr double kLog10_2 = 0.30102999566398119521;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

// x + y in log space where -inf means zero and +inf means unbounded.
double log10_mul(double x, double y) {
  if (x == kNegInf || y == kNegInf) return kNegInf;
  return x + y;
}

// log10 of the rounding error committed when producing a value of
// magnitude 10^lmag at `bits` precision, scaled by `ulps`.
double rounding_error(double lmag, long bits, double ulps) {
  if (lmag == kNegInf) return kNegInf;
  return lmag + (1 - bits) * kLog10_2 + std::log10(ulps);
}

}  // namespace

long digits_to_bits(double digits) {
  return std::max(2L, static_cast<long>(std::ceil(digits / kLog10_2)));
}

double bits_to_digits(long bits) { return static_cast<double>(bits) * kLog10_2; }

double log10_sum(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a == kPosInf || b == kPosInf) return kPosInf;
  double hi = std::max(a, b);
  double lo = std::min(a, b);
  return hi + std::log10(1.0 + std::pow(10.0, lo - hi));
}

// ---------------------------------------------------------------- Real

Real::Real(long bits) {
  mpfr_init2(v_, bits);
  mpfr_set_zero(v_, 1);
}

Real::Real(long value, long bits) {
  mpfr_init2(v_, bits);
  mpfr_set_si(v_, value, MPFR_RNDN);
}

Real::Real(const mpq_class& value, long bits) {
  mpfr_init2(v_, bits);
  mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  *v_ = *other.v_;
  other.v_->_mpfr_d = nullptr;
}

Real& Real::operator=(const Real& other) {
  if (this == &other) return *this;
  if (v_->_mpfr_d == nullptr) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
  } else {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
  }
  mpfr_set(v_, other.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this == &other) return *this;
  if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
  *v_ = *other.v_;
  other.v_->_mpfr_d = nullptr;
  return *this;
}

Real::~Real() {
  if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
}

std::optional<Real> Real::parse(std::string_view text, long bits) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) return std::nullopt;
  // Reject anything MPFR would accept but is not a plain signed decimal.
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') ++i;
  bool digits = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, digits = true;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, digits = true;
  }
  if (!digits) return std::nullopt;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    bool exp_digits = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, exp_digits = true;
    if (!exp_digits) return std::nullopt;
  }
  if (i != s.size()) return std::nullopt;
  Real r(bits);
  if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0 && false) return std::nullopt;
  return r;
}

double Real::log10_abs() const {
  if (mpfr_zero_p(v_)) return kNegInf;
  long e = 0;
  double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
  return std::log10(std::fabs(m)) + static_cast<double>(e) * kLog10_2;
}

Real Real::with_bits(long bits) const {
  Real r(bits);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

std::string Real::to_string() const {
  auto digits = static_cast<int>(mpfr_get_str_ndigits(10, mpfr_get_prec(v_)));
  return to_string(digits);
}

std::string Real::to_string(int digits) const {
  if (mpfr_zero_p(v_)) return "0";
  if (!mpfr_number_p(v_)) return mpfr_nan_p(v_) ? "nan" : (mpfr_sgn(v_) > 0 ? "inf" : "-inf");
  mpfr_exp_t exp = 0;
  char* raw = mpfr_get_str(nullptr, &exp, 10, static_cast<std::size_t>(digits), v_, MPFR_RNDN);
  std::string mant(raw);
  mpfr_free_str(raw);
  bool neg = !mant.empty() && mant[0] == '-';
  if (neg) mant.erase(0, 1);
  // Strip trailing zeros of the mantissa; keep at least one digit.
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  std::ostringstream out;
  if (neg) out << '-';
  long e10 = static_cast<long>(exp) - 1;
  out << mant[0];
  if (mant.size() > 1) out << '.' << mant.substr(1);
  if (e10 != 0) out << 'e' << e10;
  return out.str();
}

Real operator+(const Real& a, const Real& b) {
  Real r(std::max(a.bits(), b.bits()));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r(std::max(a.bits(), b.bits()));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r(std::max(a.bits(), b.bits()));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r(std::max(a.bits(), b.bits()));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator-(const Real& a) {
  Real r(a.bits());
  mpfr_neg(r.get(), a.get(), MPFR_RNDN);
  return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }

Real abs(const Real& x) {
  Real r(x.bits());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  Real r(x.bits());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

// ---------------------------------------------------------------- Complex

double Complex::log10_abs() const {
  double a = re.log10_abs();
  double b = im.log10_abs();
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = std::max(a, b);
  double lo = std::min(a, b);
  return hi + 0.5 * std::log10(1.0 + std::pow(10.0, 2.0 * (lo - hi)));
}

Complex operator+(const Complex& a, const Complex& b) {
  long bits = std::max(a.bits(), b.bits());
  Complex r(bits);
  mpfr_add(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return r;
}

Complex operator-(const Complex& a, const Complex& b) {
  long bits = std::max(a.bits(), b.bits());
  Complex r(bits);
  mpfr_sub(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_sub(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return r;
}

Complex operator*(const Complex& a, const Complex& b) {
  long bits = std::max(a.bits(), b.bits());
  Complex r(bits);
  mpfr_fmms(r.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_fmma(r.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  return r;
}

Complex operator*(const Complex& a, const Real& b) {
  long bits = std::max(a.bits(), b.bits());
  Complex r(bits);
  mpfr_mul(r.re.get(), a.re.get(), b.get(), MPFR_RNDN);
  mpfr_mul(r.im.get(), a.im.get(), b.get(), MPFR_RNDN);
  return r;
}

Complex operator/(const Complex& a, const Complex& b) {
  long bits = std::max(a.bits(), b.bits());
  long wide = bits + 16;
  Real den(wide);
  mpfr_fmma(den.get(), b.re.get(), b.re.get(), b.im.get(), b.im.get(), MPFR_RNDN);
  Real nre(wide), nim(wide);
  mpfr_fmma(nre.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_fmms(nim.get(), a.im.get(), b.re.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  Complex r(bits);
  mpfr_div(r.re.get(), nre.get(), den.get(), MPFR_RNDN);
  mpfr_div(r.im.get(), nim.get(), den.get(), MPFR_RNDN);
  return r;
}

Complex operator-(const Complex& a) { return {-a.re, -a.im}; }

Real abs(const Complex& z) {
  Real r(z.bits());
  mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
  return r;
}

Real arg(const Complex& z) {
  Real r(z.bits());
  mpfr_atan2(r.get(), z.im.get(), z.re.get(), MPFR_RNDN);
  return r;
}

Complex polar(const Real& modulus, const Real& angle) {
  long bits = std::max(modulus.bits(), angle.bits());
  Real s(bits), c(bits);
  mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
  return {c * modulus, s * modulus};
}

Complex unit_root(long j, long d, long bits) {
  long k = ((j % d) + d) % d;
  if (k == 0) return Complex(1, bits);
  if (2 * k == d) return Complex(-1, bits);
  Real angle(bits + 8);
  mpfr_const_pi(angle.get(), MPFR_RNDN);
  mpfr_mul_si(angle.get(), angle.get(), 2 * k, MPFR_RNDN);
  mpfr_div_si(angle.get(), angle.get(), d, MPFR_RNDN);
  Real s(bits), c(bits);
  mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
  return {c, s};
}

Complex principal_root(const Complex& z, long n) {
  long bits = z.bits();
  if (n == 1) return z;
  if (z.is_zero()) return Complex(bits);
  Real r = abs(z);
  mpfr_rootn_ui(r.get(), r.get(), static_cast<unsigned long>(n), MPFR_RNDN);
  Real a = arg(z);
  mpfr_div_si(a.get(), a.get(), n, MPFR_RNDN);
  return polar(r, a);
}

Complex pow(const Complex& z, long k) {
  long bits = z.bits();
  if (k < 0) return Complex(1, bits) / pow(z, -k);
  Complex result(1, bits);
  Complex base = z;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

double log10_dist(const Complex& a, const Complex& b) { return (a - b).log10_abs(); }

// ---------------------------------------------------------------- SigComplex

SigComplex::SigComplex(long bits) : v_(bits), lerr_(kNegInf) {}

SigComplex::SigComplex(Complex value, double log10_error)
    : v_(std::move(value)), lerr_(log10_error) {}

SigComplex SigComplex::exact(const mpq_class& value, long bits) {
  Complex v(bits);
  int t = mpfr_set_q(v.re.get(), value.get_mpq_t(), MPFR_RNDN);
  double lerr = t == 0 ? kNegInf : rounding_error(v.re.log10_abs(), bits, 0.5);
  return {std::move(v), lerr};
}

SigComplex SigComplex::exact(long value, long bits) {
  Complex v(bits);
  int t = mpfr_set_si(v.re.get(), value, MPFR_RNDN);
  double lerr = t == 0 ? kNegInf : rounding_error(v.re.log10_abs(), bits, 0.5);
  return {std::move(v), lerr};
}

SigComplex SigComplex::with_precision(Complex value, double precision) {
  double lmag = value.log10_abs();
  double lerr = lmag == kNegInf ? -precision : lmag - precision;
  return {std::move(value), lerr};
}

double SigComplex::precision() const {
  double lmag = v_.log10_abs();
  if (lmag == kNegInf) return 0.0;
  return lmag - lerr_;
}

SigComplex SigComplex::with_bits(long bits) const {
  if (bits >= v_.bits()) return {v_.with_bits(bits), lerr_};
  Complex v = v_.with_bits(bits);
  return {std::move(v), log10_sum(lerr_, rounding_error(v_.log10_abs(), bits, 1.0))};
}

SigComplex operator+(const SigComplex& a, const SigComplex& b) {
  long bits = std::max(a.bits(), b.bits());
  Complex r(bits);
  int t1 = mpfr_add(r.re.get(), a.re().get(), b.re().get(), MPFR_RNDN);
  int t2 = mpfr_add(r.im.get(), a.im().get(), b.im().get(), MPFR_RNDN);
  double lerr = log10_sum(a.log10_error(), b.log10_error());
  if (t1 != 0 || t2 != 0) lerr = log10_sum(lerr, rounding_error(r.log10_abs(), bits, 2.0));
  return {std::move(r), lerr};
}

SigComplex operator-(const SigComplex& a, const SigComplex& b) {
  long bits = std::max(a.bits(), b.bits());
  Complex r(bits);
  int t1 = mpfr_sub(r.re.get(), a.re().get(), b.re().get(), MPFR_RNDN);
  int t2 = mpfr_sub(r.im.get(), a.im().get(), b.im().get(), MPFR_RNDN);
  double lerr = log10_sum(a.log10_error(), b.log10_error());
  if (t1 != 0 || t2 != 0) lerr = log10_sum(lerr, rounding_error(r.log10_abs(), bits, 2.0));
  return {std::move(r), lerr};
}

SigComplex operator*(const SigComplex& a, const SigComplex& b) {
  long bits = std::max(a.bits(), b.bits());
  Complex r(bits);
  int t1 = mpfr_fmms(r.re.get(), a.re().get(), b.re().get(), a.im().get(), b.im().get(), MPFR_RNDN);
  int t2 = mpfr_fmma(r.im.get(), a.re().get(), b.im().get(), a.im().get(), b.re().get(), MPFR_RNDN);
  double la = a.log10_abs();
  double lb = b.log10_abs();
  double ea = a.log10_error();
  double eb = b.log10_error();
  double lerr;
  if (ea == kPosInf || eb == kPosInf) {
    lerr = kPosInf;
  } else {
    lerr = log10_sum(log10_sum(log10_mul(la, eb), log10_mul(lb, ea)), log10_mul(ea, eb));
  }
  if (t1 != 0 || t2 != 0) lerr = log10_sum(lerr, rounding_error(r.log10_abs(), bits, 2.0));
  return {std::move(r), lerr};
}

SigComplex operator/(const SigComplex& a, const SigComplex& b) {
  if (b.value().is_zero()) throw InvariantViolation("division by exact zero");
  long bits = std::max(a.bits(), b.bits());
  Complex q = a.value() / b.value();
  double lb = b.log10_abs();
  double eb = b.log10_error();
  double ea = a.log10_error();
  double lq = q.log10_abs();
  double lerr;
  if (eb >= lb || ea == kPosInf) {
    lerr = kPosInf;
  } else {
    double num = log10_sum(ea, log10_mul(lq, eb));
    double den = eb == kNegInf ? lb : lb + std::log10(1.0 - std::pow(10.0, eb - lb));
    lerr = num == kNegInf ? kNegInf : num - den;
  }
  lerr = log10_sum(lerr, rounding_error(lq, bits, 4.0));
  return {std::move(q), lerr};
}

SigComplex operator-(const SigComplex& a) { return {-a.value(), a.log10_error()}; }

SigComplex& operator+=(SigComplex& a, const SigComplex& b) { return a = a + b; }
SigComplex& operator-=(SigComplex& a, const SigComplex& b) { return a = a - b; }
SigComplex& operator*=(SigComplex& a, const SigComplex& b) { return a = a * b; }

SigComplex pow(const SigComplex& z, long k) {
  long bits = z.bits();
  if (k < 0) return SigComplex::exact(1, bits) / pow(z, -k);
  SigComplex result = SigComplex::exact(1, bits);
  SigComplex base = z;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

SigComplex principal_root(const SigComplex& z, long n) {
  if (n == 1) return z;
  long bits = z.bits();
  Complex r = principal_root(z.value(), n);
  double lz = z.log10_abs();
  double ez = z.log10_error();
  double lerr;
  if (lz == kNegInf) {
    lerr = ez == kNegInf ? kNegInf : ez / static_cast<double>(n);
  } else if (ez >= lz) {
    lerr = kPosInf;
  } else {
    lerr = log10_mul(r.log10_abs(), ez - lz - std::log10(static_cast<double>(n)));
  }
  lerr = log10_sum(lerr, rounding_error(r.log10_abs(), bits, 4.0));
  return {std::move(r), lerr};
}

SigComplex sig_unit_root(long j, long d, long bits) {
  long k = ((j % d) + d) % d;
  if (k == 0) return SigComplex::exact(1, bits);
  if (2 * k == d) return SigComplex::exact(-1, bits);
  return {unit_root(j, d, bits), rounding_error(0.0, bits, 2.0)};
}

SigComplex make(std::string_view re_text, std::string_view im_text, int precision) {
  if (precision < 1) throw ParseError("precision must be at least 1 digit");
  long bits = digits_to_bits(precision);
  auto re = Real::parse(re_text, bits);
  auto im = Real::parse(im_text, bits);
  if (!re || !im) {
    throw ParseError("malformed decimal: '" + std::string(re ? im_text : re_text) + "'");
  }
  return SigComplex::with_precision(Complex(std::move(*re), std::move(*im)), precision);
}

bool is_numerically_zero(const SigComplex& x, double working_accuracy) {
  double lmag = x.log10_abs();
  if (lmag == kNegInf) return true;
  return lmag <= std::max(x.log10_error(), -working_accuracy);
}

bool is_numerically_zero(const SigComplex& x) {
  double lmag = x.log10_abs();
  if (lmag == kNegInf) return true;
  return lmag <= x.log10_error();
}

SigComplex reduce_accuracy(const SigComplex& x, double digits) {
  return {x.value(), std::max(x.log10_error(), -digits)};
}

bool numerically_equal(const SigComplex& a, const SigComplex& b) {
  return is_numerically_zero(a - b);
}

// ---------------------------------------------------------------- text I/O

namespace {

std::string format_accuracy(double acc) {
  if (acc == kPosInf) return "inf";
  if (acc == kNegInf) return "-inf";
  std::ostringstream out;
  out.precision(17);
  out << acc;
  return out.str();
}

}  // namespace

std::string format_sig(const SigComplex& x) {
  std::ostringstream out;
  out << x.re().to_string();
  if (!x.im().is_zero()) out << ',' << x.im().to_string();
  // Mantissa digits are recorded so that parsing restores the same binary
  // precision; the accuracy is recorded separately.
  out << '@' << format_accuracy(bits_to_digits(x.bits())) << '~' << format_accuracy(x.accuracy());
  return out.str();
}

SigComplex parse_sig(std::string_view text) {
  auto at = text.find('@');
  if (at == std::string_view::npos) throw ParseError("missing '@precision' in '" + std::string(text) + "'");
  std::string_view number = text.substr(0, at);
  std::string_view annot = text.substr(at + 1);
  std::optional<double> accuracy;
  auto tilde = annot.find('~');
  std::string prec_text(annot.substr(0, tilde));
  if (tilde != std::string_view::npos) {
    std::string acc_text(annot.substr(tilde + 1));
    if (acc_text == "inf") {
      accuracy = kPosInf;
    } else if (acc_text == "-inf") {
      accuracy = kNegInf;
    } else {
      char* end = nullptr;
      double v = std::strtod(acc_text.c_str(), &end);
      if (end == acc_text.c_str() || *end != '\0') throw ParseError("malformed accuracy '" + acc_text + "'");
      accuracy = v;
    }
  }
  char* end = nullptr;
  double prec = std::strtod(prec_text.c_str(), &end);
  if (end == prec_text.c_str() || *end != '\0' || prec < 1) {
    throw ParseError("malformed precision '" + prec_text + "'");
  }
  long bits = digits_to_bits(prec);
  // Round-trip: bits_to_digits(digits_to_bits(d)) may exceed d by a fraction;
  // recover the exact bit count written by format_sig.
  long rounded = static_cast<long>(std::llround(prec / kLog10_2));
  if (std::fabs(bits_to_digits(rounded) - prec) < 1e-9) bits = rounded;
  auto comma = number.find(',');
  std::string_view re_text = number.substr(0, comma);
  std::string_view im_text = comma == std::string_view::npos ? std::string_view("0") : number.substr(comma + 1);
  auto re = Real::parse(re_text, bits);
  auto im = Real::parse(im_text, bits);
  if (!re || !im) throw ParseError("malformed decimal in '" + std::string(text) + "'");
  Complex v(std::move(*re), std::move(*im));
  if (accuracy) return {std::move(v), -*accuracy};
  return SigComplex::with_precision(std::move(v), prec);
}

std::string format_short(const Real& x, int digits) { return x.to_string(digits); }

std::string format_short(const Complex& z, int digits) {
  if (z.im.is_zero()) return z.re.to_string(digits);
  std::string im = abs(z.im).to_string(digits);
  if (z.re.is_zero()) return (z.im.sign() < 0 ? "-" : "") + im + "i";
  return z.re.to_string(digits) + (z.im.sign() < 0 ? "-" : "+") + im + "i";
}

}  // namespace puiseux
