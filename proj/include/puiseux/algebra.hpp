#pragma once

// Exact polynomials in z and w with rational coefficients, their numeric
// images, the discriminant-type resultant and the text/document formats.

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "puiseux/numerics.hpp"

namespace puiseux {

/// Polynomial in z with exact rational coefficients; c[k] multiplies z^k.
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// no coefficients.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<mpq_class> coeffs);
  static UniPoly constant(const mpq_class& c);
  static UniPoly monomial(const mpq_class& c, int k);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  /// Lowest power with a nonzero coefficient; -1 for the zero polynomial.
  int order() const;
  const mpq_class& coeff(int k) const;
  const std::vector<mpq_class>& coeffs() const { return c_; }
  const mpq_class& leading() const { return c_.back(); }

  UniPoly derivative() const;
  mpq_class eval(const mpq_class& z) const;
  SigComplex eval(const SigComplex& z) const;
  /// Divides out z^order().
  UniPoly strip_zero_roots(int* removed = nullptr) const;
  /// LCM of coefficient denominators.
  mpz_class denominator_lcm() const;

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const mpq_class& s);
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

  /// Canonical text in the variable `var`, e.g. "3/2 z^5-z+1".
  std::string to_string(char var = 'z') const;

 private:
  void trim();
  std::vector<mpq_class> c_;
};

/// Remainder and quotient over Q; b must be nonzero.
std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b);
UniPoly gcd(const UniPoly& a, const UniPoly& b);  // monic
/// Square-free decomposition p = c * prod_k q_k^k; entry k-1 holds q_k.
std::vector<UniPoly> squarefree_decomposition(const UniPoly& p);

/// f(z,w) = sum_i a_i(z) w^i with a_n != 0.
class BiPoly {
 public:
  BiPoly() = default;
  explicit BiPoly(std::vector<UniPoly> coeffs);

  int degree_w() const { return static_cast<int>(a_.size()) - 1; }
  /// Largest z-degree over all coefficients.
  int degree_z() const;
  bool is_zero() const { return a_.empty(); }
  const UniPoly& coeff(int i) const;
  const std::vector<UniPoly>& coeffs() const { return a_; }
  const UniPoly& leading() const { return a_.back(); }

  BiPoly derivative_w() const;
  BiPoly derivative_z() const;
  /// Multiplies by the LCM of all denominators, giving integer coefficients.
  BiPoly clear_denominators(mpz_class* scale = nullptr) const;

  friend BiPoly operator+(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator-(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.a_ == b.a_; }

  /// Canonical expression: "(a_0)+(a_1) w+(a_2) w^2+..." with zero
  /// coefficients omitted.
  std::string to_string() const;
  /// Structured document (JSON) listing coefficient strings per power of w.
  std::string to_document() const;

 private:
  void trim();
  std::vector<UniPoly> a_;
};

/// Accepts either a polynomial expression in z and w or a structured
/// document (a JSON object with a "coefficients" array). Throws ParseError.
BiPoly parse(std::string_view text);
BiPoly parse_expression(std::string_view text);
BiPoly parse_document(std::string_view text);

struct SupportPoint {
  int i;      // power of w
  int order;  // lowest power of z in a_i
  friend bool operator==(const SupportPoint&, const SupportPoint&) = default;
  friend auto operator<=>(const SupportPoint&, const SupportPoint&) = default;
};

/// One point per nonzero coefficient a_i.
std::vector<SupportPoint> support(const BiPoly& f);

/// Resultant of f and df/dw with respect to w (Sylvester determinant of
/// formal degrees n and n-1).
UniPoly resultant_w(const BiPoly& f);

/// Numeric polynomial in one variable, coefficient k multiplies x^k.
using NumPoly = std::vector<SigComplex>;

NumPoly to_num(const UniPoly& p, long bits);
SigComplex eval(const NumPoly& p, const SigComplex& x);
NumPoly derivative(const NumPoly& p);

/// Numeric bivariate polynomial: a[i][k] multiplies z^k w^i.
struct NumBiPoly {
  std::vector<std::vector<SigComplex>> a;
  int degree_w() const { return static_cast<int>(a.size()) - 1; }
};

NumBiPoly to_num(const BiPoly& f, long bits);
/// Coefficients of f(z0, w) as a polynomial in w.
NumPoly specialize_z(const NumBiPoly& f, const SigComplex& z0);
NumPoly specialize_z(const BiPoly& f, const SigComplex& z0);
/// g(z,w) = f(z + s, w) (Taylor shift of every coefficient).
NumBiPoly shift_z(const BiPoly& f, const SigComplex& s);

}  // namespace puiseux
