#include "puiseux/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>

#include "json.hpp"
#include "puiseux/errors.hpp"

namespace puiseux {

// ---------------------------------------------------------------- UniPoly

UniPoly::UniPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
  for (auto& c : c_) c.canonicalize();
  trim();
}

UniPoly UniPoly::constant(const mpq_class& c) { return UniPoly({c}); }

UniPoly UniPoly::monomial(const mpq_class& c, int k) {
  std::vector<mpq_class> v(static_cast<std::size_t>(k) + 1);
  v[static_cast<std::size_t>(k)] = c;
  return UniPoly(std::move(v));
}

void UniPoly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

int UniPoly::order() const {
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (sgn(c_[k]) != 0) return static_cast<int>(k);
  }
  return -1;
}

const mpq_class& UniPoly::coeff(int k) const {
  static const mpq_class zero(0);
  if (k < 0 || k >= static_cast<int>(c_.size())) return zero;
  return c_[static_cast<std::size_t>(k)];
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<mpq_class> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
  return UniPoly(std::move(d));
}

mpq_class UniPoly::eval(const mpq_class& z) const {
  mpq_class acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

SigComplex UniPoly::eval(const SigComplex& z) const {
  long bits = z.bits();
  SigComplex acc(bits);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * z + SigComplex::exact(*it, bits);
  }
  return acc;
}

UniPoly UniPoly::strip_zero_roots(int* removed) const {
  int k = std::max(order(), 0);
  if (removed) *removed = is_zero() ? 0 : k;
  if (k == 0) return *this;
  return UniPoly(std::vector<mpq_class>(c_.begin() + k, c_.end()));
}

mpz_class UniPoly::denominator_lcm() const {
  mpz_class l = 1;
  for (const auto& c : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  return l;
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
  std::vector<mpq_class> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
  return UniPoly(std::move(r));
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) {
  std::vector<mpq_class> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = a.coeff(static_cast<int>(k)) - b.coeff(static_cast<int>(k));
  return UniPoly(std::move(r));
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpq_class> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return UniPoly(std::move(r));
}

UniPoly operator*(const UniPoly& a, const mpq_class& s) {
  std::vector<mpq_class> r(a.c_);
  for (auto& c : r) c *= s;
  return UniPoly(std::move(r));
}

namespace {

std::string rational_text(const mpq_class& q) { return q.get_str(); }

// Appends "c var^k" with sign handling; `first` suppresses a leading '+'.
void append_term(std::ostringstream& out, const mpq_class& c, const std::string& mono, bool first) {
  bool neg = sgn(c) < 0;
  mpq_class mag = neg ? mpq_class(-c) : c;
  if (neg) {
    out << '-';
  } else if (!first) {
    out << '+';
  }
  if (mono.empty()) {
    out << rational_text(mag);
  } else if (mag == 1) {
    out << mono;
  } else {
    out << rational_text(mag) << ' ' << mono;
  }
}

std::string power_text(char var, int k) {
  if (k == 0) return "";
  if (k == 1) return std::string(1, var);
  return std::string(1, var) + "^" + std::to_string(k);
}

}  // namespace

std::string UniPoly::to_string(char var) const {
  if (c_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (sgn(c_[k]) == 0) continue;
    append_term(out, c_[k], power_text(var, static_cast<int>(k)), first);
    first = false;
  }
  return out.str();
}

std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
  if (b.is_zero()) throw InvariantViolation("polynomial division by zero");
  std::vector<mpq_class> r = a.coeffs();
  int db = b.degree();
  int da = a.degree();
  if (da < db) return {UniPoly(), a};
  std::vector<mpq_class> q(static_cast<std::size_t>(da - db + 1));
  mpq_class lead_inv = 1 / b.leading();
  for (int k = da; k >= db; --k) {
    mpq_class t = r[static_cast<std::size_t>(k)] * lead_inv;
    q[static_cast<std::size_t>(k - db)] = t;
    if (sgn(t) == 0) continue;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k - db + j)] -= t * b.coeff(j);
  }
  r.resize(static_cast<std::size_t>(db));
  return {UniPoly(std::move(q)), UniPoly(std::move(r))};
}

namespace {

// Integer primitive part: scale to integer coefficients with unit content and
// positive leading coefficient. Keeps remainder sequences small.
UniPoly primitive(const UniPoly& p) {
  if (p.is_zero()) return p;
  mpz_class l = p.denominator_lcm();
  std::vector<mpz_class> ints;
  ints.reserve(p.coeffs().size());
  mpz_class g = 0;
  for (const auto& c : p.coeffs()) {
    mpz_class v = c.get_num() * (l / c.get_den());
    ints.push_back(v);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  if (sgn(ints.back()) < 0) g = -g;
  std::vector<mpq_class> out;
  out.reserve(ints.size());
  for (auto& v : ints) out.emplace_back(mpz_class(v / g));
  return UniPoly(std::move(out));
}

// Pseudo-remainder of integer polynomials.
UniPoly prem(const UniPoly& a, const UniPoly& b) {
  std::vector<mpz_class> r;
  for (const auto& c : a.coeffs()) r.push_back(c.get_num());
  int db = b.degree();
  std::vector<mpz_class> bz;
  for (const auto& c : b.coeffs()) bz.push_back(c.get_num());
  const mpz_class& lb = bz.back();
  for (int k = static_cast<int>(r.size()) - 1; k >= db; --k) {
    mpz_class t = r[static_cast<std::size_t>(k)];
    for (auto& v : r) v *= lb;
    if (sgn(t) != 0) {
      for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k - db + j)] -= t * bz[static_cast<std::size_t>(j)];
    }
    r.pop_back();
  }
  std::vector<mpq_class> out(r.begin(), r.end());
  return UniPoly(std::move(out));
}

UniPoly monic(const UniPoly& p) {
  if (p.is_zero()) return p;
  return p * mpq_class(1 / p.leading());
}

}  // namespace

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  UniPoly x = primitive(a);
  UniPoly y = primitive(b);
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    UniPoly r = primitive(prem(x, y));
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x);
}

std::vector<UniPoly> squarefree_decomposition(const UniPoly& p) {
  std::vector<UniPoly> out;
  if (p.degree() <= 0) return out;
  // Yun's algorithm.
  UniPoly dp = p.derivative();
  UniPoly a = gcd(p, dp);
  UniPoly b = divmod(p, a).first;
  UniPoly c = divmod(dp, a).first;
  UniPoly d = c - b.derivative();
  while (b.degree() > 0) {
    UniPoly g = gcd(b, d);
    out.push_back(monic(g));
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    d = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() <= 0) out.pop_back();
  return out;
}

// ---------------------------------------------------------------- BiPoly

BiPoly::BiPoly(std::vector<UniPoly> coeffs) : a_(std::move(coeffs)) { trim(); }

void BiPoly::trim() {
  while (!a_.empty() && a_.back().is_zero()) a_.pop_back();
}

int BiPoly::degree_z() const {
  int d = -1;
  for (const auto& p : a_) d = std::max(d, p.degree());
  return d;
}

const UniPoly& BiPoly::coeff(int i) const {
  static const UniPoly zero;
  if (i < 0 || i >= static_cast<int>(a_.size())) return zero;
  return a_[static_cast<std::size_t>(i)];
}

BiPoly BiPoly::derivative_w() const {
  if (a_.size() <= 1) return {};
  std::vector<UniPoly> d;
  for (std::size_t i = 1; i < a_.size(); ++i) d.push_back(a_[i] * mpq_class(static_cast<long>(i)));
  return BiPoly(std::move(d));
}

BiPoly BiPoly::derivative_z() const {
  std::vector<UniPoly> d;
  for (const auto& p : a_) d.push_back(p.derivative());
  return BiPoly(std::move(d));
}

BiPoly BiPoly::clear_denominators(mpz_class* scale) const {
  mpz_class l = 1;
  for (const auto& p : a_) {
    mpz_class pl = p.denominator_lcm();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), pl.get_mpz_t());
  }
  if (scale) *scale = l;
  std::vector<UniPoly> out;
  for (const auto& p : a_) out.push_back(p * mpq_class(l));
  return BiPoly(std::move(out));
}

BiPoly operator+(const BiPoly& a, const BiPoly& b) {
  std::vector<UniPoly> r(std::max(a.a_.size(), b.a_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
  return BiPoly(std::move(r));
}

BiPoly operator-(const BiPoly& a, const BiPoly& b) {
  std::vector<UniPoly> r(std::max(a.a_.size(), b.a_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
  return BiPoly(std::move(r));
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<UniPoly> r(a.a_.size() + b.a_.size() - 1);
  for (std::size_t i = 0; i < a.a_.size(); ++i) {
    if (a.a_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.a_.size(); ++j) r[i + j] = r[i + j] + a.a_[i] * b.a_[j];
  }
  return BiPoly(std::move(r));
}

std::string BiPoly::to_string() const {
  if (a_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (a_[i].is_zero()) continue;
    if (!first) out << '+';
    out << '(' << a_[i].to_string('z') << ')';
    if (i > 0) out << ' ' << power_text('w', static_cast<int>(i));
    first = false;
  }
  return out.str();
}

std::string BiPoly::to_document() const {
  nlohmann::ordered_json doc;
  doc["format"] = "bipoly";
  doc["degree_w"] = degree_w();
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& p : a_) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& c : p.coeffs()) row.push_back(c.get_str());
    coeffs.push_back(row);
  }
  doc["coefficients"] = coeffs;
  return doc.dump(2);
}

// ---------------------------------------------------------------- parsing

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  BiPoly parse_all() {
    BiPoly r = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  // Start of a factor that may follow by juxtaposition.
  bool starts_primary() {
    skip_ws();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' ||
           std::isalpha(static_cast<unsigned char>(c));
  }

  BiPoly expr() {
    BiPoly r;
    bool neg = false;
    if (accept('-')) {
      neg = true;
    } else {
      accept('+');
    }
    BiPoly t = term();
    r = neg ? BiPoly() - t : t;
    while (true) {
      if (accept('+')) {
        r = r + term();
      } else if (accept('-')) {
        r = r - term();
      } else {
        break;
      }
    }
    return r;
  }

  BiPoly term() {
    BiPoly r = signed_factor();
    while (true) {
      skip_ws();
      if (pos_ + 1 < s_.size() && s_[pos_] == '*' && s_[pos_ + 1] == '*') fail("dangling power operator");
      if (accept('*')) {
        r = r * signed_factor();
      } else if (accept('/')) {
        BiPoly d = signed_factor();
        if (d.degree_w() != 0 || d.coeff(0).degree() != 0) fail("division by a non-constant");
        mpq_class inv = 1 / d.coeff(0).coeff(0);
        std::vector<UniPoly> scaled;
        for (const auto& p : r.coeffs()) scaled.push_back(p * inv);
        r = BiPoly(std::move(scaled));
      } else if (starts_primary()) {
        r = r * factor();
      } else {
        break;
      }
    }
    return r;
  }

  BiPoly signed_factor() {
    if (accept('-')) return BiPoly() - signed_factor();
    if (accept('+')) return signed_factor();
    return factor();
  }

  BiPoly factor() {
    BiPoly base = primary();
    skip_ws();
    bool pow = false;
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      pow = true;
    } else if (pos_ + 1 < s_.size() && s_[pos_] == '*' && s_[pos_ + 1] == '*') {
      pos_ += 2;
      pow = true;
    }
    if (!pow) return base;
    skip_ws();
    bool paren = accept('(');
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer");
    if (paren && !accept(')')) fail("expected ')'");
    long e = std::stol(std::string(s_.substr(start, pos_ - start)));
    if (e > 100000) fail("exponent too large");
    BiPoly r(std::vector<UniPoly>{UniPoly::constant(1)});
    for (long k = 0; k < e; ++k) r = r * base;
    return r;
  }

  BiPoly primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      BiPoly r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (name == "z") return BiPoly(std::vector<UniPoly>{UniPoly::monomial(1, 1)});
      if (name == "w") return BiPoly(std::vector<UniPoly>{UniPoly(), UniPoly::constant(1)});
      pos_ = start;
      fail("unknown symbol '" + name + "' (only z, w and rational numbers are allowed)");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  BiPoly number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string int_part(s_.substr(start, pos_ - start));
    std::string frac;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::size_t fs = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      frac = std::string(s_.substr(fs, pos_ - fs));
    }
    if (int_part.empty() && frac.empty()) fail("malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) fail("exponent notation is not supported");
    mpz_class num(int_part.empty() ? "0" : int_part);
    mpz_class den = 1;
    for (char d : frac) {
      num = num * 10 + (d - '0');
      den *= 10;
    }
    mpq_class q(num, den);
    q.canonicalize();
    return BiPoly(std::vector<UniPoly>{UniPoly::constant(q)});
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

mpq_class rational_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return mpq_class(mpz_class(v.dump()));
  if (!v.is_string()) throw ParseError("coefficient must be an integer or a \"p/q\" string");
  std::string s = v.get<std::string>();
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) throw ParseError("non-rational coefficient '" + s + "'");
  if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

}  // namespace

BiPoly parse_expression(std::string_view text) {
  // An optional trailing "= 0" is accepted.
  auto eq = text.find('=');
  if (eq != std::string_view::npos) {
    std::string rhs(text.substr(eq + 1));
    rhs.erase(std::remove_if(rhs.begin(), rhs.end(), [](unsigned char c) { return std::isspace(c); }), rhs.end());
    if (rhs != "0") throw ParseError("only '= 0' may follow the expression");
    text = text.substr(0, eq);
  }
  BiPoly f = ExprParser(text).parse_all();
  if (f.is_zero()) throw ParseError("polynomial is identically zero");
  return f;
}

BiPoly parse_document(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("coefficients") || !doc["coefficients"].is_array()) {
    throw ParseError("document needs a \"coefficients\" array");
  }
  std::vector<UniPoly> a;
  for (const auto& row : doc["coefficients"]) {
    if (!row.is_array()) throw ParseError("each coefficient entry must be an array");
    std::vector<mpq_class> c;
    for (const auto& v : row) c.push_back(rational_from_json(v));
    a.emplace_back(std::move(c));
  }
  BiPoly f(std::move(a));
  if (f.is_zero()) throw ParseError("polynomial is identically zero");
  if (doc.contains("degree_w") && doc["degree_w"].get<int>() != f.degree_w()) {
    throw ParseError("degree_w does not match the coefficient list");
  }
  return f;
}

BiPoly parse(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '{') return parse_document(text);
  return parse_expression(text);
}

std::vector<SupportPoint> support(const BiPoly& f) {
  std::vector<SupportPoint> pts;
  for (int i = 0; i <= f.degree_w(); ++i) {
    const UniPoly& a = f.coeff(i);
    if (!a.is_zero()) pts.push_back({i, a.order()});
  }
  return pts;
}

// ---------------------------------------------------------------- resultant

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  a %= p;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

u64 to_mod(const mpz_class& v, u64 p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
  return static_cast<u64>(r.get_ui());
}

// Resultant over F_p of polynomials with formal degrees da, db (coefficient
// vectors possibly with zero leading entries).
u64 resultant_mod(std::vector<u64> a, std::vector<u64> b, u64 p) {
  auto deg = [](const std::vector<u64>& v) {
    int d = static_cast<int>(v.size()) - 1;
    while (d >= 0 && v[static_cast<std::size_t>(d)] == 0) --d;
    return d;
  };
  int fa = static_cast<int>(a.size()) - 1;
  int fb = static_cast<int>(b.size()) - 1;
  // Sylvester's first column is zero when both formal leading terms vanish.
  if (deg(a) < fa && deg(b) < fb) return 0;
  u64 scale = 1;
  // Formal-degree drop of one operand: expand along the leading column.
  if (deg(a) < fa) {
    int da = deg(a);
    if (da < 0) return 0;
    // res_{fa,fb}(a,b) = (-1)^{(fa-da) fb} lc(b)^{fa-da} res_{da,fb}(a,b)
    u64 lb = b[static_cast<std::size_t>(fb)];
    scale = powmod(lb, static_cast<u64>(fa - da), p);
    if (((fa - da) * fb) % 2 == 1) scale = (p - scale) % p;
    a.resize(static_cast<std::size_t>(da) + 1);
  } else if (deg(b) < fb) {
    int db = deg(b);
    if (db < 0) return 0;
    u64 la = a[static_cast<std::size_t>(fa)];
    scale = powmod(la, static_cast<u64>(fb - db), p);
    b.resize(static_cast<std::size_t>(db) + 1);
  }
  u64 result = scale;
  while (true) {
    int da = static_cast<int>(a.size()) - 1;
    int db = static_cast<int>(b.size()) - 1;
    if (db == 0) return mulmod(result, powmod(b[0], static_cast<u64>(da), p), p);
    if (da < db) {
      if ((da * db) % 2 == 1) result = (p - result) % p;
      std::swap(a, b);
      continue;
    }
    // a = q b + r
    u64 inv = invmod(b.back(), p);
    std::vector<u64> r = a;
    for (int k = da; k >= db; --k) {
      u64 t = mulmod(r[static_cast<std::size_t>(k)], inv, p);
      if (t == 0) continue;
      for (int j = 0; j <= db; ++j) {
        u64& x = r[static_cast<std::size_t>(k - db + j)];
        x = (x + p - mulmod(t, b[static_cast<std::size_t>(j)], p)) % p;
      }
    }
    r.resize(static_cast<std::size_t>(db));
    int dr = static_cast<int>(r.size()) - 1;
    while (dr >= 0 && r[static_cast<std::size_t>(dr)] == 0) --dr;
    if (dr < 0) return 0;
    r.resize(static_cast<std::size_t>(dr) + 1);
    // res(a,b) = (-1)^{da db} res(b,a) = (-1)^{da db} lc(b)^{da-dr} res(b,r)
    if ((da * db) % 2 == 1) result = (p - result) % p;
    result = mulmod(result, powmod(b.back(), static_cast<u64>(da - dr), p), p);
    a = std::move(b);
    b = std::move(r);
  }
}

// Newton interpolation through (x_k = k, y_k), k = 0..m-1, over F_p;
// returns monomial coefficients.
std::vector<u64> interpolate(const std::vector<u64>& y, u64 p) {
  std::size_t m = y.size();
  std::vector<u64> dd(y);
  for (std::size_t j = 1; j < m; ++j) {
    u64 inv = invmod(static_cast<u64>(j), p);
    for (std::size_t k = m - 1; k >= j; --k) {
      dd[k] = mulmod((dd[k] + p - dd[k - 1]) % p, inv, p);
    }
  }
  // Horner on the Newton form: c(x) = dd0 + (x-0)(dd1 + (x-1)(dd2 + ...)).
  std::vector<u64> c(m, 0);
  for (std::size_t j = m; j-- > 0;) {
    // c <- c * (x - j) + dd[j]
    std::vector<u64> nc(m, 0);
    u64 shift = static_cast<u64>(j) % p;
    for (std::size_t k = 0; k < m; ++k) {
      if (c[k] == 0) continue;
      if (k + 1 < m) nc[k + 1] = (nc[k + 1] + c[k]) % p;
      nc[k] = (nc[k] + p - mulmod(c[k], shift, p)) % p;
    }
    nc[0] = (nc[0] + dd[j]) % p;
    c = std::move(nc);
  }
  return c;
}

}  // namespace

UniPoly resultant_w(const BiPoly& f_in) {
  int n = f_in.degree_w();
  if (n < 1) throw InvariantViolation("resultant needs degree in w at least 1");
  mpz_class L;
  BiPoly f = f_in.clear_denominators(&L);
  BiPoly fw = f.derivative_w();
  int delta = std::max(f.degree_z(), 0);
  int npts = (2 * n - 1) * delta + 1;

  // Integer coefficient tables.
  auto int_table = [](const BiPoly& g, int nn) {
    std::vector<std::vector<mpz_class>> t(static_cast<std::size_t>(nn) + 1);
    for (int i = 0; i <= nn; ++i) {
      for (const auto& c : g.coeff(i).coeffs()) t[static_cast<std::size_t>(i)].push_back(c.get_num());
    }
    return t;
  };
  auto ft = int_table(f, n);
  auto gt = int_table(fw, n - 1);

  // Coefficient bound: product over Sylvester rows of the row's l1 norm.
  auto l1 = [](const std::vector<std::vector<mpz_class>>& t) {
    mpz_class s = 0;
    for (const auto& row : t)
      for (const auto& v : row) s += abs(v);
    return s;
  };
  mpz_class bound = 1;
  mpz_class nf = l1(ft);
  mpz_class ng = l1(gt);
  for (int k = 0; k < n - 1; ++k) bound *= nf;
  for (int k = 0; k < n; ++k) bound *= ng;
  bound = 2 * bound + 1;

  std::vector<u64> primes;
  mpz_class modulus = 1;
  u64 cand = (1ULL << 62) - 1;
  while (modulus <= bound) {
    while (!is_prime(cand)) cand -= 2;
    primes.push_back(cand);
    modulus *= mpz_class(std::to_string(cand));
    cand -= 2;
  }

  std::vector<std::vector<u64>> images;
  for (u64 p : primes) {
    std::vector<std::vector<u64>> fm(ft.size()), gm(gt.size());
    for (std::size_t i = 0; i < ft.size(); ++i)
      for (const auto& v : ft[i]) fm[i].push_back(to_mod(v, p));
    for (std::size_t i = 0; i < gt.size(); ++i)
      for (const auto& v : gt[i]) gm[i].push_back(to_mod(v, p));
    auto evalp = [p](const std::vector<u64>& c, u64 x) {
      u64 acc = 0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (mulmod(acc, x, p) + *it) % p;
      return acc;
    };
    std::vector<u64> values(static_cast<std::size_t>(npts));
    for (int k = 0; k < npts; ++k) {
      std::vector<u64> a(static_cast<std::size_t>(n) + 1), b(static_cast<std::size_t>(n));
      for (int i = 0; i <= n; ++i) a[static_cast<std::size_t>(i)] = evalp(fm[static_cast<std::size_t>(i)], static_cast<u64>(k));
      for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = evalp(gm[static_cast<std::size_t>(i)], static_cast<u64>(k));
      values[static_cast<std::size_t>(k)] = resultant_mod(a, b, p);
    }
    images.push_back(interpolate(values, p));
  }

  // Garner reconstruction of each coefficient in the symmetric range.
  std::size_t np = primes.size();
  std::vector<std::vector<u64>> inv(np, std::vector<u64>(np, 0));
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < i; ++j) inv[i][j] = invmod(primes[j] % primes[i], primes[i]);
  mpz_class half = modulus / 2;
  std::vector<mpq_class> coeffs(static_cast<std::size_t>(npts));
  mpz_class scale;
  mpz_pow_ui(scale.get_mpz_t(), L.get_mpz_t(), static_cast<unsigned long>(2 * n - 1));
  for (int k = 0; k < npts; ++k) {
    std::vector<u64> x(np);
    for (std::size_t i = 0; i < np; ++i) {
      u64 v = images[i][static_cast<std::size_t>(k)];
      for (std::size_t j = 0; j < i; ++j) {
        v = mulmod((v + primes[i] - x[j] % primes[i]) % primes[i], inv[i][j], primes[i]);
      }
      x[i] = v;
    }
    mpz_class acc = 0;
    mpz_class prod = 1;
    for (std::size_t i = 0; i < np; ++i) {
      acc += prod * mpz_class(std::to_string(x[i]));
      prod *= mpz_class(std::to_string(primes[i]));
    }
    if (acc > half) acc -= modulus;
    coeffs[static_cast<std::size_t>(k)] = mpq_class(acc, scale);
  }
  return UniPoly(std::move(coeffs));
}

// ---------------------------------------------------------------- numeric images

NumPoly to_num(const UniPoly& p, long bits) {
  NumPoly out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) out.push_back(SigComplex::exact(c, bits));
  return out;
}

SigComplex eval(const NumPoly& p, const SigComplex& x) {
  SigComplex acc(x.bits());
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

NumPoly derivative(const NumPoly& p) {
  NumPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * SigComplex::exact(static_cast<long>(k), p[k].bits()));
  return d;
}

NumBiPoly to_num(const BiPoly& f, long bits) {
  NumBiPoly out;
  for (const auto& a : f.coeffs()) out.a.push_back(to_num(a, bits));
  return out;
}

NumPoly specialize_z(const NumBiPoly& f, const SigComplex& z0) {
  NumPoly out;
  for (const auto& a : f.a) out.push_back(a.empty() ? SigComplex(z0.bits()) : eval(a, z0));
  return out;
}

NumPoly specialize_z(const BiPoly& f, const SigComplex& z0) {
  NumPoly out;
  for (const auto& a : f.coeffs()) out.push_back(a.eval(z0));
  return out;
}

NumBiPoly shift_z(const BiPoly& f, const SigComplex& s) {
  NumBiPoly out;
  long bits = s.bits();
  for (const auto& a : f.coeffs()) {
    NumPoly b = to_num(a, bits);
    int deg = static_cast<int>(b.size()) - 1;
    for (int i = 0; i < deg; ++i) {
      for (int j = deg - 1; j >= i; --j) {
        b[static_cast<std::size_t>(j)] += s * b[static_cast<std::size_t>(j) + 1];
      }
    }
    out.a.push_back(std::move(b));
  }
  return out;
}

}  // namespace puiseux
