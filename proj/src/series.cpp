#include "puiseux/series.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "json.hpp"
#include "puiseux/errors.hpp"

namespace puiseux {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

NumPoly mul_trunc(const NumPoly& a, const NumPoly& b, std::size_t n, long bits) {
  NumPoly r(std::min(n, a.empty() || b.empty() ? 0 : a.size() + b.size() - 1), SigComplex(bits));
  for (std::size_t i = 0; i < a.size() && i < r.size(); ++i) {
    if (a[i].value().is_zero() && a[i].is_exact()) continue;
    for (std::size_t j = 0; j < b.size() && i + j < r.size(); ++j) {
      if (b[j].value().is_zero() && b[j].is_exact()) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

NumPoly add_trunc(const NumPoly& a, const NumPoly& b, std::size_t n, long bits) {
  NumPoly r(std::min(n, std::max(a.size(), b.size())), SigComplex(bits));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] += a[i];
    if (i < b.size()) r[i] += b[i];
  }
  return r;
}

NumPoly div_trunc(const NumPoly& a, const NumPoly& b, std::size_t n, long bits) {
  NumPoly q(n, SigComplex(bits));
  for (std::size_t k = 0; k < n; ++k) {
    SigComplex acc = k < a.size() ? a[k] : SigComplex(bits);
    for (std::size_t j = 1; j <= k && j < b.size(); ++j) acc -= b[j] * q[k - j];
    q[k] = acc / b[0];
  }
  return q;
}

// F = fbar(t, p), W = dfbar/dw(t, p), both mod t^n.
void eval_fbar(const std::vector<NumPoly>& fbar, const NumPoly& p, std::size_t n, long bits, NumPoly& F, NumPoly& W) {
  F.clear();
  W.clear();
  for (std::size_t i = fbar.size(); i-- > 0;) {
    W = add_trunc(mul_trunc(W, p, n, bits), F, n, bits);
    NumPoly row(fbar[i].begin(), fbar[i].begin() + static_cast<long>(std::min(n, fbar[i].size())));
    F = add_trunc(mul_trunc(F, p, n, bits), row, n, bits);
  }
  F.resize(n, SigComplex(bits));
  W.resize(n, SigComplex(bits));
}

long to_long(const mpq_class& q) {
  if (q.get_den() != 1) throw InvariantViolation("exponent is not an integer power of t");
  return q.get_num().get_si();
}

}  // namespace

mpq_class PuiseuxSeries::leading_exponent() const {
  mpq_class e = prefix.empty() ? e_tail : prefix.front().first;
  return e - E;
}

std::string BranchLabel::to_string() const {
  return "w_{" + std::to_string(d) + "," + std::to_string(index) + "}";
}

int iterations_for(int terms) {
  int n = 0;
  while ((1L << n) < terms) ++n;
  return n;
}

NumPoly iterate(const RegularForm& rf, int iterations, int max_terms, double working_digits) {
  long bits = rf.rk.bits();
  for (const auto& row : rf.fbar)
    for (const auto& c : row) bits = std::max(bits, c.bits());
  std::size_t final_n = max_terms > 0 ? static_cast<std::size_t>(max_terms) : (std::size_t{1} << iterations);
  NumPoly p{rf.rk};
  NumPoly F, W;
  std::size_t have = 1;
  for (int j = 1; j <= iterations && have < final_n; ++j) {
    std::size_t n = std::min(std::size_t{1} << j, final_n);
    eval_fbar(rf.fbar, p, n, bits, F, W);
    if (is_numerically_zero(W[0]))
      throw NotSimpleRootError("derivative of the regular form vanishes at the root (" + format_short(W[0].value()) +
                               ", error 1e" + std::to_string(static_cast<int>(W[0].log10_error())) + ")");
    NumPoly delta = div_trunc(F, W, n, bits);
    p.resize(n, SigComplex(bits));
    for (std::size_t k = 0; k < n; ++k) p[k] -= delta[k];
    for (const auto& c : p) {
      if (c.accuracy() < 0) {
        int hint = static_cast<int>(std::max(2.0 * working_digits, bits_to_digits(bits) * 2));
        throw EscalationError("series coefficients lost all accuracy; increase the working precision",
                              RetryHint{hint, std::nullopt, std::nullopt});
      }
    }
    have = n;
  }
  if (iterations == 0) {
    eval_fbar(rf.fbar, p, 1, bits, F, W);
    if (is_numerically_zero(W[0])) throw NotSimpleRootError("derivative of the regular form vanishes at the root");
  }
  return p;
}

PuiseuxSeries assemble(const std::vector<std::pair<mpq_class, SigComplex>>& prefix, const mpq_class& e_tail,
                       NumPoly tail, long d, int E) {
  if (d < 1) throw InvariantViolation("cycle number must be positive");
  mpq_class prev = -1;
  bool first = true;
  for (const auto& [e, c] : prefix) {
    if (mpq_class(e * d).get_den() != 1) throw InvariantViolation("prefix exponent is not a multiple of 1/d");
    if (!first && e <= prev) throw InvariantViolation("prefix exponents must increase");
    if (sgn(e) < 0) throw InvariantViolation("prefix exponent is negative before the normal shift");
    prev = e;
    first = false;
  }
  if (mpq_class(e_tail * d).get_den() != 1) throw InvariantViolation("tail exponent is not a multiple of 1/d");
  if (!first && e_tail <= prev) throw InvariantViolation("tail exponent must exceed the prefix exponents");
  PuiseuxSeries s;
  s.E = E;
  s.d = d;
  s.prefix = prefix;
  s.e_tail = e_tail;
  s.tail = std::move(tail);
  return s;
}

std::vector<SheetView> conjugates(const PuiseuxSeries& s) {
  std::vector<SheetView> v;
  for (long j = 0; j < s.d; ++j) v.push_back({&s, j});
  return v;
}

SigComplex eval(const PuiseuxSeries& s, long sheet, const SigComplex& z, int terms) {
  long bits = z.bits();
  int total = s.term_count();
  if (terms < 0 || terms > total) terms = total;
  int npre = std::min<int>(terms, static_cast<int>(s.prefix.size()));
  int ntail = terms - npre;
  if (z.value().is_zero()) {
    if (s.leading_exponent() < 0) throw PoleEvaluationError("series has a pole at the origin");
    SigComplex acc(bits);
    for (int i = 0; i < npre; ++i)
      if (sgn(s.prefix[static_cast<std::size_t>(i)].first) == 0 && s.E == 0) acc += s.prefix[static_cast<std::size_t>(i)].second;
    if (ntail > 0 && sgn(s.e_tail) == 0 && s.E == 0) acc += s.tail[0];
    return acc;
  }
  SigComplex u = principal_root(z, s.d);
  if (sheet % s.d != 0) u = u * sig_unit_root(sheet, s.d, bits);
  SigComplex acc(bits);
  for (int i = 0; i < npre; ++i) {
    const auto& [e, c] = s.prefix[static_cast<std::size_t>(i)];
    acc += c * pow(u, to_long(e * s.d));
  }
  if (ntail > 0) {
    SigComplex h(bits);
    for (int m = ntail - 1; m >= 0; --m) h = h * u + s.tail[static_cast<std::size_t>(m)];
    acc += h * pow(u, to_long(s.e_tail * s.d));
  }
  if (s.E != 0) acc = acc * pow(z, -s.E);
  return acc;
}

PuiseuxSeries perturbed(const PuiseuxSeries& s, int term, const SigComplex& delta) {
  PuiseuxSeries out = s;
  if (term < static_cast<int>(s.prefix.size())) {
    out.prefix[static_cast<std::size_t>(term)].second += delta;
  } else {
    std::size_t m = static_cast<std::size_t>(term) - s.prefix.size();
    if (m >= out.tail.size()) throw InvariantViolation("term index past the end of the series");
    out.tail[m] += delta;
  }
  return out;
}

std::optional<long> residual_order_t(const BiPoly& f, const PuiseuxSeries& s, long sheet) {
  Normalized nz = normalize(f);
  const BiPoly& g = nz.g;
  long d = s.d;
  long et = to_long(s.e_tail * d);
  long T = static_cast<long>(s.tail.size());
  long M = 2 * (et + T) + d * (g.degree_z() + 1);
  long bits = s.tail.empty() ? 64 : s.tail[0].bits();
  for (const auto& [e, c] : s.prefix) bits = std::max(bits, c.bits());
  NumPoly w0(static_cast<std::size_t>(M), SigComplex(bits));
  auto twist = [&](long k) { return sig_unit_root(sheet * k, d, bits); };
  for (const auto& [e, c] : s.prefix) {
    long k = to_long(e * d);
    if (k < M) w0[static_cast<std::size_t>(k)] = (sheet % d == 0) ? c : c * twist(k);
  }
  for (long m = 0; m < T && et + m < M; ++m) {
    const auto& c = s.tail[static_cast<std::size_t>(m)];
    w0[static_cast<std::size_t>(et + m)] = (sheet % d == 0) ? c : c * twist(et + m);
  }
  NumPoly acc;
  for (int i = g.degree_w(); i >= 0; --i) {
    NumPoly row;
    const auto& a = g.coeff(i).coeffs();
    for (std::size_t k = 0; k < a.size(); ++k) {
      long pos = static_cast<long>(k) * d;
      if (pos >= M) break;
      if (static_cast<long>(row.size()) <= pos) row.resize(static_cast<std::size_t>(pos) + 1, SigComplex(bits));
      row[static_cast<std::size_t>(pos)] = SigComplex::exact(a[k], bits);
    }
    acc = add_trunc(mul_trunc(acc, w0, static_cast<std::size_t>(M), bits), row, static_cast<std::size_t>(M), bits);
  }
  for (std::size_t k = 0; k < acc.size(); ++k) {
    if (!is_numerically_zero(acc[k])) return static_cast<long>(k);
  }
  return std::nullopt;
}

std::optional<mpq_class> residual_order(const BiPoly& f, const PuiseuxSeries& s, long sheet) {
  auto k = residual_order_t(f, s, sheet);
  if (!k) return std::nullopt;
  Normalized nz = normalize(f);
  return mpq_class(*k, s.d) - nz.m;
}

const char* to_string(Trend t) {
  switch (t) {
    case Trend::converging:
      return "converging";
    case Trend::diverging:
      return "diverging";
    default:
      return "inconclusive";
  }
}

PartialSumProfile partial_sum_profile(const PuiseuxSeries& s, long sheet, const SigComplex& z, int max_terms) {
  PartialSumProfile prof;
  int total = s.term_count();
  if (max_terms < 0 || max_terms > total) max_terms = total;
  long bits = z.bits();
  Complex u = principal_root(z.value(), s.d);
  if (sheet % s.d != 0) u = u * unit_root(sheet, s.d, bits);
  Complex scale = s.E == 0 ? Complex(1, bits) : pow(z.value(), -s.E);
  Complex sum(bits);
  long upow = 0;
  Complex ucur(1, bits);
  auto advance = [&](long k) {
    // ucur = u^k, stepping from upow.
    if (k >= upow) {
      ucur = ucur * pow(u, k - upow);
    } else {
      ucur = pow(u, k);
    }
    upow = k;
  };
  for (int n = 0; n < max_terms; ++n) {
    Complex term(bits);
    if (n < static_cast<int>(s.prefix.size())) {
      const auto& [e, c] = s.prefix[static_cast<std::size_t>(n)];
      advance(to_long(e * s.d));
      term = c.value() * ucur;
    } else {
      long m = n - static_cast<long>(s.prefix.size());
      advance(to_long(s.e_tail * s.d) + m);
      term = s.tail[static_cast<std::size_t>(m)].value() * ucur;
    }
    term = term * scale;
    sum = sum + term;
    prof.log10_term.push_back(term.log10_abs());
    prof.log10_partial.push_back(sum.log10_abs());
  }
  // Envelope growth: the largest term in the last quarter against the
  // largest in the second quarter.
  int n = static_cast<int>(prof.log10_term.size());
  if (n >= 16) {
    double q2 = kNegInf, q4 = kNegInf;
    for (int k = n / 4; k < n / 2; ++k) q2 = std::max(q2, prof.log10_term[static_cast<std::size_t>(k)]);
    for (int k = 3 * n / 4; k < n; ++k) q4 = std::max(q4, prof.log10_term[static_cast<std::size_t>(k)]);
    if (q2 == kNegInf && q4 == kNegInf) {
      prof.hint = Trend::converging;
    } else {
      prof.growth = (q4 - q2) / (n / 2.0);
      double diff = q4 - q2;
      if (diff > 0.5) {
        prof.hint = Trend::diverging;
      } else if (diff < -0.5) {
        prof.hint = Trend::converging;
      }
    }
  }
  return prof;
}

// ---------------------------------------------------------------- basis

namespace {

Basis expand_normalized(Basis b, const ExpandConfig& cfg, const FracPoly& g) {
  PolygonConfig pc;
  pc.digits = cfg.digits;
  pc.prune_accuracy = cfg.digits - 10;
  pc.cluster_accuracy = cfg.digits - 10;
  b.tree = build_tree(g, pc, &b.residuals);
  long total_d = 0;
  for (const Leaf* leaf : collect_leaves(b.tree)) {
    total_d += leaf->d;
    mpq_class lead = (leaf->prefix.empty() ? leaf->e_last : leaf->prefix.front().first) - b.norm.E;
    if (cfg.singular_only && leaf->d < 2 && sgn(lead) >= 0) continue;
    RegularForm rf = regular_form(*leaf);
    int tail_terms = std::max(1, cfg.terms - static_cast<int>(leaf->prefix.size()));
    int its = iterations_for(tail_terms);
    b.iterations = std::max(b.iterations, its);
    NumPoly tail = iterate(rf, its, tail_terms, cfg.digits);
    b.series.push_back(assemble(leaf->prefix, leaf->e_last, std::move(tail), leaf->d, b.norm.E));
    b.forms.push_back(std::move(rf));
  }
  if (total_d != g.degree_w()) {
    throw InvariantViolation("cycle numbers sum to " + std::to_string(total_d) + " but the degree is " +
                             std::to_string(g.degree_w()));
  }
  return b;
}

}  // namespace

Basis expand_basis(const BiPoly& f, const ExpandConfig& cfg) {
  Basis b;
  b.norm = normalize(f);
  FracPoly g = FracPoly::from(b.norm.g, digits_to_bits(cfg.digits) + 16);
  return expand_normalized(std::move(b), cfg, g);
}

Basis expand_basis(const FracPoly& f, const ExpandConfig& cfg) {
  Basis b;
  FracPoly pr = prune(f, cfg.digits - 10, 0, "input", &b.residuals);
  NormalizedNum nn = normalize(pr);
  b.norm.E = nn.E;
  b.norm.m = nn.m;
  return expand_normalized(std::move(b), cfg, nn.g);
}

// ---------------------------------------------------------------- long tails

namespace {

template <typename C>
std::vector<C> recurrence(const std::vector<std::vector<C>>& A, const std::vector<C>& seed, int total) {
  int n = static_cast<int>(A.size()) - 1;
  std::vector<std::vector<C>> P(static_cast<std::size_t>(n) + 1, std::vector<C>(static_cast<std::size_t>(total)));
  std::vector<C> q(static_cast<std::size_t>(total));
  C c = seed[0];
  std::vector<C> cpow(static_cast<std::size_t>(n) + 1);
  cpow[0] = C(1);
  for (int i = 1; i <= n; ++i) cpow[static_cast<std::size_t>(i)] = cpow[static_cast<std::size_t>(i) - 1] * c;
  C w0(0);
  for (int i = 1; i <= n; ++i) {
    if (!A[static_cast<std::size_t>(i)].empty()) {
      w0 += static_cast<typename C::value_type>(i) * A[static_cast<std::size_t>(i)][0] * cpow[static_cast<std::size_t>(i) - 1];
    }
  }
  for (int i = 0; i <= n; ++i) P[static_cast<std::size_t>(i)][0] = cpow[static_cast<std::size_t>(i)];
  q[0] = c;
  for (int m = 1; m < total; ++m) {
    // Powers with q_m provisionally zero.
    P[0][static_cast<std::size_t>(m)] = C(0);
    P[1][static_cast<std::size_t>(m)] = C(0);
    for (int i = 2; i <= n; ++i) {
      C acc(0);
      const auto& prev = P[static_cast<std::size_t>(i) - 1];
      for (int k = 1; k < m; ++k) acc += q[static_cast<std::size_t>(k)] * prev[static_cast<std::size_t>(m - k)];
      acc += c * prev[static_cast<std::size_t>(m)];
      P[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] = acc;
    }
    C r(0);
    for (int i = 0; i <= n; ++i) {
      const auto& a = A[static_cast<std::size_t>(i)];
      const auto& pi = P[static_cast<std::size_t>(i)];
      int top = std::min<int>(m, static_cast<int>(a.size()) - 1);
      for (int k = 0; k <= top; ++k) r += a[static_cast<std::size_t>(k)] * pi[static_cast<std::size_t>(m - k)];
    }
    C qm = m < static_cast<int>(seed.size()) ? seed[static_cast<std::size_t>(m)] : -r / w0;
    q[static_cast<std::size_t>(m)] = qm;
    for (int i = 1; i <= n; ++i) {
      P[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] +=
          static_cast<typename C::value_type>(i) * cpow[static_cast<std::size_t>(i) - 1] * qm;
    }
  }
  return q;
}

template <typename C>
C to_c(const Complex& z, long double scale_log10, long k) {
  long double lr = scale_log10 * static_cast<long double>(k);
  // value * 10^(lr), computed through MPFR to avoid overflow before scaling.
  long bits = z.bits();
  Real s(bits);
  Real ten(10, bits);
  Real e(bits);
  mpfr_set_ld(e.get(), lr, MPFR_RNDN);
  mpfr_pow(s.get(), ten.get(), e.get(), MPFR_RNDN);
  Complex v = z * s;
  return C(static_cast<typename C::value_type>(mpfr_get_ld(v.re.get(), MPFR_RNDN)),
           static_cast<typename C::value_type>(mpfr_get_ld(v.im.get(), MPFR_RNDN)));
}

}  // namespace

PuiseuxSeries extend_series(const PuiseuxSeries& s, const RegularForm& rf, int tail_terms, long bits, double scale) {
  using LD = std::complex<long double>;
  using D = std::complex<double>;
  long double ls = std::log10(static_cast<long double>(scale));
  std::vector<std::vector<LD>> A;
  std::vector<std::vector<D>> Ad;
  for (const auto& row : rf.fbar) {
    std::vector<LD> r;
    std::vector<D> rd;
    for (std::size_t k = 0; k < row.size(); ++k) {
      LD v = to_c<LD>(row[k].value(), ls, static_cast<long>(k));
      r.push_back(v);
      rd.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    }
    A.push_back(std::move(r));
    Ad.push_back(std::move(rd));
  }
  std::vector<LD> seed;
  std::vector<D> seedd;
  for (std::size_t m = 0; m < s.tail.size(); ++m) {
    LD v = to_c<LD>(s.tail[m].value(), ls, static_cast<long>(m));
    seed.push_back(v);
    seedd.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  }
  auto q = recurrence(A, seed, tail_terms);
  auto qd = recurrence(Ad, seedd, tail_terms);
  PuiseuxSeries out = s;
  out.tail.resize(std::min<std::size_t>(s.tail.size(), static_cast<std::size_t>(tail_terms)), SigComplex(bits));
  Real ten(10, bits);
  for (int m = static_cast<int>(out.tail.size()); m < tail_terms; ++m) {
    LD v = q[static_cast<std::size_t>(m)];
    D vd = qd[static_cast<std::size_t>(m)];
    long double diff = std::abs(v - LD(vd.real(), vd.imag()));
    long double mag = std::abs(v);
    // Error estimate from the double-precision rerun, floored at the
    // long-double rounding level.
    long double err = std::max(diff * 10.0L, mag * 1e-17L * static_cast<long double>(m + 1));
    Real re(bits), im(bits), sc(bits), e(bits);
    mpfr_set_ld(re.get(), v.real(), MPFR_RNDN);
    mpfr_set_ld(im.get(), v.imag(), MPFR_RNDN);
    mpfr_set_ld(e.get(), -ls * static_cast<long double>(m), MPFR_RNDN);
    mpfr_pow(sc.get(), ten.get(), e.get(), MPFR_RNDN);
    Complex val{re * sc, im * sc};
    double lerr = err > 0 ? static_cast<double>(std::log10(err) - ls * static_cast<long double>(m)) : kNegInf;
    out.tail.emplace_back(std::move(val), lerr);
  }
  return out;
}

// ---------------------------------------------------------------- documents

std::string series_document(const std::vector<PuiseuxSeries>& basis, const std::vector<BranchLabel>& labels) {
  nlohmann::ordered_json doc;
  doc["format"] = "puiseux-basis";
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto& s = basis[k];
    nlohmann::ordered_json j;
    BranchLabel lab = k < labels.size() ? labels[k] : BranchLabel{s.d, static_cast<int>(k) + 1};
    j["label"] = lab.to_string();
    j["d"] = s.d;
    j["index"] = lab.index;
    j["E"] = s.E;
    nlohmann::ordered_json pre = nlohmann::ordered_json::array();
    for (const auto& [e, c] : s.prefix) pre.push_back({e.get_str(), format_sig(c)});
    j["prefix"] = pre;
    j["e_tail"] = s.e_tail.get_str();
    nlohmann::ordered_json tail = nlohmann::ordered_json::array();
    for (const auto& c : s.tail) tail.push_back(format_sig(c));
    j["tail"] = tail;
    j["term_count"] = s.term_count();
    arr.push_back(j);
  }
  doc["series"] = arr;
  return doc.dump(2);
}

std::vector<std::pair<BranchLabel, PuiseuxSeries>> parse_series_document(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed series document: ") + e.what());
  }
  if (!doc.contains("series") || !doc["series"].is_array()) throw ParseError("series document needs a \"series\" array");
  std::vector<std::pair<BranchLabel, PuiseuxSeries>> out;
  try {
    for (const auto& j : doc["series"]) {
      std::vector<std::pair<mpq_class, SigComplex>> prefix;
      for (const auto& p : j.at("prefix")) {
        mpq_class e(p.at(0).get<std::string>());
        e.canonicalize();
        prefix.emplace_back(e, parse_sig(p.at(1).get<std::string>()));
      }
      NumPoly tail;
      for (const auto& t : j.at("tail")) tail.push_back(parse_sig(t.get<std::string>()));
      mpq_class et(j.at("e_tail").get<std::string>());
      et.canonicalize();
      PuiseuxSeries s = assemble(prefix, et, std::move(tail), j.at("d").get<long>(), j.at("E").get<int>());
      if (j.contains("term_count") && j["term_count"].get<int>() != s.term_count()) {
        throw ParseError("term_count does not match the stored coefficients");
      }
      BranchLabel lab{s.d, j.value("index", static_cast<int>(out.size()) + 1)};
      out.emplace_back(lab, std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed series entry: ") + e.what());
  }
  return out;
}

}  // namespace puiseux
