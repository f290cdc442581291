#include "puiseux/roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>

#include "puiseux/errors.hpp"

namespace puiseux {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Work {
  std::vector<Complex> a;   // coefficients at the current working precision
  std::vector<double> la;   // log10 |a_j|
  std::vector<double> le;   // log10 coefficient error
  int n = 0;
};

Work make_work(const NumPoly& p, long bits) {
  Work w;
  for (const auto& c : p) {
    w.a.push_back(c.value().with_bits(bits));
    w.la.push_back(c.log10_abs());
    w.le.push_back(c.log10_error());
  }
  w.n = static_cast<int>(p.size()) - 1;
  return w;
}

// log10 of sum_j 10^(l_j) |z|^j.
double log_magnitude_sum(const std::vector<double>& l, double lz) {
  double acc = kNegInf;
  for (std::size_t j = l.size(); j-- > 0;) {
    acc = log10_sum(acc == kNegInf ? kNegInf : acc + lz, l[j]);
  }
  return acc;
}

void horner(const Work& w, const Complex& z, Complex& p, Complex& dp) {
  long bits = z.bits();
  p = Complex(bits);
  dp = Complex(bits);
  for (std::size_t j = w.a.size(); j-- > 0;) {
    dp = dp * z + p;
    p = p * z + w.a[j];
  }
}

Complex eval_only(const Work& w, const Complex& z) {
  Complex p(z.bits());
  for (std::size_t j = w.a.size(); j-- > 0;) p = p * z + w.a[j];
  return p;
}

// Initial approximations from the upper convex hull of (j, log|a_j|).
std::vector<Complex> initial_points(const Work& w, long bits) {
  int n = w.n;
  std::vector<int> hull;
  for (int j = 0; j <= n; ++j) {
    if (w.la[static_cast<std::size_t>(j)] == kNegInf) continue;
    while (hull.size() >= 2) {
      int i0 = hull[hull.size() - 2];
      int i1 = hull.back();
      double y0 = w.la[static_cast<std::size_t>(i0)];
      double y1 = w.la[static_cast<std::size_t>(i1)];
      double y2 = w.la[static_cast<std::size_t>(j)];
      // Remove i1 when it lies on or below the chord i0 -> j.
      if ((y1 - y0) * (j - i0) <= (y2 - y0) * (i1 - i0)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(j);
  }
  std::vector<Complex> z;
  const double two_pi = 6.283185307179586;
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    int i0 = hull[k];
    int i1 = hull[k + 1];
    int cnt = i1 - i0;
    double lr = (w.la[static_cast<std::size_t>(i0)] - w.la[static_cast<std::size_t>(i1)]) / cnt;
    Real modulus(bits);
    Real ten(10, bits);
    Real e(bits);
    mpfr_set_d(e.get(), lr, MPFR_RNDN);
    mpfr_pow(modulus.get(), ten.get(), e.get(), MPFR_RNDN);
    for (int j = 0; j < cnt; ++j) {
      double ang = two_pi * j / cnt + two_pi * i1 / n + 0.4;
      Real a(bits);
      mpfr_set_d(a.get(), ang, MPFR_RNDN);
      z.push_back(polar(modulus, a));
    }
  }
  return z;
}

struct AberthResult {
  std::vector<Complex> z;
  Work work;
};

// Runs Aberth iterations with precision doubling up to `target_bits`.
AberthResult aberth(const NumPoly& p, long target_bits) {
  long bits = std::min<long>(target_bits, 128);
  Work w = make_work(p, bits);
  int n = w.n;
  std::vector<Complex> z = initial_points(w, bits);
  while (true) {
    double lu = (1 - bits) * 0.30102999566398119521;
    std::vector<bool> frozen(static_cast<std::size_t>(n), false);
    int active = n;
    int cap = bits <= 128 ? 400 + 20 * n : 200;
    int iter = 0;
    Complex pv(bits), dpv(bits);
    while (active > 0 && iter < cap) {
      ++iter;
      for (int i = 0; i < n; ++i) {
        if (frozen[static_cast<std::size_t>(i)]) continue;
        Complex& zi = z[static_cast<std::size_t>(i)];
        horner(w, zi, pv, dpv);
        double lz = zi.log10_abs();
        double lp = pv.log10_abs();
        double noise = log10_sum(lu + std::log10(4.0 * n + 4.0) + log_magnitude_sum(w.la, lz),
                                 log_magnitude_sum(w.le, lz));
        if (lp == kNegInf || lp <= noise) {
          frozen[static_cast<std::size_t>(i)] = true;
          --active;
          continue;
        }
        if (dpv.is_zero()) {
          // Nudge off a critical point.
          Real eps(bits);
          mpfr_set_d(eps.get(), 1e-3, MPFR_RNDN);
          zi.re = zi.re + eps * (abs(zi) + Real(1, bits));
          continue;
        }
        Complex ratio = pv / dpv;
        Complex sum(bits);
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          Complex diff = zi - z[static_cast<std::size_t>(j)];
          if (diff.is_zero()) continue;
          sum = sum + Complex(1, bits) / diff;
        }
        Complex den = Complex(1, bits) - ratio * sum;
        Complex step = den.is_zero() ? ratio : ratio / den;
        zi = zi - step;
        double ls = step.log10_abs();
        if (ls != kNegInf && ls <= lu + 1 + std::max(lz, zi.log10_abs())) {
          frozen[static_cast<std::size_t>(i)] = true;
          --active;
        }
      }
    }
    if (active > 0 && bits <= 128) {
      throw EscalationError("root iteration did not converge for degree " + std::to_string(n),
                            RetryHint{static_cast<int>(2 * bits_to_digits(target_bits)), std::nullopt, std::nullopt});
    }
    if (bits >= target_bits) break;
    bits = std::min(target_bits, 2 * bits);
    w = make_work(p, bits);
    for (auto& zi : z) zi = zi.with_bits(bits);
  }
  return {std::move(z), std::move(w)};
}

NumPoly trimmed(const NumPoly& p, int* zero_roots) {
  NumPoly q = p;
  while (!q.empty() && q.back().value().is_zero()) q.pop_back();
  if (q.size() < 2) throw InvariantViolation("root finding needs degree at least 1");
  int k = 0;
  while (q[static_cast<std::size_t>(k)].value().is_zero() && q[static_cast<std::size_t>(k)].is_exact()) ++k;
  *zero_roots = k;
  return NumPoly(q.begin() + k, q.end());
}

// log10 of the inclusion radius n (|p(z_i)| + E(z_i)) / |a_n prod (z_i - z_j)|.
std::vector<double> inclusion_radii(const Work& w, const std::vector<Complex>& z) {
  int n = w.n;
  long bits = z.empty() ? 64 : z[0].bits();
  double lu = (1 - bits) * 0.30102999566398119521;
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const Complex& zi = z[static_cast<std::size_t>(i)];
    double lz = zi.log10_abs();
    double lp = eval_only(w, zi).log10_abs();
    double err = log10_sum(lp, log10_sum(lu + std::log10(4.0 * n + 4.0) + log_magnitude_sum(w.la, lz),
                                         log_magnitude_sum(w.le, lz)));
    double lden = w.la.back();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      lden += (zi - z[static_cast<std::size_t>(j)]).log10_abs();
    }
    out.push_back(std::log10(static_cast<double>(n)) + err - lden);
  }
  return out;
}

std::vector<SigComplex> with_zero_roots(std::vector<SigComplex> r, int k, long bits) {
  for (int j = 0; j < k; ++j) r.emplace_back(Complex(bits), kNegInf);
  sort_roots(r);
  return r;
}

}  // namespace

bool root_less(const SigComplex& a, const SigComplex& b) {
  SigComplex dre({a.re() - b.re(), Real(a.bits())}, log10_sum(a.log10_error(), b.log10_error()));
  if (!is_numerically_zero(dre)) return a.re() < b.re();
  return a.im() < b.im();
}

void sort_roots(std::vector<SigComplex>& v) {
  std::stable_sort(v.begin(), v.end(), [](const SigComplex& a, const SigComplex& b) { return a.re() < b.re(); });
  // Runs whose real parts chain within their error bounds sort by imaginary part.
  std::size_t start = 0;
  while (start < v.size()) {
    std::size_t end = start + 1;
    while (end < v.size()) {
      const SigComplex& a = v[end - 1];
      const SigComplex& b = v[end];
      SigComplex dre({b.re() - a.re(), Real(b.bits())}, log10_sum(a.log10_error(), b.log10_error()));
      if (!is_numerically_zero(dre)) break;
      ++end;
    }
    std::stable_sort(v.begin() + static_cast<long>(start), v.begin() + static_cast<long>(end),
                     [](const SigComplex& a, const SigComplex& b) { return a.im() < b.im(); });
    start = end;
  }
}

std::vector<SigComplex> roots(const NumPoly& p, double digits) {
  int zeros = 0;
  NumPoly q = trimmed(p, &zeros);
  long bits = digits_to_bits(digits) + 16;
  std::vector<SigComplex> out;
  if (q.size() == 2) {
    Complex r = -(q[0].value().with_bits(bits) / q[1].value().with_bits(bits));
    out.push_back(SigComplex::with_precision(std::move(r), digits));
  } else {
    auto res = aberth(q, bits);
    for (auto& z : res.z) out.push_back(SigComplex::with_precision(std::move(z), digits));
  }
  return with_zero_roots(std::move(out), zeros, bits);
}

std::vector<SigComplex> roots(const UniPoly& p, double digits) {
  return roots(to_num(p, digits_to_bits(digits) + 16), digits);
}

std::vector<SigComplex> isolate(const NumPoly& p, double digits) {
  int zeros = 0;
  NumPoly q = trimmed(p, &zeros);
  long bits = digits_to_bits(digits) + 16;
  std::vector<Complex> z;
  Work w = make_work(q, bits);
  if (q.size() <= 1) {
    // every root is zero
    return with_zero_roots({}, zeros, bits);
  } else if (q.size() == 2) {
    z.push_back(-(q[0].value().with_bits(bits) / q[1].value().with_bits(bits)));
  } else {
    auto res = aberth(q, bits);
    z = std::move(res.z);
    w = std::move(res.work);
  }
  std::vector<double> radii;
  if (q.size() == 2) {
    // Linear: error from both coefficients.
    double lr = z[0].log10_abs();
    double e = log10_sum(q[0].log10_error(), lr == kNegInf ? kNegInf : lr + q[1].log10_error());
    radii.push_back(e - q[1].log10_abs());
  } else {
    radii = inclusion_radii(w, z);
  }
  std::vector<SigComplex> out;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double lz = z[i].log10_abs();
    double nominal = lz == kNegInf ? -digits : lz - digits;
    out.emplace_back(std::move(z[i]), std::max(radii[i], nominal));
  }
  return with_zero_roots(std::move(out), zeros, bits);
}

std::vector<RootCluster> cluster(const std::vector<SigComplex>& values, double accuracy) {
  std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<SigComplex> reduced;
  for (const auto& v : values) reduced.push_back(reduce_accuracy(v, accuracy));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (numerically_equal(reduced[i], reduced[j])) parent[find(i)] = find(j);
    }
  }
  std::vector<RootCluster> out;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(out.size());
      out.push_back({values[i], 0, {}});
    }
    auto& c = out[static_cast<std::size_t>(slot[r])];
    c.members.push_back(values[i]);
    c.multiplicity += 1;
  }
  for (auto& c : out) {
    if (c.multiplicity == 1) {
      c.center = c.members[0];
      continue;
    }
    long bits = c.members[0].bits();
    Complex sum(bits);
    double err = kNegInf;
    for (const auto& m : c.members) sum = sum + m.value();
    Real cnt(static_cast<long>(c.multiplicity), bits);
    Complex mean{sum.re / cnt, sum.im / cnt};
    for (const auto& m : c.members) err = std::max(err, log10_sum((m.value() - mean).log10_abs(), m.log10_error()));
    c.center = SigComplex(std::move(mean), err);
  }
  std::sort(out.begin(), out.end(),
            [](const RootCluster& a, const RootCluster& b) { return root_less(a.center, b.center); });
  std::vector<SigComplex> centers;
  for (const auto& c : out) centers.push_back(c.center);
  sort_roots(centers);
  std::vector<RootCluster> ordered;
  for (const auto& ctr : centers) {
    for (auto& c : out) {
      if (c.multiplicity > 0 && c.center.value().re == ctr.value().re && c.center.value().im == ctr.value().im) {
        ordered.push_back(std::move(c));
        c.multiplicity = 0;
        break;
      }
    }
  }
  return ordered;
}

SigComplex refine_multiple(const NumPoly& p, const SigComplex& center, int multiplicity) {
  NumPoly q = p;
  for (int k = 1; k < multiplicity; ++k) q = derivative(q);
  NumPoly dq = derivative(q);
  long bits = center.bits();
  Work w = make_work(q, bits);
  Work dw = make_work(dq, bits);
  double lu = (1 - bits) * 0.30102999566398119521;
  Complex z = center.value();
  for (int it = 0; it < 100; ++it) {
    Complex qv = eval_only(w, z);
    Complex dv = eval_only(dw, z);
    if (dv.is_zero()) break;
    Complex step = qv / dv;
    z = z - step;
    double ls = step.log10_abs();
    if (ls == kNegInf || ls <= lu + 1 + z.log10_abs()) break;
  }
  double lz = z.log10_abs();
  double lq = eval_only(w, z).log10_abs();
  double evalerr = log10_sum(lu + std::log10(4.0 * w.n + 4.0) + log_magnitude_sum(w.la, lz),
                             log_magnitude_sum(w.le, lz));
  double ldq = eval_only(dw, z).log10_abs();
  double err = std::log10(static_cast<double>(std::max(w.n, 1))) + log10_sum(lq, evalerr) - ldq;
  // Newton on the derivative cannot do worse than the cluster spread.
  err = std::min(err, center.log10_error());
  if (err >= center.log10_error()) return center;
  return {std::move(z), err};
}

namespace {

// Clusters from a short-precision isolation, then full precision only where
// it converges fast: Newton for simple roots, Newton on p^(m-1) for clusters.
// Aberth converges linearly on exact multiple roots, which is the expensive
// case this avoids. Returns nullopt when a cluster does not verify as a
// multiple root (every p^(k), k < m, numerically zero at the center).
std::optional<std::vector<RootCluster>> clustered_fast(const NumPoly& p, double digits, double accuracy, double lo) {
  int zeros = 0;
  NumPoly q = trimmed(p, &zeros);
  if (zeros > 0 || q.size() <= 2) return std::nullopt;
  auto cl = cluster(isolate(q, lo), accuracy);
  bool multiple = false;
  for (const auto& c : cl) multiple = multiple || c.multiplicity > 1;
  if (!multiple) return std::nullopt;
  long bits = digits_to_bits(digits) + 16;
  double lu = (1 - bits) * 0.30102999566398119521;
  Work w = make_work(q, bits);
  std::vector<Complex> all;
  std::vector<std::size_t> simple_at;
  for (auto& c : cl) {
    for (const auto& m : c.members) all.push_back(m.value().with_bits(bits));
    if (c.multiplicity == 1) {
      Complex z = c.center.value().with_bits(bits);
      Complex pv(bits), dpv(bits);
      for (int it = 0; it < 60; ++it) {
        horner(w, z, pv, dpv);
        if (dpv.is_zero()) return std::nullopt;
        Complex step = pv / dpv;
        z = z - step;
        double ls = step.log10_abs();
        if (ls == kNegInf || ls <= lu + 1 + z.log10_abs()) break;
      }
      all.back() = z;
      simple_at.push_back(all.size() - 1);
      continue;
    }
    SigComplex start(c.center.value().with_bits(bits), c.center.log10_error());
    c.center = refine_multiple(q, start, c.multiplicity);
    NumPoly d = q;
    for (int k = 0; k < c.multiplicity; ++k) {
      if (!is_numerically_zero(eval(d, c.center))) return std::nullopt;
      d = derivative(d);
    }
  }
  auto radii = inclusion_radii(w, all);
  std::size_t next = 0;
  for (auto& c : cl) {
    if (c.multiplicity != 1) continue;
    std::size_t i = simple_at[next++];
    double lz = all[i].log10_abs();
    double nominal = lz == kNegInf ? -digits : lz - digits;
    c.center = SigComplex(all[i], std::max(radii[i], nominal));
    c.members = {c.center};
  }
  return cl;
}

}  // namespace

std::vector<RootCluster> clustered_roots(const NumPoly& p, double digits, double accuracy) {
  for (double lo = 60; lo < digits / 2; lo *= 2) {
    if (auto fast = clustered_fast(p, digits, accuracy, lo)) return std::move(*fast);
  }
  auto iso = isolate(p, digits);
  auto cl = cluster(iso, accuracy);
  for (auto& c : cl) {
    if (c.multiplicity > 1) c.center = refine_multiple(p, c.center, c.multiplicity);
  }
  return cl;
}

Fiber fiber_of(const NumPoly& p, double digits) {
  if (p.empty() || is_numerically_zero(p.back(), digits)) {
    throw DegenerateFiberError("leading coefficient vanishes at the fiber point");
  }
  Fiber fb;
  fb.roots = isolate(p, digits);
  long bits = digits_to_bits(digits) + 16;
  fb.p_min = SigComplex(bits);
  fb.log10_separation.assign(fb.roots.size(), std::numeric_limits<double>::infinity());
  bool first = true;
  for (std::size_t i = 0; i < fb.roots.size(); ++i) {
    for (std::size_t j = i + 1; j < fb.roots.size(); ++j) {
      SigComplex d = fb.roots[i] - fb.roots[j];
      double ld = d.log10_abs();
      fb.log10_separation[i] = std::min(fb.log10_separation[i], ld);
      fb.log10_separation[j] = std::min(fb.log10_separation[j], ld);
      SigComplex m(Complex(abs(d.value()), Real(bits)), d.log10_error());
      if (first || m.re() < fb.p_min.re()) {
        fb.p_min = m;
        first = false;
      }
    }
  }
  return fb;
}

Fiber fiber(const BiPoly& f, const SigComplex& z0, double digits) {
  SigComplex z = z0.bits() < digits_to_bits(digits) + 16 ? z0.with_bits(digits_to_bits(digits) + 16) : z0;
  return fiber_of(specialize_z(f, z), digits);
}

Fiber fiber(const NumBiPoly& f, const SigComplex& z0, double digits) {
  SigComplex z = z0.bits() < digits_to_bits(digits) + 16 ? z0.with_bits(digits_to_bits(digits) + 16) : z0;
  return fiber_of(specialize_z(f, z), digits);
}

Assignment match(const std::vector<SigComplex>& computed, const Fiber& exact, int N, MatchRule rule) {
  if (N < 2) throw InvariantViolation("tolerance divisor must be at least 2");
  if (computed.size() > exact.roots.size()) throw InvariantViolation("more computed values than fiber roots");
  const double inf = std::numeric_limits<double>::infinity();
  double lN = std::log10(static_cast<double>(N));
  double global = exact.roots.size() < 2 ? inf : exact.p_min.log10_abs() - lN;
  Assignment a;
  std::vector<long> owner(exact.roots.size(), -1);
  for (std::size_t k = 0; k < computed.size(); ++k) {
    std::size_t best = 0;
    double bd = inf;
    for (std::size_t j = 0; j < exact.roots.size(); ++j) {
      double d = log10_dist(computed[k].value(), exact.roots[j].value());
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    double tol = rule == MatchRule::global ? global : exact.log10_separation[best] - lN;
    if (!(bd < tol)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, " is 10^%.2f from the nearest fiber root; tolerance is 10^%.2f", bd, tol);
      throw MatchToleranceError("value " + format_short(computed[k].value()) + buf, RetryHint{});
    }
    if (owner[best] >= 0) {
      throw AmbiguousMatchError("values " + std::to_string(owner[best]) + " and " + std::to_string(k) +
                                " match the same fiber root");
    }
    owner[best] = static_cast<long>(k);
    a.index.push_back(best);
    a.log10_distance.push_back(bd);
    a.log10_tolerance.push_back(tol);
  }
  return a;
}

}  // namespace puiseux
