#include "puiseux/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "puiseux/errors.hpp"

namespace puiseux {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Rkf78Tableau make_rkf78() {
  Rkf78Tableau t{};
  const long c[13][2] = {{0, 1}, {2, 27}, {1, 9}, {1, 6}, {5, 12}, {1, 2}, {5, 6},
                         {1, 6}, {2, 3}, {1, 3}, {1, 1}, {0, 1}, {1, 1}};
  const long a[13][12][2] = {
      {},
      {{2, 27}},
      {{1, 36}, {1, 12}},
      {{1, 24}, {0, 1}, {1, 8}},
      {{5, 12}, {0, 1}, {-25, 16}, {25, 16}},
      {{1, 20}, {0, 1}, {0, 1}, {1, 4}, {1, 5}},
      {{-25, 108}, {0, 1}, {0, 1}, {125, 108}, {-65, 27}, {125, 54}},
      {{31, 300}, {0, 1}, {0, 1}, {0, 1}, {61, 225}, {-2, 9}, {13, 900}},
      {{2, 1}, {0, 1}, {0, 1}, {-53, 6}, {704, 45}, {-107, 9}, {67, 90}, {3, 1}},
      {{-91, 108}, {0, 1}, {0, 1}, {23, 108}, {-976, 135}, {311, 54}, {-19, 60}, {17, 6}, {-1, 12}},
      {{2383, 4100}, {0, 1}, {0, 1}, {-341, 164}, {4496, 1025}, {-301, 82}, {2133, 4100}, {45, 82}, {45, 164},
       {18, 41}},
      {{3, 205}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {-6, 41}, {-3, 205}, {-3, 41}, {3, 41}, {6, 41}, {0, 1}},
      {{-1777, 4100}, {0, 1}, {0, 1}, {-341, 164}, {4496, 1025}, {-289, 82}, {2193, 4100}, {51, 82}, {33, 164},
       {12, 41}, {0, 1}, {1, 1}},
  };
  const long b7[13][2] = {{41, 840}, {0, 1},   {0, 1},   {0, 1},    {0, 1},     {34, 105}, {9, 35},
                          {9, 35},   {9, 280}, {9, 280}, {41, 840}, {0, 1},     {0, 1}};
  const long b8[13][2] = {{0, 1},  {0, 1},   {0, 1},   {0, 1}, {0, 1},     {34, 105}, {9, 35},
                          {9, 35}, {9, 280}, {9, 280}, {0, 1}, {41, 840}, {41, 840}};
  for (int i = 0; i < 13; ++i) {
    t.c[i][0] = c[i][0];
    t.c[i][1] = c[i][1];
    t.b7[i][0] = b7[i][0];
    t.b7[i][1] = b7[i][1];
    t.b8[i][0] = b8[i][0];
    t.b8[i][1] = b8[i][1];
    for (int j = 0; j < 13; ++j) {
      t.a[i][j][0] = (j < i) ? a[i][j][0] : 0;
      t.a[i][j][1] = (j < i && a[i][j][1] != 0) ? a[i][j][1] : 1;
    }
  }
  return t;
}

// Fixed set of MPFR scratch values, allocated once per integration.
class MpPool {
 public:
  MpPool(std::size_t n, long bits) : v_(n) {
    for (auto& x : v_) {
      mpfr_init2(&x, bits);
      mpfr_set_zero(&x, 1);
    }
  }
  ~MpPool() {
    for (auto& x : v_) mpfr_clear(&x);
  }
  MpPool(const MpPool&) = delete;
  MpPool& operator=(const MpPool&) = delete;
  mpfr_ptr operator[](std::size_t i) { return &v_[i]; }

 private:
  std::vector<__mpfr_struct> v_;
};

double log10_hypot(mpfr_srcptr re, mpfr_srcptr im, mpfr_ptr scratch) {
  mpfr_hypot(scratch, re, im, MPFR_RNDN);
  if (mpfr_zero_p(scratch)) return kNegInf;
  long e = 0;
  double m = mpfr_get_d_2exp(&e, scratch, MPFR_RNDN);
  return std::log10(m) + static_cast<double>(e) * std::log10(2.0);
}

// Right-hand side -(f_z / f_w) dz with rational (hence real) coefficients,
// stored sparsely; powers of z are shared between both partials.
class Rhs {
 public:
  Rhs(const BiPoly& f, long bits, const Complex& dz) : scratch_(12, bits), dz_(dz) {
    build(f.derivative_z(), fz_);
    build(f.derivative_w(), fw_);
    coef_ = std::make_unique<MpPool>(values_.size(), bits);
    for (std::size_t i = 0; i < values_.size(); ++i) mpfr_set_q(coef(i), values_[i].get_mpq_t(), MPFR_RNDN);
    zp_ = std::make_unique<MpPool>(2 * (maxk_ + 1), bits);
  }

  // out = rhs(z, w); throws IntegrationError when f_w vanishes.
  void operator()(mpfr_srcptr zr, mpfr_srcptr zi, mpfr_srcptr wr, mpfr_srcptr wi, mpfr_ptr outr, mpfr_ptr outi) {
    MpPool& zp = *zp_;
    mpfr_set_ui(zp[0], 1, MPFR_RNDN);
    mpfr_set_ui(zp[1], 0, MPFR_RNDN);
    for (std::size_t k = 1; k <= maxk_; ++k) {
      mpfr_fmms(zp[2 * k], zp[2 * k - 2], zr, zp[2 * k - 1], zi, MPFR_RNDN);
      mpfr_fmma(zp[2 * k + 1], zp[2 * k - 2], zi, zp[2 * k - 1], zr, MPFR_RNDN);
    }
    mpfr_ptr nr = scratch_[0], ni = scratch_[1], dr = scratch_[2], di = scratch_[3];
    horner(fz_, wr, wi, nr, ni);
    horner(fw_, wr, wi, dr, di);
    if (mpfr_zero_p(dr) && mpfr_zero_p(di)) throw IntegrationError("f_w vanishes on the integration path", RetryHint{});
    // q = -(n / d) dz
    mpfr_ptr den = scratch_[4], qr = scratch_[5], qi = scratch_[6];
    mpfr_fmma(den, dr, dr, di, di, MPFR_RNDN);
    mpfr_fmma(qr, nr, dr, ni, di, MPFR_RNDN);
    mpfr_fmms(qi, ni, dr, nr, di, MPFR_RNDN);
    mpfr_div(qr, qr, den, MPFR_RNDN);
    mpfr_div(qi, qi, den, MPFR_RNDN);
    mpfr_fmms(outr, qi, dz_.im.get(), qr, dz_.re.get(), MPFR_RNDN);
    mpfr_fmma(outi, qr, dz_.im.get(), qi, dz_.re.get(), MPFR_RNDN);
    mpfr_neg(outi, outi, MPFR_RNDN);
  }

 private:
  using Row = std::vector<std::pair<std::size_t, std::size_t>>;  // (power, coefficient slot)

  mpfr_ptr coef(std::size_t i) { return (*coef_)[i]; }

  void build(const BiPoly& g, std::vector<Row>& rows) {
    for (const auto& a : g.coeffs()) {
      Row row;
      const auto& c = a.coeffs();
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0) continue;
        row.emplace_back(k, values_.size());
        values_.push_back(c[k]);
        maxk_ = std::max(maxk_, k);
      }
      rows.push_back(std::move(row));
    }
  }

  void horner(const std::vector<Row>& rows, mpfr_srcptr wr, mpfr_srcptr wi, mpfr_ptr accr, mpfr_ptr acci) {
    MpPool& zp = *zp_;
    mpfr_ptr ar = scratch_[7], ai = scratch_[8], tr = scratch_[9], ti = scratch_[10];
    mpfr_set_ui(accr, 0, MPFR_RNDN);
    mpfr_set_ui(acci, 0, MPFR_RNDN);
    for (std::size_t i = rows.size(); i-- > 0;) {
      mpfr_set_ui(ar, 0, MPFR_RNDN);
      mpfr_set_ui(ai, 0, MPFR_RNDN);
      for (const auto& [k, slot] : rows[i]) {
        mpfr_fma(ar, coef(slot), zp[2 * k], ar, MPFR_RNDN);
        mpfr_fma(ai, coef(slot), zp[2 * k + 1], ai, MPFR_RNDN);
      }
      mpfr_fmms(tr, accr, wr, acci, wi, MPFR_RNDN);
      mpfr_fmma(ti, accr, wi, acci, wr, MPFR_RNDN);
      mpfr_add(accr, tr, ar, MPFR_RNDN);
      mpfr_add(acci, ti, ai, MPFR_RNDN);
    }
  }

  MpPool scratch_;
  Complex dz_;
  std::vector<Row> fz_, fw_;
  std::vector<mpq_class> values_;
  std::size_t maxk_ = 0;
  std::unique_ptr<MpPool> coef_, zp_;
};

// Digits lost to cancellation when g is evaluated at (z, w): log10 of the sum
// of term magnitudes over the magnitude of the sum.
double cancellation_digits(const BiPoly& g, const Complex& z, const Complex& w) {
  long bits = std::max(z.bits(), w.bits());
  Real az = abs(z), aw = abs(w);
  Complex sum(bits);
  Real mag(bits);
  Complex wp(1, bits);
  Real awp(1, bits);
  for (const auto& a : g.coeffs()) {
    Complex zp(1, bits);
    Real azp(1, bits);
    Complex row(bits);
    Real arow(bits);
    for (const auto& c : a.coeffs()) {
      if (c != 0) {
        Real rc(c, bits);
        row = row + zp * rc;
        arow = arow + azp * abs(rc);
      }
      zp = zp * z;
      azp = azp * az;
    }
    sum = sum + row * wp;
    mag = mag + arow * awp;
    wp = wp * w;
    awp = awp * aw;
  }
  if (mag.is_zero()) return 0;
  double lv = sum.log10_abs();
  if (lv == kNegInf) return bits_to_digits(bits);
  return std::max(0.0, mag.log10_abs() - lv);
}

SigComplex unit_direction(const SigComplex& s) {
  Real m = abs(s.value());
  return SigComplex(Complex(s.re() / m, s.im() / m), s.log10_error() - m.log10_abs() + 0.5);
}

}  // namespace

const Rkf78Tableau& rkf78() {
  static const Rkf78Tableau t = make_rkf78();
  return t;
}

IntegrationTrace integrate(const BiPoly& f, const SigComplex& w0, const SigComplex& z_s, const SigComplex& z_e,
                           const OdeConfig& cfg) {
  // Working digits cover the cancellation in f_z and f_w at the start.
  double lost = std::max(cancellation_digits(f.derivative_w(), z_s.value(), w0.value()),
                         cancellation_digits(f.derivative_z(), z_s.value(), w0.value()));
  long bits = digits_to_bits(cfg.precision + std::ceil(lost) + 10) + 16;
  const Rkf78Tableau& tab = rkf78();
  Complex zs = z_s.value().with_bits(bits);
  Complex dz = z_e.value().with_bits(bits) - zs;
  Rhs rhs(f, bits, dz);
  double dz_re = mpfr_get_d(dz.re.get(), MPFR_RNDN), dz_im = mpfr_get_d(dz.im.get(), MPFR_RNDN);
  double log_dz = std::log10(std::hypot(dz_re, dz_im));
  auto frac = [&](const long q[2]) { return Real(mpq_class(q[0], q[1]), bits); };
  std::vector<Real> c, b8;
  std::vector<std::vector<Real>> a(13);
  for (int i = 0; i < 13; ++i) {
    c.push_back(frac(tab.c[i]));
    b8.push_back(frac(tab.b8[i]));
    for (int j = 0; j < i; ++j) a[static_cast<std::size_t>(i)].push_back(frac(tab.a[i][j]));
  }
  Real err_w(mpq_class(41, 840), bits);

  // Slots: k stages (26), w (2), stage w (2), z (2), increment (2), error (2), misc (4).
  MpPool m(40, bits);
  auto kr = [&](std::size_t i) { return m[2 * i]; };
  auto ki = [&](std::size_t i) { return m[2 * i + 1]; };
  mpfr_ptr wr = m[26], wi = m[27], sr = m[28], si = m[29], zr = m[30], zi = m[31];
  mpfr_ptr ir = m[32], ii = m[33], er = m[34], ei = m[35], t = m[36], ri = m[37], coefh = m[38], tmp = m[39];
  mpfr_set(wr, w0.re().get(), MPFR_RNDN);
  mpfr_set(wi, w0.im().get(), MPFR_RNDN);

  Real r(0, bits);
  Real one(1, bits);
  Real h(bits);
  mpfr_set_d(h.get(), 0.05, MPFR_RNDN);
  double err_sum = kNegInf;
  IntegrationTrace tr;
  while (r < one) {
    if (tr.steps + tr.rejected > cfg.max_steps) {
      throw IntegrationError("integration exceeded " + std::to_string(cfg.max_steps) + " steps",
                             RetryHint{std::nullopt, std::nullopt, static_cast<int>(2 * cfg.precision)});
    }
    Real rest = one - r;
    bool last = !(h < rest);
    if (last) h = rest;
    for (std::size_t i = 0; i < 13; ++i) {
      mpfr_set(sr, wr, MPFR_RNDN);
      mpfr_set(si, wi, MPFR_RNDN);
      for (std::size_t j = 0; j < i; ++j) {
        if (a[i][j].is_zero()) continue;
        mpfr_mul(coefh, a[i][j].get(), h.get(), MPFR_RNDN);
        mpfr_fma(sr, coefh, kr(j), sr, MPFR_RNDN);
        mpfr_fma(si, coefh, ki(j), si, MPFR_RNDN);
      }
      mpfr_fma(ri, c[i].get(), h.get(), r.get(), MPFR_RNDN);
      mpfr_fma(zr, dz.re.get(), ri, zs.re.get(), MPFR_RNDN);
      mpfr_fma(zi, dz.im.get(), ri, zs.im.get(), MPFR_RNDN);
      rhs(zr, zi, sr, si, kr(i), ki(i));
    }
    mpfr_set_ui(ir, 0, MPFR_RNDN);
    mpfr_set_ui(ii, 0, MPFR_RNDN);
    for (std::size_t i = 0; i < 13; ++i) {
      if (b8[i].is_zero()) continue;
      mpfr_fma(ir, b8[i].get(), kr(i), ir, MPFR_RNDN);
      mpfr_fma(ii, b8[i].get(), ki(i), ii, MPFR_RNDN);
    }
    // 41/840 h (k0 + k10 - k11 - k12)
    mpfr_add(er, kr(0), kr(10), MPFR_RNDN);
    mpfr_sub(er, er, kr(11), MPFR_RNDN);
    mpfr_sub(er, er, kr(12), MPFR_RNDN);
    mpfr_add(ei, ki(0), ki(10), MPFR_RNDN);
    mpfr_sub(ei, ei, ki(11), MPFR_RNDN);
    mpfr_sub(ei, ei, ki(12), MPFR_RNDN);
    mpfr_mul(t, err_w.get(), h.get(), MPFR_RNDN);
    mpfr_mul(er, er, t, MPFR_RNDN);
    mpfr_mul(ei, ei, t, MPFR_RNDN);
    double le = log10_hypot(er, ei, tmp);
    double lw = std::max(0.0, log10_hypot(wr, wi, tmp));
    double ltol = lw - cfg.accuracy;
    if (le <= ltol) {
      mpfr_fma(wr, ir, h.get(), wr, MPFR_RNDN);
      mpfr_fma(wi, ii, h.get(), wi, MPFR_RNDN);
      r = last ? one : r + h;
      err_sum = log10_sum(err_sum, le);
      ++tr.steps;
    } else {
      ++tr.rejected;
    }
    double factor = le == kNegInf ? 4.0 : 0.9 * std::pow(10.0, (ltol - le) / 8.0);
    factor = std::clamp(factor, 0.2, 4.0);
    mpfr_mul_d(h.get(), h.get(), factor, MPFR_RNDN);
    // underflow relative to |z| here: paths can span many decades
    double zr_d = mpfr_get_d(zs.re.get(), MPFR_RNDN) + r.to_double() * dz_re;
    double zi_d = mpfr_get_d(zs.im.get(), MPFR_RNDN) + r.to_double() * dz_im;
    if (log_dz > kNegInf && h.log10_abs() + log_dz < std::log10(std::hypot(zr_d, zi_d)) - 15 && r < one) {
      throw IntegrationError("step size underflow: the path passes too close to a singularity",
                             RetryHint{std::nullopt, std::nullopt, static_cast<int>(2 * cfg.precision)});
    }
  }
  Complex w{Real(bits), Real(bits)};
  mpfr_set(w.re.get(), wr, MPFR_RNDN);
  mpfr_set(w.im.get(), wi, MPFR_RNDN);
  double floor_err = std::max(0.0, w.log10_abs()) - cfg.precision;
  tr.value = SigComplex(std::move(w), log10_sum(err_sum, floor_err));
  return tr;
}

std::vector<ContinuedValue> continue_values(const BiPoly& f, const std::vector<SigComplex>& start, const SigComplex& z_s,
                                            const SigComplex& z_e, const OdeConfig& cfg, const Fiber& at_end, int N,
                                            MatchRule rule) {
  std::vector<ContinuedValue> out;
  std::vector<SigComplex> ends;
  for (const auto& w0 : start) {
    IntegrationTrace tr = integrate(f, w0, z_s, z_e, cfg);
    ContinuedValue cv;
    cv.start = w0;
    cv.integrated = tr.value;
    cv.steps = tr.steps;
    ends.push_back(tr.value);
    out.push_back(std::move(cv));
  }
  Assignment a;
  try {
    a = match(ends, at_end, N, rule);
  } catch (const MatchToleranceError& e) {
    throw IntegrationError(std::string("continued value left its sheet: ") + e.what(),
                           RetryHint{std::nullopt, std::nullopt, static_cast<int>(2 * cfg.precision)});
  } catch (const AmbiguousMatchError& e) {
    throw IntegrationError(std::string("two continued sheets landed on one root: ") + e.what(),
                           RetryHint{std::nullopt, std::nullopt, static_cast<int>(2 * cfg.precision)});
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].fiber_index = a.index[k];
    out[k].actual = at_end.roots[a.index[k]];
    out[k].log10_difference = a.log10_distance[k];
  }
  return out;
}

LocalBasis local_basis(const BiPoly& f, const SigComplex& s, const ExpandConfig& cfg) {
  LocalBasis lb;
  lb.s = s;
  FracPoly g = FracPoly::from(shift_z(f, s));
  Basis b = expand_basis(g, cfg);
  bool any = false;
  for (auto& series : b.series) {
    LocalBranch br;
    br.ramified = series.d >= 2;
    br.pole = series.leading_exponent() < 0;
    any = any || br.singular();
    br.series = std::move(series);
    lb.branches.push_back(std::move(br));
  }
  if (!any) throw InvariantViolation("no singular local branch at " + format_short(s.value()));
  return lb;
}

// ---------------------------------------------------------------- radius

RadiusReport radius_all(const BiPoly& f, const RadiusConfig& cfg, const Inventory* inventory_override) {
  RadiusReport rep;
  long bits = digits_to_bits(cfg.digits) + 16;
  Normalized nz = normalize(f);
  const BiPoly& G = nz.g;
  rep.inventory = inventory_override ? *inventory_override : inventory(f, cfg.digits);
  ExpandConfig ec;
  ec.digits = cfg.digits;
  ec.terms = cfg.terms;
  rep.basis = expand_basis(f, ec);
  BasePoint bp = base_point(rep.inventory, bits);
  rep.z_m = bp.z;
  rep.z_m_defaulted = bp.defaulted;
  try {
    rep.labels = sort_branches(f, rep.basis.series, rep.z_m, cfg.digits, cfg.N, cfg.rule);
  } catch (const MatchToleranceError& e) {
    throw MatchToleranceError(std::string("branch values at z_m: ") + e.what(), RetryHint{std::nullopt, 2 * cfg.terms, std::nullopt});
  }
  std::size_t nb = rep.labels.size();
  std::vector<bool> alive(nb, true);
  std::vector<std::optional<int>> ring_of(nb);
  ExpandConfig lc;
  lc.digits = cfg.digits;
  lc.terms = cfg.local_terms > 0 ? cfg.local_terms : cfg.terms;
  lc.singular_only = true;
  auto scale_E = [&](SigComplex v, const SigComplex& z) { return nz.E == 0 ? v : v * pow(z, nz.E); };

  for (const auto& ring : rep.inventory.rings) {
    if (std::none_of(alive.begin(), alive.end(), [](bool b) { return b; })) break;
    if (cfg.max_ring && ring.index > *cfg.max_ring) {
      rep.complete = false;
      break;
    }
    std::vector<bool> hit(nb, false);
    for (const auto& pt : ring.members) {
      std::string where = "ring " + std::to_string(ring.index) + ", s = " + format_short(pt.location.value());
      ContinuationStep step;
      step.ring = ring.index;
      step.point = pt;
      SigComplex dir = unit_direction(pt.location);
      const SigComplex& s1 = rep.inventory.rings.front().modulus;
      SigComplex half = SigComplex::exact(mpq_class(1, 2), bits);
      SigComplex rs = s1 * half;
      step.z_s = rs * dir;
      // z_e: half the nearest-neighbour distance short of s_n, not inside |z_s|.
      SigComplex re = ring.modulus - pt.nearest_neighbor_distance * half;
      if (re.re() < rs.re()) re = rs;
      step.z_e = re * dir;

      // Start values on the fiber at z_s.
      std::vector<SigComplex> computed;
      std::vector<std::pair<std::size_t, long>> who;
      for (std::size_t b = 0; b < nb; ++b) {
        if (!alive[b]) continue;
        const PuiseuxSeries& ser = rep.basis.series[rep.labels[b].basis_index];
        for (long j = 0; j < ser.d; ++j) {
          computed.push_back(scale_E(eval(ser, j, step.z_s), step.z_s));
          who.emplace_back(b, j);
        }
      }
      Fiber fs = fiber(G, step.z_s, cfg.digits);
      Assignment as;
      try {
        as = match(computed, fs, cfg.N, cfg.rule);
      } catch (const MatchToleranceError& e) {
        throw MatchToleranceError(where + ": series values at z_s: " + e.what(),
                                  RetryHint{std::nullopt, 2 * cfg.terms, std::nullopt});
      }
      std::vector<SigComplex> starts;
      for (std::size_t i : as.index) starts.push_back(fs.roots[i]);

      Fiber fe = fiber(G, step.z_e, cfg.digits);
      std::vector<ContinuedValue> cont;
      try {
        cont = continue_values(G, starts, step.z_s, step.z_e, cfg.ode, fe, cfg.N, cfg.rule);
      } catch (const IntegrationError& e) {
        throw IntegrationError(where + ": " + e.what(), e.hint());
      }

      LocalBasis lb = local_basis(G, pt.location, lc);
      SigComplex dzl = step.z_e - pt.location;
      std::vector<SigComplex> local_vals;
      for (const auto& br : lb.branches) {
        if (!br.singular()) continue;
        for (long j = 0; j < br.series.d; ++j) local_vals.push_back(eval(br.series, j, dzl));
      }
      Assignment al;
      try {
        al = match(local_vals, fe, cfg.N, cfg.rule);
      } catch (const MatchToleranceError& e) {
        throw MatchToleranceError(where + ": local singular branches at z_e: " + e.what(),
                                  RetryHint{std::nullopt, 2 * lc.terms, std::nullopt});
      }
      step.singular_fiber = al.index;
      std::sort(step.singular_fiber.begin(), step.singular_fiber.end());

      std::vector<bool> hit_here(nb, false);
      for (std::size_t k = 0; k < cont.size(); ++k) {
        auto [b, j] = who[k];
        bool imp = std::binary_search(step.singular_fiber.begin(), step.singular_fiber.end(), cont[k].fiber_index);
        if (imp) hit_here[b] = true;
        step.traces.push_back({rep.labels[b].label, j, cont[k], imp});
      }
      for (std::size_t b = 0; b < nb; ++b) {
        if (hit_here[b]) {
          hit[b] = true;
          step.impinged.push_back(rep.labels[b].label);
        }
        if (alive[b] && !hit[b]) step.surviving.push_back(rep.labels[b].label);
      }
      rep.steps.push_back(std::move(step));
    }
    for (std::size_t b = 0; b < nb; ++b) {
      if (hit[b]) {
        alive[b] = false;
        ring_of[b] = ring.index;
      }
    }
  }

  for (std::size_t b = 0; b < nb; ++b) {
    ConvergenceResult res;
    res.label = rep.labels[b].label;
    const PuiseuxSeries& ser = rep.basis.series[rep.labels[b].basis_index];
    res.terms = ser.term_count();
    res.ring = ring_of[b];
    if (res.ring) {
      res.modulus = rep.inventory.rings[static_cast<std::size_t>(*res.ring - 1)].modulus;
      if (cfg.checks > 0) {
        res.log10_max_error =
            random_point_check(f, ser, res.modulus.re().to_double(), cfg.checks, cfg.seed + b);
      }
    }
    rep.results.push_back(std::move(res));
  }
  return rep;
}

double random_point_check(const BiPoly& f, const PuiseuxSeries& s, double radius, int count, std::uint64_t seed,
                          double digits) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mod(radius / 100, 99 * radius / 100);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  long bits = digits_to_bits(digits) + 16;
  double worst = kNegInf;
  for (int n = 0; n < count; ++n) {
    double r = mod(rng), t = ang(rng);
    Real rr(bits), tt(bits);
    mpfr_set_d(rr.get(), r, MPFR_RNDN);
    mpfr_set_d(tt.get(), t, MPFR_RNDN);
    SigComplex z(polar(rr, tt), std::log10(r) - digits);
    Fiber fb = fiber(f, z, digits);
    for (long j = 0; j < s.d; ++j) {
      SigComplex v = eval(s, j, z);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& root : fb.roots) best = std::min(best, log10_dist(v.value(), root.value()));
      worst = std::max(worst, best);
    }
  }
  return worst;
}

StraddleResult straddle_test(const RadiusReport& report, const ConvergenceResult& result, int max_terms) {
  StraddleResult out;
  out.label = result.label;
  if (!result.ring) return out;
  out.ring = *result.ring;
  std::size_t idx = 0;
  for (const auto& l : report.labels) {
    if (l.label == result.label) idx = l.basis_index;
  }
  const PuiseuxSeries& s = report.basis.series[idx];
  const RegularForm& rf = report.basis.forms[idx];
  const auto& rings = report.inventory.rings;
  std::size_t n = static_cast<std::size_t>(out.ring - 1);
  double rn = rings[n].modulus.re().to_double();
  double rprev = n > 0 ? rings[n - 1].modulus.re().to_double() : 0.0;
  double rnext = n + 1 < rings.size() ? rings[n + 1].modulus.re().to_double() : 2 * rn;
  out.z_c = rprev + 0.5 * (rn - rprev);
  out.z_d = std::min(rn + 0.9 * (rnext - rn), 2 * rn);
  double need = 2.0 * static_cast<double>(s.d) * std::log(30.0) / std::log(out.z_d / rn);
  int terms = 256;
  while (terms < need && terms < max_terms) terms *= 2;
  out.terms = std::min(terms, max_terms);
  int tail = out.terms - static_cast<int>(s.prefix.size());
  double scale = std::pow(out.z_d, 1.0 / static_cast<double>(s.d));
  PuiseuxSeries ext = extend_series(s, rf, tail, 128, scale);
  auto at = [&](double x) {
    Real v(128);
    mpfr_set_d(v.get(), x, MPFR_RNDN);
    return SigComplex(Complex(v, Real(128)), std::log10(x) - 30);
  };
  PartialSumProfile pin = partial_sum_profile(ext, 0, at(out.z_c), out.terms);
  PartialSumProfile pout = partial_sum_profile(ext, 0, at(out.z_d), out.terms);
  out.inside = pin.hint;
  out.outside = pout.hint;
  out.growth_inside = pin.growth;
  out.growth_outside = pout.growth;
  return out;
}

}  // namespace puiseux
