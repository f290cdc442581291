#include "puiseux/polygon.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "puiseux/errors.hpp"

namespace puiseux {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

long den_of(const mpq_class& q) { return q.get_den().get_si(); }

long lcm_long(long a, long b) { return std::lcm(a, b); }

// Numerator of q over denominator den (den must be a multiple of q's).
long num_over(const mpq_class& q, long den) {
  mpz_class v = q.get_num() * (den / q.get_den());
  return v.get_si();
}

}  // namespace

// ---------------------------------------------------------------- FracPoly

std::optional<mpq_class> FracPoly::order(int i) const {
  if (i < 0 || i > degree_w() || a[static_cast<std::size_t>(i)].empty()) return std::nullopt;
  return mpq_class(a[static_cast<std::size_t>(i)].begin()->first, den);
}

SigComplex FracPoly::coeff(int i, const mpq_class& e, long bits) const {
  if (i < 0 || i > degree_w()) return SigComplex(bits);
  mpq_class scaled = e * den;
  if (scaled.get_den() != 1) return SigComplex(bits);
  long key = scaled.get_num().get_si();
  const auto& m = a[static_cast<std::size_t>(i)];
  auto it = m.find(key);
  return it == m.end() ? SigComplex(bits) : it->second;
}

long FracPoly::bits() const {
  long b = 64;
  for (const auto& m : a)
    for (const auto& [k, v] : m) b = std::max(b, v.bits());
  return b;
}

std::size_t FracPoly::term_count() const {
  std::size_t n = 0;
  for (const auto& m : a) n += m.size();
  return n;
}

FracPoly FracPoly::from(const BiPoly& f, long bits) {
  FracPoly out;
  for (const auto& p : f.coeffs()) {
    std::map<long, SigComplex> m;
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
      if (sgn(p.coeffs()[k]) != 0) m.emplace(static_cast<long>(k), SigComplex::exact(p.coeffs()[k], bits));
    }
    out.a.push_back(std::move(m));
  }
  return out;
}

FracPoly FracPoly::from(const NumBiPoly& f) {
  FracPoly out;
  for (const auto& p : f.a) {
    std::map<long, SigComplex> m;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (!p[k].value().is_zero() || !p[k].is_exact()) m.emplace(static_cast<long>(k), p[k]);
    }
    out.a.push_back(std::move(m));
  }
  return out;
}

FracPoly FracPoly::with_den(long new_den) const {
  if (new_den == den) return *this;
  if (new_den % den != 0) throw InvariantViolation("exponent denominator must be a multiple");
  long s = new_den / den;
  FracPoly out;
  out.den = new_den;
  for (const auto& m : a) {
    std::map<long, SigComplex> nm;
    for (const auto& [k, v] : m) nm.emplace(k * s, v);
    out.a.push_back(std::move(nm));
  }
  return out;
}

FracPoly prune(const FracPoly& f, double accuracy, int level, const std::string& where, ResidualLog* log) {
  FracPoly out;
  out.den = f.den;
  for (std::size_t i = 0; i < f.a.size(); ++i) {
    std::map<long, SigComplex> m;
    for (const auto& [k, v] : f.a[i]) {
      if (is_numerically_zero(v, accuracy)) {
        if (log && !v.value().is_zero()) {
          log->push_back({level, static_cast<int>(i), mpq_class(k, f.den), v, where});
        }
        continue;
      }
      m.emplace(k, v);
    }
    out.a.push_back(std::move(m));
  }
  while (!out.a.empty() && out.a.back().empty()) out.a.pop_back();
  return out;
}

// ---------------------------------------------------------------- normalize

namespace {

int normal_exponent(const std::vector<std::optional<long>>& ord) {
  int n = static_cast<int>(ord.size()) - 1;
  long on = *ord.back();
  long E = 0;
  for (int i = 0; i < n; ++i) {
    if (!ord[static_cast<std::size_t>(i)]) continue;
    long num = on - *ord[static_cast<std::size_t>(i)];
    long dd = n - i;
    // ceil(num / dd) for positive dd
    long c = num >= 0 ? (num + dd - 1) / dd : -((-num) / dd);
    E = std::max(E, c);
  }
  return static_cast<int>(E);
}

}  // namespace

Normalized normalize(const BiPoly& f) {
  int n = f.degree_w();
  std::vector<std::optional<long>> ord;
  for (int i = 0; i <= n; ++i) {
    int o = f.coeff(i).order();
    ord.push_back(o < 0 ? std::nullopt : std::optional<long>(o));
  }
  int E = normal_exponent(ord);
  int m = E * n - static_cast<int>(*ord.back());
  std::vector<UniPoly> g;
  for (int i = 0; i <= n; ++i) {
    const UniPoly& a = f.coeff(i);
    if (a.is_zero()) {
      g.emplace_back();
      continue;
    }
    int shift = m - E * i;
    std::vector<mpq_class> c;
    int deg = a.degree();
    for (int k = 0; k <= deg; ++k) {
      if (sgn(a.coeff(k)) == 0) continue;
      int e = k + shift;
      if (e < 0) throw InvariantViolation("normalization produced a negative power");
      if (static_cast<int>(c.size()) <= e) c.resize(static_cast<std::size_t>(e) + 1);
      c[static_cast<std::size_t>(e)] = a.coeff(k);
    }
    g.emplace_back(std::move(c));
  }
  return {BiPoly(std::move(g)), E, m};
}

NormalizedNum normalize(const FracPoly& f) {
  if (f.den != 1) throw InvariantViolation("normalize expects integer exponents");
  int n = f.degree_w();
  if (n < 1) throw InvariantViolation("normalize expects degree at least 1 in w");
  std::vector<std::optional<long>> ord;
  for (int i = 0; i <= n; ++i) {
    const auto& m = f.a[static_cast<std::size_t>(i)];
    ord.push_back(m.empty() ? std::nullopt : std::optional<long>(m.begin()->first));
  }
  int E = normal_exponent(ord);
  int mm = E * n - static_cast<int>(*ord.back());
  FracPoly g;
  for (int i = 0; i <= n; ++i) {
    std::map<long, SigComplex> nm;
    for (const auto& [k, v] : f.a[static_cast<std::size_t>(i)]) {
      long e = k + mm - static_cast<long>(E) * i;
      if (e < 0) throw InvariantViolation("normalization produced a negative power");
      nm.emplace(e, v);
    }
    g.a.push_back(std::move(nm));
  }
  return {std::move(g), E, mm};
}

// ---------------------------------------------------------------- lower leg

std::vector<PolyPoint> support(const FracPoly& f) {
  std::vector<PolyPoint> pts;
  for (int i = 0; i <= f.degree_w(); ++i) {
    auto o = f.order(i);
    if (o) pts.push_back({i, *o});
  }
  return pts;
}

std::vector<Segment> lower_leg(const std::vector<PolyPoint>& support_in, bool exclude_zero_slope) {
  std::vector<PolyPoint> pts = support_in;
  std::sort(pts.begin(), pts.end(), [](const PolyPoint& a, const PolyPoint& b) { return a.i < b.i; });
  std::vector<Segment> out;
  if (pts.size() < 2) return out;
  auto cross = [](const PolyPoint& o, const PolyPoint& a, const PolyPoint& b) {
    return mpq_class((a.i - o.i) * (b.order - o.order) - (a.order - o.order) * (b.i - o.i));
  };
  std::vector<PolyPoint> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2 && sgn(cross(hull[hull.size() - 2], hull.back(), p)) <= 0) hull.pop_back();
    hull.push_back(p);
  }
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const auto& p = hull[k];
    const auto& q = hull[k + 1];
    mpq_class lambda = (p.order - q.order) / mpq_class(q.i - p.i);
    if (sgn(lambda) < 0) break;
    if (sgn(lambda) == 0 && exclude_zero_slope) break;
    Segment s;
    s.lambda = lambda;
    s.beta = p.order + lambda * p.i;
    for (const auto& r : pts) {
      if (r.i < p.i || r.i > q.i) continue;
      if (r.order + s.lambda * r.i == s.beta) s.points.push_back(r);
    }
    out.push_back(std::move(s));
  }
  return out;
}

Segment with_coefficients(Segment s, const FracPoly& f) {
  long bits = f.bits();
  s.coeffs.clear();
  for (const auto& p : s.points) s.coeffs.push_back(f.coeff(p.i, p.order, bits));
  return s;
}

CharEq char_eq(const Segment& seg, long den_prev) {
  if (seg.points.size() < 2 || seg.coeffs.size() != seg.points.size()) {
    throw InvariantViolation("segment needs at least two points with coefficients");
  }
  CharEq ce;
  long bits = seg.coeffs[0].bits();
  int il = seg.points.front().i;
  int ir = seg.points.back().i;
  ce.i_left = il;
  ce.K.assign(static_cast<std::size_t>(ir) + 1, SigComplex(bits));
  for (std::size_t k = 0; k < seg.points.size(); ++k) ce.K[static_cast<std::size_t>(seg.points[k].i)] = seg.coeffs[k];
  mpq_class scaled = seg.lambda * den_prev;
  ce.q = static_cast<int>(den_of(scaled));
  int rdeg = (ir - il) / ce.q;
  ce.reduced.assign(static_cast<std::size_t>(rdeg) + 1, SigComplex(bits));
  for (std::size_t k = 0; k < seg.points.size(); ++k) {
    int off = seg.points[k].i - il;
    if (off % ce.q != 0) throw InvariantViolation("segment point off the conjugate lattice");
    ce.reduced[static_cast<std::size_t>(off / ce.q)] = seg.coeffs[k];
  }
  return ce;
}

// ---------------------------------------------------------------- descent

FracPoly substitute(const FracPoly& f, const mpq_class& lambda, const mpq_class& beta, const SigComplex& c) {
  long nd = lcm_long(lcm_long(f.den, den_of(lambda)), den_of(beta));
  int n = f.degree_w();
  long bits = std::max(f.bits(), c.bits());
  long lam = num_over(lambda, nd);
  long bet = num_over(beta, nd);
  long scale = nd / f.den;
  // Group by the new exponent, then Taylor-shift each group's w-polynomial.
  std::map<long, std::vector<SigComplex>> groups;
  for (int i = 0; i <= n; ++i) {
    for (const auto& [k, v] : f.a[static_cast<std::size_t>(i)]) {
      long e = k * scale + lam * i - bet;
      auto it = groups.find(e);
      if (it == groups.end()) {
        it = groups.emplace(e, std::vector<SigComplex>(static_cast<std::size_t>(n) + 1, SigComplex(bits))).first;
      }
      it->second[static_cast<std::size_t>(i)] = v;
    }
  }
  FracPoly out;
  out.den = nd;
  out.a.resize(static_cast<std::size_t>(n) + 1);
  for (auto& [e, b] : groups) {
    int top = n;
    while (top > 0 && b[static_cast<std::size_t>(top)].value().is_zero() && b[static_cast<std::size_t>(top)].is_exact()) --top;
    for (int i = 0; i < top; ++i) {
      for (int j = top - 1; j >= i; --j) b[static_cast<std::size_t>(j)] += c * b[static_cast<std::size_t>(j) + 1];
    }
    for (int j = 0; j <= top; ++j) {
      const auto& v = b[static_cast<std::size_t>(j)];
      if (v.value().is_zero() && v.is_exact()) continue;
      out.a[static_cast<std::size_t>(j)].emplace(e, v);
    }
  }
  return out;
}

namespace {

void expand_node(PolygonNode& node, const PolygonConfig& cfg, ResidualLog* log);

}  // namespace

PolygonNode descend(const PolygonNode& node, std::size_t seg_index, const RootCluster& c, const SigComplex& x_root,
                    const PolygonConfig& cfg, ResidualLog* log) {
  if (c.multiplicity < 2) throw InvariantViolation("descend requires a multiple characteristic root");
  const Segment& seg = node.segments.at(seg_index);
  const CharEq& ce = node.char_eqs.at(seg_index);
  PolygonNode child;
  child.level = node.level + 1;
  std::string where = "level " + std::to_string(child.level);
  child.f = prune(substitute(node.f, seg.lambda, seg.beta, x_root), cfg.prune_accuracy, child.level, where, log);
  for (int i = 0; i <= child.f.degree_w(); ++i) {
    auto o = child.f.order(i);
    if (o && sgn(*o) < 0) {
      throw EscalationError("characteristic root is not a root at the working accuracy (" + where + ")",
                            RetryHint{static_cast<int>(cfg.digits * 2), std::nullopt, std::nullopt});
    }
  }
  child.den_path = node.den_path * ce.q;
  child.prefix = node.prefix;
  child.e_path = node.e_path + seg.lambda;
  child.prefix.emplace_back(child.e_path, x_root);
  expand_node(child, cfg, log);
  return child;
}

namespace {

void expand_node(PolygonNode& node, const PolygonConfig& cfg, ResidualLog* log) {
  auto pts = support(node.f);
  if (pts.empty()) throw InvariantViolation("empty support");
  if (node.level > 1 && pts.front().i > 0) {
    node.notes.push_back("level " + std::to_string(node.level) + ": w = 0 is a root (series terminates); rejected");
  }
  auto segs = lower_leg(pts, node.level > 1);
  for (auto& s : segs) s = with_coefficients(std::move(s), node.f);
  node.segments = segs;
  for (std::size_t si = 0; si < segs.size(); ++si) {
    const Segment& seg = node.segments[si];
    CharEq ce = char_eq(seg, node.den_path);
    node.char_eqs.push_back(ce);
    auto cl = clustered_roots(ce.reduced, cfg.digits, cfg.cluster_accuracy);
    node.clusters.push_back(cl);
    for (const auto& c : cl) {
      if (is_numerically_zero(c.center, cfg.prune_accuracy)) {
        node.notes.push_back("level " + std::to_string(node.level) + ": zero characteristic root rejected");
        continue;
      }
      SigComplex x = principal_root(c.center, ce.q);
      if (c.multiplicity == 1) {
        Leaf leaf;
        leaf.level = node.level;
        leaf.prefix = node.prefix;
        leaf.e_last = node.e_path + seg.lambda;
        leaf.lambda = seg.lambda;
        leaf.beta = seg.beta;
        leaf.root = x;
        leaf.d = node.den_path * ce.q;
        leaf.f = node.f;
        node.leaves.push_back(std::move(leaf));
      } else {
        node.children.push_back(descend(node, si, c, x, cfg, log));
      }
    }
  }
}

void collect(const PolygonNode& n, std::vector<const Leaf*>& out) {
  for (const auto& l : n.leaves) out.push_back(&l);
  for (const auto& c : n.children) collect(c, out);
}

}  // namespace

PolygonNode build_tree(const FracPoly& g, const PolygonConfig& cfg, ResidualLog* log) {
  PolygonNode root;
  root.level = 1;
  root.f = g;
  expand_node(root, cfg, log);
  return root;
}

std::vector<const Leaf*> collect_leaves(const PolygonNode& root) {
  std::vector<const Leaf*> out;
  collect(root, out);
  return out;
}

int tree_depth(const PolygonNode& root) {
  int d = 0;
  for (const auto& c : root.children) d = std::max(d, tree_depth(c));
  return d + 1;
}

// ---------------------------------------------------------------- regular form

RegularForm regular_form(const Leaf& leaf) {
  RegularForm rf;
  rf.d = leaf.d;
  rf.rk = leaf.root;
  const FracPoly& f = leaf.f;
  long bits = std::max(f.bits(), leaf.root.bits());
  int n = f.degree_w();
  rf.fbar.assign(static_cast<std::size_t>(n) + 1, NumPoly{});
  for (int i = 0; i <= n; ++i) {
    for (const auto& [k, v] : f.a[static_cast<std::size_t>(i)]) {
      mpq_class e = mpq_class(k, f.den) + leaf.lambda * i - leaf.beta;
      if (sgn(e) < 0) throw InvariantViolation("regular form has a negative power");
      mpq_class tp = e * leaf.d;
      if (tp.get_den() != 1) throw InvariantViolation("regular form exponent is not a multiple of 1/d");
      long p = tp.get_num().get_si();
      auto& row = rf.fbar[static_cast<std::size_t>(i)];
      if (static_cast<long>(row.size()) <= p) row.resize(static_cast<std::size_t>(p) + 1, SigComplex(bits));
      row[static_cast<std::size_t>(p)] = v;
    }
  }
  NumPoly k0;
  for (const auto& row : rf.fbar) k0.push_back(row.empty() ? SigComplex(bits) : row[0]);
  SigComplex r = eval(k0, rf.rk);
  if (!is_numerically_zero(r)) {
    throw InvariantViolation("regular form does not vanish at the characteristic root");
  }
  return rf;
}

// ---------------------------------------------------------------- dump

namespace {

nlohmann::ordered_json node_json(const PolygonNode& n, int digits) {
  nlohmann::ordered_json j;
  j["level"] = n.level;
  j["cycle_denominator"] = n.den_path;
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& p : support(n.f)) pts.push_back({p.i, p.order.get_str()});
  j["support"] = pts;
  nlohmann::ordered_json segs = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < n.segments.size(); ++s) {
    nlohmann::ordered_json sj;
    sj["lambda"] = n.segments[s].lambda.get_str();
    sj["beta"] = n.segments[s].beta.get_str();
    nlohmann::ordered_json sp = nlohmann::ordered_json::array();
    for (const auto& p : n.segments[s].points) sp.push_back({p.i, p.order.get_str()});
    sj["points"] = sp;
    nlohmann::ordered_json kc = nlohmann::ordered_json::array();
    for (const auto& c : n.char_eqs[s].K) kc.push_back(format_short(c.value(), digits));
    sj["K"] = kc;
    sj["q"] = n.char_eqs[s].q;
    nlohmann::ordered_json roots = nlohmann::ordered_json::array();
    for (const auto& c : n.clusters[s]) {
      roots.push_back({{"y", format_short(c.center.value(), digits)}, {"multiplicity", c.multiplicity}});
    }
    sj["roots"] = roots;
    segs.push_back(sj);
  }
  j["segments"] = segs;
  j["leaves"] = n.leaves.size();
  if (!n.notes.empty()) j["notes"] = n.notes;
  nlohmann::ordered_json ch = nlohmann::ordered_json::array();
  for (const auto& c : n.children) ch.push_back(node_json(c, digits));
  j["children"] = ch;
  return j;
}

}  // namespace

std::string dump_tree(const PolygonNode& root, int digits) { return node_json(root, digits).dump(2); }

}  // namespace puiseux
