#include "puiseux/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "puiseux/errors.hpp"
#include "puiseux/roots.hpp"

namespace puiseux {

namespace {

SigComplex magnitude(const SigComplex& x) {
  return SigComplex(Complex(abs(x.value()), Real(x.bits())), x.log10_error());
}

std::vector<SigComplex> nonzero_roots(const UniPoly& p, double digits, long bits) {
  std::vector<SigComplex> out;
  UniPoly q = p.strip_zero_roots();
  if (q.degree() < 1) return out;
  for (const auto& part : squarefree_decomposition(q)) {
    if (part.degree() < 1) continue;
    for (auto& r : isolate(to_num(part, bits), digits)) out.push_back(std::move(r));
  }
  return out;
}

// Same modulus at `accuracy` significant digits, or within the error bounds.
bool same_modulus(const SigComplex& a, const SigComplex& b, double accuracy) {
  double la = a.log10_abs(), lb = b.log10_abs();
  double ld = log10_dist(a.value(), b.value());
  if (ld == -std::numeric_limits<double>::infinity()) return true;
  double lerr = log10_sum(a.log10_error(), b.log10_error());
  return ld <= std::max(lerr, std::max(la, lb) - accuracy);
}

}  // namespace

std::size_t Inventory::point_count() const {
  std::size_t n = 0;
  for (const auto& r : rings) n += r.members.size();
  return n;
}

std::vector<SingularPoint> singular_points(const BiPoly& f, double digits, bool* origin) {
  if (f.degree_w() < 1) throw InvariantViolation("polynomial has no w dependence");
  long bits = digits_to_bits(digits) + 16;
  UniPoly R = resultant_w(f);
  if (R.is_zero()) throw InvariantViolation("resultant vanishes identically: f has a repeated factor in w");
  if (origin) *origin = R.order() > 0 || f.leading().order() > 0;
  std::vector<SingularPoint> pts;
  for (auto& r : nonzero_roots(R, digits, bits)) {
    SingularPoint p;
    p.location = std::move(r);
    pts.push_back(std::move(p));
  }
  for (auto& r : nonzero_roots(f.leading(), digits, bits)) {
    auto it = std::find_if(pts.begin(), pts.end(),
                           [&](const SingularPoint& p) { return numerically_equal(p.location, r); });
    if (it != pts.end()) {
      it->is_pole = true;
    } else {
      SingularPoint p;
      p.location = std::move(r);
      p.is_pole = true;
      pts.push_back(std::move(p));
    }
  }
  return pts;
}

std::vector<SingularRing> rings(std::vector<SingularPoint> points, double accuracy, bool origin_singular) {
  std::vector<SigComplex> mods;
  for (const auto& p : points) mods.push_back(magnitude(p.location));
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mods[a].re() < mods[b].re(); });
  // Nearest neighbours over the whole inventory.
  for (std::size_t i = 0; i < points.size(); ++i) {
    SigComplex best = origin_singular ? mods[i] : SigComplex(points[i].location.bits());
    bool have = origin_singular;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      SigComplex d = magnitude(points[i].location - points[j].location);
      if (!have || d.re() < best.re()) {
        best = d;
        have = true;
      }
    }
    // a lone point with a regular origin: measure against the origin anyway
    if (!have) best = mods[i];
    points[i].nearest_neighbor_distance = best;
  }
  std::vector<SingularRing> out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::size_t i = order[k];
    if (out.empty() || !same_modulus(out.back().modulus, mods[i], accuracy)) {
      SingularRing r;
      r.index = static_cast<int>(out.size()) + 1;
      r.modulus = mods[i];
      out.push_back(std::move(r));
    }
    points[i].ring = out.back().index;
    out.back().members.push_back(points[i]);
  }
  for (auto& r : out) {
    std::stable_sort(r.members.begin(), r.members.end(), [](const SingularPoint& a, const SingularPoint& b) {
      return arg(a.location.value()) < arg(b.location.value());
    });
  }
  return out;
}

Inventory inventory(const BiPoly& f, double digits) {
  Inventory inv;
  inv.digits = digits;
  auto pts = singular_points(f, digits, &inv.origin_singular);
  inv.rings = rings(std::move(pts), digits / 2, inv.origin_singular);
  return inv;
}

Inventory without_rings(const Inventory& inv, const std::vector<int>& ring_indices) {
  std::vector<SingularPoint> pts;
  for (const auto& r : inv.rings) {
    if (std::find(ring_indices.begin(), ring_indices.end(), r.index) != ring_indices.end()) continue;
    for (const auto& p : r.members) pts.push_back(p);
  }
  Inventory out;
  out.digits = inv.digits;
  out.origin_singular = inv.origin_singular;
  out.rings = rings(std::move(pts), inv.digits / 2, inv.origin_singular);
  return out;
}

BasePoint base_point(const Inventory& inv, long bits) {
  BasePoint b;
  if (inv.rings.empty()) {
    b.z = SigComplex::exact(mpq_class(1, 2), bits);
    b.defaulted = true;
    return b;
  }
  const SigComplex& m = inv.rings.front().modulus;
  b.z = m.with_bits(std::max(bits, m.bits())) * SigComplex::exact(mpq_class(1, 2), bits);
  return b;
}

std::vector<LabeledBranch> sort_branches(const BiPoly& f, const std::vector<PuiseuxSeries>& basis, const SigComplex& z_m,
                                         double digits, int N, MatchRule rule) {
  std::vector<SigComplex> values;
  std::vector<std::size_t> owner;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (long j = 0; j < basis[k].d; ++j) {
      values.push_back(eval(basis[k], j, z_m));
      owner.push_back(k);
    }
  }
  Fiber fb = fiber(f, z_m, digits);
  Assignment a = match(values, fb, N, rule);
  // Fiber roots come sorted, so the matched index is the global position.
  std::vector<std::size_t> key(basis.size(), values.size());
  for (std::size_t v = 0; v < values.size(); ++v) key[owner[v]] = std::min(key[owner[v]], a.index[v]);
  std::vector<std::size_t> order(basis.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (basis[x].d != basis[y].d) return basis[x].d < basis[y].d;
    return key[x] < key[y];
  });
  std::vector<LabeledBranch> out;
  std::map<long, int> next;
  for (std::size_t i : order) {
    int k = ++next[basis[i].d];
    out.push_back({BranchLabel{basis[i].d, k}, i});
  }
  return out;
}

std::string inventory_document(const Inventory& inv) {
  nlohmann::ordered_json doc;
  doc["format"] = "singular-inventory";
  doc["digits"] = inv.digits;
  doc["origin_singular"] = inv.origin_singular;
  nlohmann::ordered_json rs = nlohmann::ordered_json::array();
  for (const auto& r : inv.rings) {
    nlohmann::ordered_json rj;
    rj["ring"] = r.index;
    rj["modulus"] = format_short(r.modulus.re(), 12);
    nlohmann::ordered_json ms = nlohmann::ordered_json::array();
    for (const auto& p : r.members) {
      nlohmann::ordered_json pj;
      pj["location"] = format_sig(p.location);
      pj["approx"] = format_short(p.location.value(), 12);
      pj["pole"] = p.is_pole;
      pj["nearest_neighbor"] = format_short(p.nearest_neighbor_distance.re(), 12);
      ms.push_back(pj);
    }
    rj["points"] = ms;
    rs.push_back(rj);
  }
  doc["rings"] = rs;
  return doc.dump(2);
}

}  // namespace puiseux
