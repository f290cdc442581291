#pragma once

// Newton polygon: normalization, lower leg, characteristic equations,
// descent on multiple characteristic roots and the regular (integer power)
// form used by the series iteration.

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "puiseux/algebra.hpp"
#include "puiseux/roots.hpp"

namespace puiseux {

/// Polynomial in w whose coefficients are finite sums of rational powers of
/// z. Exponents are stored as numerators over the common denominator `den`.
struct FracPoly {
  long den = 1;
  std::vector<std::map<long, SigComplex>> a;  // a[i]: numerator -> coeff of z^(num/den) w^i

  int degree_w() const { return static_cast<int>(a.size()) - 1; }
  /// Lowest z exponent of a_i; nullopt when a_i has no terms.
  std::optional<mpq_class> order(int i) const;
  /// Coefficient of z^e w^i (zero if absent); e must be a multiple of 1/den.
  SigComplex coeff(int i, const mpq_class& e, long bits) const;
  /// Largest working precision among the coefficients.
  long bits() const;
  std::size_t term_count() const;

  static FracPoly from(const BiPoly& f, long bits);
  static FracPoly from(const NumBiPoly& f);
  /// Same polynomial over a multiple of the current denominator.
  FracPoly with_den(long new_den) const;
};

/// Term removed because its coefficient was numerically zero.
struct ResidualEntry {
  int level = 0;
  int w_power = 0;
  mpq_class exponent;
  SigComplex value;
  std::string where;
};
using ResidualLog = std::vector<ResidualEntry>;

/// Drops numerically-zero coefficients (at `accuracy` digits), logging them.
FracPoly prune(const FracPoly& f, double accuracy, int level, const std::string& where, ResidualLog* log);

struct Normalized {
  BiPoly g;
  int E = 0;  // normal exponent
  int m = 0;  // g = z^m f(z, w / z^E)
};
Normalized normalize(const BiPoly& f);

struct NormalizedNum {
  FracPoly g;
  int E = 0;
  int m = 0;
};
/// Integer-exponent numeric version (den must be 1).
NormalizedNum normalize(const FracPoly& f);

struct PolyPoint {
  int i;
  mpq_class order;
};

struct Segment {
  mpq_class lambda;  // negative slope
  mpq_class beta;    // intercept: order + lambda * i == beta on the segment
  std::vector<PolyPoint> points;
  std::vector<SigComplex> coeffs;  // b_{i,alpha}, aligned with points (filled by with_coefficients)
};

/// Lower-left hull edges with lambda >= 0 ordered by decreasing lambda.
/// Points interior to an edge are kept on it. Edges with lambda == 0 are
/// dropped when exclude_zero_slope is set.
std::vector<Segment> lower_leg(const std::vector<PolyPoint>& support, bool exclude_zero_slope);
std::vector<PolyPoint> support(const FracPoly& f);
/// Attaches the coefficients b_{i,alpha} of f for the segment points.
Segment with_coefficients(Segment s, const FracPoly& f);

struct CharEq {
  NumPoly K;        // K(x) = sum b_{i,alpha} x^i (all powers, zeros included)
  int i_left = 0;   // K(x) = x^i_left * Kt(x^q)
  int q = 1;        // orbit size of conjugate roots
  NumPoly reduced;  // Kt(y)
};

/// Characteristic equation of a segment. `den_prev` is the exponent
/// denominator accumulated along the path (1 at the first level).
CharEq char_eq(const Segment& seg, long den_prev = 1);

struct PolygonConfig {
  double digits = 400;          // working precision
  double prune_accuracy = 390;  // numerically-zero threshold for coefficients
  double cluster_accuracy = 390;
};

/// One branch seed: a simple characteristic root at the end of a path.
struct Leaf {
  int level = 1;
  std::vector<std::pair<mpq_class, SigComplex>> prefix;  // (e_j, c_j) of descended levels
  mpq_class e_last;      // cumulative exponent e_k at the leaf level
  mpq_class lambda;      // lambda_k
  mpq_class beta;        // beta_k
  SigComplex root;       // r_k (a simple root of K)
  long d = 1;            // cycle number
  FracPoly f;            // f_k
};

struct PolygonNode {
  int level = 1;
  FracPoly f;
  long den_path = 1;                                      // cycle denominator so far
  std::vector<std::pair<mpq_class, SigComplex>> prefix;   // path so far
  mpq_class e_path = 0;                                   // cumulative exponent so far
  std::vector<Segment> segments;
  std::vector<CharEq> char_eqs;
  std::vector<std::vector<RootCluster>> clusters;         // per segment, roots of Kt
  std::vector<PolygonNode> children;
  std::vector<Leaf> leaves;
  std::vector<std::string> notes;                         // rejected roots and the like
};

/// z^{-beta} f(z, z^lambda (c + w)) with pruning; result exponents over the
/// denominator lcm(den, den(lambda), den(beta)).
FracPoly substitute(const FracPoly& f, const mpq_class& lambda, const mpq_class& beta, const SigComplex& c);

/// Child node for a cluster of multiplicity >= 2 of segment `seg_index`.
PolygonNode descend(const PolygonNode& node, std::size_t seg_index, const RootCluster& c, const SigComplex& x_root,
                    const PolygonConfig& cfg, ResidualLog* log);

/// Builds the full polygon tree of a normalized numeric polynomial.
PolygonNode build_tree(const FracPoly& g, const PolygonConfig& cfg, ResidualLog* log);
std::vector<const Leaf*> collect_leaves(const PolygonNode& root);
/// Depth counting the root as level 1.
int tree_depth(const PolygonNode& root);

/// fbar(t, w) with integer powers: fbar[i][k] multiplies t^k w^i.
struct RegularForm {
  std::vector<NumPoly> fbar;
  long d = 1;
  SigComplex rk;
};
RegularForm regular_form(const Leaf& leaf);

/// Polygon dump (support, segments, characteristic equations) as a JSON text.
std::string dump_tree(const PolygonNode& root, int digits = 12);

}  // namespace puiseux
