#pragma once

// Simultaneous polynomial root finding (Aberth-Ehrlich), inclusion radii,
// clustering of numerically equal roots and fibers f(z0, w) = 0.

#include <vector>

#include "puiseux/algebra.hpp"

namespace puiseux {

struct RootCluster {
  SigComplex center;
  int multiplicity = 1;
  std::vector<SigComplex> members;
};

/// Roots at a nominal working precision of `digits` significant digits.
/// Exact zero roots are reported as exact zeros. Ordered by real part, then
/// imaginary part. Throws EscalationError when iteration stalls.
std::vector<SigComplex> roots(const UniPoly& p, double digits);
std::vector<SigComplex> roots(const NumPoly& p, double digits);

/// Like roots(), but each root's error bound is its inclusion radius, which
/// accounts for coefficient errors and reflects multiplicity (clusters of
/// m approximations near an m-fold root get radii of order eps^(1/m)).
std::vector<SigComplex> isolate(const NumPoly& p, double digits);

/// Partition under numerical equality after reducing each value to
/// `accuracy` digits; chains merge (transitive closure). The center is the
/// member mean. Clusters are ordered like roots().
std::vector<RootCluster> cluster(const std::vector<SigComplex>& values, double accuracy);

/// Improves the center of an m-fold cluster of p by Newton's method on the
/// (m-1)-th derivative; the returned error bound is a residual estimate.
SigComplex refine_multiple(const NumPoly& p, const SigComplex& center, int multiplicity);

/// isolate() + cluster() at `accuracy` + refine_multiple() on each cluster.
std::vector<RootCluster> clustered_roots(const NumPoly& p, double digits, double accuracy);

/// Total order: real part, then imaginary part; numerically equal parts
/// compare as equal.
bool root_less(const SigComplex& a, const SigComplex& b);
void sort_roots(std::vector<SigComplex>& v);

struct Fiber {
  std::vector<SigComplex> roots;
  SigComplex p_min;                  // smallest pairwise distance (0 for a single root)
  std::vector<double> log10_separation;  // per root: log10 distance to its nearest other root
};

/// Roots in w of f(z0, w). Throws DegenerateFiberError when a_n(z0) is
/// numerically zero.
Fiber fiber(const BiPoly& f, const SigComplex& z0, double digits);
Fiber fiber(const NumBiPoly& f, const SigComplex& z0, double digits);
Fiber fiber_of(const NumPoly& p, double digits);

/// Tolerance for a match: p_min/N over the whole fiber, or the matched
/// root's own separation from the rest of the fiber over N.
enum class MatchRule { global, local };

struct Assignment {
  std::vector<std::size_t> index;  // computed[k] matches exact.roots[index[k]]
  std::vector<double> log10_distance;
  std::vector<double> log10_tolerance;
};

/// Nearest-root assignment of computed values to fiber roots. Throws
/// MatchToleranceError when a distance reaches the tolerance and
/// AmbiguousMatchError when two values pick the same root.
Assignment match(const std::vector<SigComplex>& computed, const Fiber& exact, int N,
                 MatchRule rule = MatchRule::local);

}  // namespace puiseux
