#pragma once

// Singular-point inventory: poles and discriminant zeros, ring grouping,
// the base point and branch labelling.

#include <string>
#include <vector>

#include "puiseux/algebra.hpp"
#include "puiseux/roots.hpp"
#include "puiseux/series.hpp"

namespace puiseux {

struct SingularPoint {
  SigComplex location;
  bool is_pole = false;
  int ring = 0;
  SigComplex nearest_neighbor_distance;  // real, nonnegative
};

struct SingularRing {
  int index = 0;
  SigComplex modulus;  // real
  std::vector<SingularPoint> members;  // ascending argument
};

struct Inventory {
  std::vector<SingularRing> rings;
  bool origin_singular = false;
  double digits = 0;
  std::size_t point_count() const;
};

/// Nonzero singular points of f, unsorted. Sets *origin when 0 is a zero of
/// the resultant or of a_n.
std::vector<SingularPoint> singular_points(const BiPoly& f, double digits, bool* origin = nullptr);

/// Groups by modulus at `accuracy` significant digits and fills ring indices
/// and nearest-neighbour distances (the origin counts as a neighbour when
/// `origin_singular`).
std::vector<SingularRing> rings(std::vector<SingularPoint> points, double accuracy, bool origin_singular = false);

Inventory inventory(const BiPoly& f, double digits);
/// Same inventory without the given rings, renumbered (negative controls).
Inventory without_rings(const Inventory& inv, const std::vector<int>& ring_indices);

struct BasePoint {
  SigComplex z;
  bool defaulted = false;  // no nonzero singular point: z = 1/2
};
BasePoint base_point(const Inventory& inv, long bits);

struct LabeledBranch {
  BranchLabel label;
  std::size_t basis_index = 0;  // position in Basis::series
};

/// Labels w_{d,k}: within each cycle number, branches ordered by the first
/// position any of their sheets takes in the global (real, imaginary) sort of
/// the sheet values at z_m. Values must match fiber(f, z_m) within p_min/N or
/// MatchToleranceError is thrown. Result ordered by (d, k).
std::vector<LabeledBranch> sort_branches(const BiPoly& f, const std::vector<PuiseuxSeries>& basis, const SigComplex& z_m,
                                         double digits, int N = 100, MatchRule rule = MatchRule::local);

/// JSON inventory document.
std::string inventory_document(const Inventory& inv);

}  // namespace puiseux
