#pragma once

// Radius of convergence of every origin branch: radial ODE continuation
// towards each singular point ring by ring, compared against the singular
// local branches there.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "puiseux/landscape.hpp"
#include "puiseux/roots.hpp"
#include "puiseux/series.hpp"

namespace puiseux {

// ---------------------------------------------------------------- ODE

/// Runge-Kutta-Fehlberg 7(8) tableau as exact fractions.
struct Rkf78Tableau {
  static constexpr int stages = 13;
  long c[stages][2];
  long a[stages][stages][2];
  long b7[stages][2];  // 7th order weights
  long b8[stages][2];  // 8th order weights
};
const Rkf78Tableau& rkf78();

struct OdeConfig {
  double precision = 40;  // working digits
  double accuracy = 30;   // local error goal (digits, relative to max(1,|w|))
  int max_steps = 200000;
};

struct IntegrationTrace {
  SigComplex value;  // integrated end value
  int steps = 0;
  int rejected = 0;
};

/// Integrates dw/dr = -(f_z/f_w)(z_e - z_s) for r in [0, 1] along
/// z = z_s + r (z_e - z_s) from w(0) = w0. Throws IntegrationError on step
/// underflow, a vanishing f_w or too many steps.
IntegrationTrace integrate(const BiPoly& f, const SigComplex& w0, const SigComplex& z_s, const SigComplex& z_e,
                           const OdeConfig& cfg);

struct ContinuedValue {
  SigComplex start;
  SigComplex integrated;
  SigComplex actual;        // matched fiber root at z_e
  std::size_t fiber_index = 0;
  double log10_difference;  // |integrated - actual|
  int steps = 0;
};

/// Integrates every start value and matches the results against
/// fiber(f, z_e). A match failure or two values landing on one root is
/// reported as IntegrationError (suspected sheet jump).
std::vector<ContinuedValue> continue_values(const BiPoly& f, const std::vector<SigComplex>& start, const SigComplex& z_s,
                                            const SigComplex& z_e, const OdeConfig& cfg, const Fiber& at_end, int N,
                                            MatchRule rule);

// ---------------------------------------------------------------- local bases

struct LocalBranch {
  PuiseuxSeries series;
  bool ramified = false;
  bool pole = false;
  bool singular() const { return ramified || pole; }
};

struct LocalBasis {
  SigComplex s;
  std::vector<LocalBranch> branches;
};

/// Expansion of f about s via g(z, w) = f(z + s, w). With singular_only set
/// only the singular branches are iterated. Throws InvariantViolation when
/// no branch is singular.
LocalBasis local_basis(const BiPoly& f, const SigComplex& s, const ExpandConfig& cfg);

// ---------------------------------------------------------------- radius

struct RadiusConfig {
  double digits = 400;
  int terms = 64;
  int local_terms = 0;  // 0: same as terms
  int N = 100;
  MatchRule rule = MatchRule::local;
  std::optional<int> max_ring;
  OdeConfig ode;
  int checks = 100;
  std::uint64_t seed = 1;
};

struct SheetTrace {
  BranchLabel label;
  long sheet = 0;
  ContinuedValue value;
  bool impinged = false;
};

struct ContinuationStep {
  int ring = 0;
  SingularPoint point;
  SigComplex z_s, z_e;
  std::vector<BranchLabel> surviving;  // after this point, cumulative within the ring
  std::vector<BranchLabel> impinged;   // at this point
  std::vector<std::size_t> singular_fiber;  // fiber indices at z_e taken by singular local sheets
  std::vector<SheetTrace> traces;
};

struct ConvergenceResult {
  BranchLabel label;
  std::optional<int> ring;  // nullopt: no impingement on the processed rings
  SigComplex modulus;
  int terms = 0;
  std::optional<double> log10_max_error;
};

struct RadiusReport {
  Inventory inventory;
  Basis basis;
  std::vector<LabeledBranch> labels;
  SigComplex z_m;
  bool z_m_defaulted = false;
  std::vector<ContinuationStep> steps;
  std::vector<ConvergenceResult> results;
  bool complete = true;  // false when max_ring stopped the scan early
};

/// Full procedure. `inventory_override` replaces the computed inventory
/// (negative controls).
RadiusReport radius_all(const BiPoly& f, const RadiusConfig& cfg, const Inventory* inventory_override = nullptr);

/// Largest distance from a series sheet value to the nearest fiber root over
/// `count` random points with |z| uniform in (|r_c|/100, 99|r_c|/100).
double random_point_check(const BiPoly& f, const PuiseuxSeries& s, double radius, int count, std::uint64_t seed,
                          double digits = 60);

/// Partial sums inside and outside the assigned ring.
struct StraddleResult {
  BranchLabel label;
  int ring = 0;
  double z_c = 0, z_d = 0;
  int terms = 0;
  Trend inside = Trend::inconclusive;
  Trend outside = Trend::inconclusive;
  double growth_inside = 0, growth_outside = 0;
  bool agrees() const { return inside == Trend::converging && outside == Trend::diverging; }
};
StraddleResult straddle_test(const RadiusReport& report, const ConvergenceResult& result, int max_terms = 32768);

}  // namespace puiseux
