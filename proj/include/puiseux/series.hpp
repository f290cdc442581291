#pragma once

// Branch series: Newton iteration on truncated power series, assembly into
// w = z^-E (sum c_i z^e_i + z^e_t p(z^(1/d))), conjugate sheets, evaluation,
// residual orders and partial-sum profiles.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "puiseux/algebra.hpp"
#include "puiseux/polygon.hpp"

namespace puiseux {

struct PuiseuxSeries {
  int E = 0;
  long d = 1;
  std::vector<std::pair<mpq_class, SigComplex>> prefix;  // (e_i, c_i), increasing e_i
  mpq_class e_tail = 0;                                   // exponent multiplying p(t)
  std::vector<SigComplex> tail;                           // p(t) = sum tail[m] t^m, t = z^(1/d)

  int term_count() const { return static_cast<int>(prefix.size() + tail.size()); }
  /// Leading exponent of the branch of the original function (may be < 0).
  mpq_class leading_exponent() const;
};

struct BranchLabel {
  long d = 1;
  int index = 1;
  std::string to_string() const;  // "w_{d,k}"
  friend bool operator==(const BranchLabel&, const BranchLabel&) = default;
};

/// Number of Newton steps giving at least `terms` correct coefficients.
int iterations_for(int terms);

/// Tail coefficients after `iterations` Newton steps, truncated to at most
/// `max_terms` (default 2^iterations). Throws NotSimpleRootError when the
/// derivative vanishes at r_k and EscalationError when accuracy runs out.
NumPoly iterate(const RegularForm& rf, int iterations, int max_terms = -1, double working_digits = 0);

/// Builds the branch series. Throws InvariantViolation on inconsistent
/// exponent bookkeeping.
PuiseuxSeries assemble(const std::vector<std::pair<mpq_class, SigComplex>>& prefix, const mpq_class& e_tail,
                       NumPoly tail, long d, int E);

/// Sheet j of s: coefficient of z^e multiplied by exp(2 pi i j d e / d').
struct SheetView {
  const PuiseuxSeries* series;
  long sheet;
};
std::vector<SheetView> conjugates(const PuiseuxSeries& s);

/// Partial sum through the first `terms` terms (prefix first, then tail) on
/// the given sheet, with t = z^(1/d) on the principal branch
/// (argument in (-pi, pi]). terms < 0 means all terms.
SigComplex eval(const PuiseuxSeries& s, long sheet, const SigComplex& z, int terms = -1);

/// The series with one coefficient replaced (term index as in eval).
PuiseuxSeries perturbed(const PuiseuxSeries& s, int term, const SigComplex& delta);

/// z-order of f(z, s(z)) by truncated composition; nullopt when every
/// computed coefficient is numerically zero.
std::optional<mpq_class> residual_order(const BiPoly& f, const PuiseuxSeries& s, long sheet);
/// Same order expressed in powers of t = z^(1/d) for the normalized function.
std::optional<long> residual_order_t(const BiPoly& f, const PuiseuxSeries& s, long sheet);

enum class Trend { converging, diverging, inconclusive };
const char* to_string(Trend t);

struct PartialSumProfile {
  std::vector<double> log10_partial;  // log10 |S_N|, N = 1..max_terms
  std::vector<double> log10_term;     // log10 |term_N|
  Trend hint = Trend::inconclusive;
  double growth = 0;                  // fitted log10 growth per term of the term envelope
};
PartialSumProfile partial_sum_profile(const PuiseuxSeries& s, long sheet, const SigComplex& z, int max_terms);

/// Basis expansion of f around the origin.
struct ExpandConfig {
  double digits = 400;
  int terms = 64;
  bool singular_only = false;  // iterate only leaves with d >= 2 or a negative leading exponent
};

struct Basis {
  Normalized norm;
  PolygonNode tree;
  std::vector<RegularForm> forms;     // aligned with series
  std::vector<PuiseuxSeries> series;  // unsorted, polygon order
  ResidualLog residuals;
  int iterations = 0;
};

Basis expand_basis(const BiPoly& f, const ExpandConfig& cfg);
/// Same for a numeric polynomial (local expansions); `f` must have integer
/// exponents. Coefficients numerically zero at prune_accuracy are dropped.
Basis expand_basis(const FracPoly& f, const ExpandConfig& cfg);

/// Longer tail by the term-by-term recurrence at `bits` precision (used for
/// partial-sum diagnostics that need thousands of terms). `scale` is
/// |z|^(1/d) at the point of interest and only conditions the arithmetic.
PuiseuxSeries extend_series(const PuiseuxSeries& s, const RegularForm& rf, int tail_terms, long bits, double scale);

/// Series document (JSON); round-trips through parse_series_document.
std::string series_document(const std::vector<PuiseuxSeries>& basis, const std::vector<BranchLabel>& labels);
std::vector<std::pair<BranchLabel, PuiseuxSeries>> parse_series_document(const std::string& text);

}  // namespace puiseux
