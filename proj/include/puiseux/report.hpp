#pragma once

// Run configuration, report tables and documents, and the verification
// suite behind the `verify` command.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "puiseux/continuation.hpp"

namespace puiseux {

struct RunConfig {
  double precision = 400;
  int terms = 64;
  int N = 100;
  std::optional<int> max_ring;
  double ode_precision = 40;
  double ode_accuracy = 30;
  int checks = 100;
  std::uint64_t seed = 1;

  /// Throws InvariantViolation when a field is out of range.
  void validate() const;
  ExpandConfig expand() const;
  RadiusConfig radius() const;
};

std::string version();
/// 64-bit FNV-1a of the input text, 16 hex digits.
std::string input_hash(std::string_view text);

/// Header embedded in every document: version, input hash and the config.
nlohmann::ordered_json run_header(std::string_view input, const RunConfig& cfg);

/// ring | singular point | modulus | pole | surviving labels
std::string continuation_table(const RadiusReport& r);
/// label | r_c | |r_c| | terms | max error
std::string convergence_table(const RadiusReport& r);
/// Per step and sheet: actual value at z_e, integrated value, difference.
std::string integration_diagnostic(const RadiusReport& r);
nlohmann::ordered_json radius_document(const RadiusReport& r, std::string_view input, const RunConfig& cfg);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool all_pass() const;
};

/// Property checks on a series set: cycle numbers sum to deg_w f, residual
/// orders grow with the number of terms, every sheet reproduces the fiber at
/// the base point, and, when `radius` is given, the partial-sum straddle test
/// and the random-point error for each assigned ring.
/// The random-point check passes when the largest error is below
/// `max_error`.
VerifyReport verify(const BiPoly& f, const std::vector<std::pair<BranchLabel, PuiseuxSeries>>& series,
                    const RunConfig& cfg, const RadiusReport* radius = nullptr, double max_error = 1e-3);
std::string verify_table(const VerifyReport& v);
nlohmann::ordered_json verify_document(const VerifyReport& v, std::string_view input, const RunConfig& cfg);

}  // namespace puiseux
