#include "puiseux/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "puiseux/errors.hpp"

#ifndef PUISEUX_VERSION
#define PUISEUX_VERSION "0.0.0"
#endif

namespace puiseux {

namespace {

std::string fmt_log10(std::optional<double> x) {
  if (!x) return "-";
  if (std::isinf(*x)) return *x < 0 ? "0" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", std::pow(10.0, *x));
  return buf;
}

std::string labels_text(const std::vector<BranchLabel>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + "}";
}

nlohmann::ordered_json labels_json(const std::vector<BranchLabel>& v) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& l : v) a.push_back(l.to_string());
  return a;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

void RunConfig::validate() const {
  if (precision < 50) throw InvariantViolation("precision must be at least 50 digits");
  if (terms < 2) throw InvariantViolation("terms must be at least 2");
  if (N < 2) throw InvariantViolation("tolerance divisor must be at least 2");
  if (max_ring && *max_ring < 1) throw InvariantViolation("max-ring must be positive");
  if (ode_precision < 16 || ode_accuracy <= 0 || ode_accuracy > ode_precision)
    throw InvariantViolation("ODE accuracy must lie in (0, ode precision] with ode precision >= 16");
  if (checks < 0) throw InvariantViolation("checks must be nonnegative");
}

ExpandConfig RunConfig::expand() const {
  ExpandConfig e;
  e.digits = precision;
  e.terms = terms;
  return e;
}

RadiusConfig RunConfig::radius() const {
  RadiusConfig r;
  r.digits = precision;
  r.terms = terms;
  r.N = N;
  r.max_ring = max_ring;
  r.ode.precision = ode_precision;
  r.ode.accuracy = ode_accuracy;
  r.checks = checks;
  r.seed = seed;
  return r;
}

std::string version() { return PUISEUX_VERSION; }

std::string input_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

nlohmann::ordered_json run_header(std::string_view input, const RunConfig& cfg) {
  nlohmann::ordered_json h;
  h["version"] = version();
  h["input_hash"] = input_hash(input);
  nlohmann::ordered_json c;
  c["precision"] = cfg.precision;
  c["terms"] = cfg.terms;
  c["tolerance_divisor"] = cfg.N;
  if (cfg.max_ring)
    c["max_ring"] = *cfg.max_ring;
  else
    c["max_ring"] = nullptr;
  c["ode_precision"] = cfg.ode_precision;
  c["ode_accuracy"] = cfg.ode_accuracy;
  c["checks"] = cfg.checks;
  c["seed"] = cfg.seed;
  h["config"] = c;
  return h;
}

std::string continuation_table(const RadiusReport& r) {
  std::ostringstream os;
  os << pad("ring", 6) << pad("singular point", 34) << pad("modulus", 14) << pad("pole", 6) << "continuable\n";
  for (const auto& s : r.steps) {
    os << pad(std::to_string(s.ring), 6) << pad(format_short(s.point.location.value(), 6), 34)
       << pad(format_short(abs(s.point.location.value()), 6), 14)
       << pad(s.point.is_pole ? "yes" : "no", 6) << labels_text(s.surviving) << "\n";
  }
  // Rings not visited because every branch was already assigned.
  int last = r.steps.empty() ? 0 : r.steps.back().ring;
  for (const auto& ring : r.inventory.rings) {
    if (ring.index <= last || !r.complete) continue;
    for (const auto& p : ring.members) {
      os << pad(std::to_string(ring.index), 6) << pad(format_short(p.location.value(), 6), 34)
         << pad(format_short(abs(p.location.value()), 6), 14) << pad(p.is_pole ? "yes" : "no", 6) << "{}\n";
    }
  }
  if (!r.complete) os << "(scan stopped at the ring limit)\n";
  return os.str();
}

std::string convergence_table(const RadiusReport& r) {
  std::ostringstream os;
  os << pad("branch", 12) << pad("r_c", 6) << pad("|r_c|", 14) << pad("terms", 7) << "max error\n";
  for (const auto& c : r.results) {
    os << pad(c.label.to_string(), 12) << pad(c.ring ? std::to_string(*c.ring) : "-", 6)
       << pad(c.ring ? format_short(c.modulus.re(), 6) : "-", 14) << pad(std::to_string(c.terms), 7)
       << fmt_log10(c.log10_max_error) << "\n";
  }
  return os.str();
}

std::string integration_diagnostic(const RadiusReport& r) {
  std::ostringstream os;
  for (const auto& s : r.steps) {
    os << "ring " << s.ring << ", s = " << format_short(s.point.location.value(), 8)
       << ", z_s = " << format_short(s.z_s.value(), 8) << ", z_e = " << format_short(s.z_e.value(), 8) << "\n";
    os << "  " << pad("branch", 12) << pad("sheet", 7) << pad("actual", 34) << pad("integrated", 34) << pad("difference", 12)
       << "steps\n";
    for (const auto& t : s.traces) {
      os << "  " << pad(t.label.to_string(), 12) << pad(std::to_string(t.sheet), 7)
         << pad(format_short(t.value.actual.value(), 10), 34) << pad(format_short(t.value.integrated.value(), 10), 34)
         << pad(fmt_log10(t.value.log10_difference), 12) << t.value.steps << (t.impinged ? "  impinged" : "") << "\n";
    }
  }
  return os.str();
}

nlohmann::ordered_json radius_document(const RadiusReport& r, std::string_view input, const RunConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["format"] = "radius-report";
  doc["run"] = run_header(input, cfg);
  doc["z_m"] = format_sig(r.z_m);
  doc["z_m_defaulted"] = r.z_m_defaulted;
  doc["complete"] = r.complete;
  auto steps = nlohmann::ordered_json::array();
  for (const auto& s : r.steps) {
    nlohmann::ordered_json j;
    j["ring"] = s.ring;
    j["point"] = format_short(s.point.location.value(), 12);
    j["modulus"] = format_short(abs(s.point.location.value()), 12);
    j["pole"] = s.point.is_pole;
    j["z_s"] = format_short(s.z_s.value(), 12);
    j["z_e"] = format_short(s.z_e.value(), 12);
    j["continuable"] = labels_json(s.surviving);
    j["impinged"] = labels_json(s.impinged);
    auto tr = nlohmann::ordered_json::array();
    for (const auto& t : s.traces) {
      nlohmann::ordered_json tj;
      tj["branch"] = t.label.to_string();
      tj["sheet"] = t.sheet;
      tj["actual"] = format_short(t.value.actual.value(), 20);
      tj["integrated"] = format_short(t.value.integrated.value(), 20);
      tj["log10_difference"] = t.value.log10_difference;
      tj["steps"] = t.value.steps;
      tj["impinged"] = t.impinged;
      tr.push_back(tj);
    }
    j["sheets"] = tr;
    steps.push_back(j);
  }
  doc["continuation"] = steps;
  auto res = nlohmann::ordered_json::array();
  for (const auto& c : r.results) {
    nlohmann::ordered_json j;
    j["branch"] = c.label.to_string();
    if (c.ring) {
      j["ring"] = *c.ring;
      j["modulus"] = format_short(c.modulus.re(), 12);
    } else {
      j["ring"] = nullptr;
      j["modulus"] = nullptr;
    }
    j["terms"] = c.terms;
    if (c.log10_max_error)
      j["log10_max_error"] = *c.log10_max_error;
    else
      j["log10_max_error"] = nullptr;
    res.push_back(j);
  }
  doc["convergence"] = res;
  return doc;
}

bool VerifyReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

VerifyReport verify(const BiPoly& f, const std::vector<std::pair<BranchLabel, PuiseuxSeries>>& series,
                    const RunConfig& cfg, const RadiusReport* radius, double max_error) {
  VerifyReport out;
  long total = 0;
  for (const auto& [l, s] : series) total += s.d;
  out.checks.push_back({"basis completeness", total == f.degree_w(),
                        "sum of cycle numbers " + std::to_string(total) + ", degree in w " +
                            std::to_string(f.degree_w())});

  // Residual order against tail length 1, 2, 4, ...
  for (const auto& [l, s] : series) {
    bool ok = true;
    std::string detail;
    long et = 0;
    {
      mpq_class x = s.e_tail * s.d;
      et = mpz_class(x.get_num() / x.get_den()).get_si();
    }
    long prev = -1;
    for (std::size_t n = 1;; n *= 2) {
      std::size_t len = std::min(n, s.tail.size());
      PuiseuxSeries t = s;
      t.tail.resize(len);
      auto k = residual_order_t(f, t, 0);
      long order = k ? *k : std::numeric_limits<long>::max();
      bool good = order >= et + static_cast<long>(len) && order >= prev;
      ok = ok && good;
      detail += (detail.empty() ? "" : " ") + std::to_string(len) + ":" + (k ? std::to_string(*k) : "inf");
      prev = order;
      if (len == s.tail.size()) break;
    }
    out.checks.push_back({"residual growth " + l.to_string(), ok, "tail terms:order " + detail});
  }

  // Every sheet against the fiber at the base point.
  long bits = digits_to_bits(cfg.precision) + 16;
  SigComplex zm;
  if (radius) {
    zm = radius->z_m;
  } else {
    zm = base_point(inventory(f, cfg.precision), bits).z;
  }
  {
    std::vector<SigComplex> vals;
    for (const auto& [l, s] : series)
      for (long j = 0; j < s.d; ++j) vals.push_back(eval(s, j, zm));
    Fiber fb = fiber(f, zm, cfg.precision);
    std::string detail;
    bool ok = true;
    try {
      Assignment a = match(vals, fb, cfg.N, MatchRule::global);
      double worst = -std::numeric_limits<double>::infinity();
      for (double d : a.log10_distance) worst = std::max(worst, d);
      detail = "worst distance " + fmt_log10(worst) + ", p_min/N " + fmt_log10(fb.p_min.log10_abs() - std::log10(cfg.N));
    } catch (const Error& e) {
      ok = false;
      detail = e.what();
    }
    out.checks.push_back({"conjugate closure at z_m", ok, detail});
  }

  if (radius) {
    for (const auto& c : radius->results) {
      if (!c.ring) continue;
      StraddleResult st = straddle_test(*radius, c);
      char buf[160];
      std::snprintf(buf, sizeof buf, "z_c %.6g %s, z_d %.6g %s, %d terms", st.z_c, to_string(st.inside), st.z_d,
                    to_string(st.outside), st.terms);
      out.checks.push_back({"straddle " + c.label.to_string(), st.agrees(), buf});
      if (c.log10_max_error) {
        bool ok = *c.log10_max_error <= std::log10(max_error);
        out.checks.push_back({"random points " + c.label.to_string(), ok,
                              "max error " + fmt_log10(c.log10_max_error) + " over " + std::to_string(cfg.checks) +
                                  " points"});
      }
    }
  }
  return out;
}

std::string verify_table(const VerifyReport& v) {
  std::ostringstream os;
  for (const auto& c : v.checks) os << (c.pass ? "PASS  " : "FAIL  ") << pad(c.name, 32) << c.detail << "\n";
  return os.str();
}

nlohmann::ordered_json verify_document(const VerifyReport& v, std::string_view input, const RunConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["format"] = "verify-report";
  doc["run"] = run_header(input, cfg);
  auto a = nlohmann::ordered_json::array();
  for (const auto& c : v.checks) {
    nlohmann::ordered_json j;
    j["check"] = c.name;
    j["pass"] = c.pass;
    j["detail"] = c.detail;
    a.push_back(j);
  }
  doc["checks"] = a;
  doc["all_pass"] = v.all_pass();
  return doc;
}

}  // namespace puiseux
