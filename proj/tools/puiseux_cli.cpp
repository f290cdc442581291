#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "puiseux/continuation.hpp"
#include "puiseux/errors.hpp"
#include "puiseux/report.hpp"

using namespace puiseux;

namespace {

// Polynomial argument: a file path when one exists, otherwise an expression.
std::string read_input(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return arg;
}

std::string term_text(const SigComplex& c, const mpq_class& e, int E) {
  mpq_class x = e - E;
  x.canonicalize();
  std::string s = "(" + format_short(c.value(), 8) + ")";
  if (x != 0) s += " z^(" + x.get_str() + ")";
  return s;
}

std::string leading_terms(const PuiseuxSeries& s, int count) {
  std::string out;
  int n = 0;
  for (const auto& [e, c] : s.prefix) {
    if (n++ >= count) break;
    out += (out.empty() ? "" : " + ") + term_text(c, e, s.E);
  }
  for (std::size_t m = 0; m < s.tail.size() && n < count; ++m, ++n) {
    mpq_class e = s.e_tail + mpq_class(static_cast<long>(m), s.d);
    out += (out.empty() ? "" : " + ") + term_text(s.tail[m], e, s.E);
  }
  return out + " + ...";
}

struct Options {
  RunConfig cfg;
  std::string format = "table";
  bool dump_polygon = false;
  bool residual_log = false;
  bool diagnostic = false;
  bool skip_radius = false;
  double max_error = 1e-3;
  std::string input;
  std::string series_file;
};

void emit(const nlohmann::ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

int cmd_expand(const Options& o) {
  std::string text = read_input(o.input);
  BiPoly f = parse(text);
  Basis b = expand_basis(f, o.cfg.expand());
  long bits = digits_to_bits(o.cfg.precision) + 16;
  Inventory inv = inventory(f, o.cfg.precision);
  BasePoint bp = base_point(inv, bits);
  auto labels = sort_branches(f, b.series, bp.z, o.cfg.precision, o.cfg.N);
  std::vector<PuiseuxSeries> ordered;
  std::vector<BranchLabel> names;
  for (const auto& l : labels) {
    ordered.push_back(b.series[l.basis_index]);
    names.push_back(l.label);
  }
  if (o.format == "doc") {
    auto doc = nlohmann::ordered_json::parse(series_document(ordered, names));
    doc["run"] = run_header(text, o.cfg);
    if (o.dump_polygon) doc["polygon"] = dump_tree(b.tree);
    if (o.residual_log) {
      auto a = nlohmann::ordered_json::array();
      for (const auto& r : b.residuals) {
        nlohmann::ordered_json j;
        j["level"] = r.level;
        j["w_power"] = r.w_power;
        j["exponent"] = r.exponent.get_str();
        j["value"] = format_short(r.value.value(), 6);
        j["where"] = r.where;
        a.push_back(j);
      }
      doc["residual_log"] = a;
    }
    emit(doc);
    return 0;
  }
  std::cout << "normal exponent E = " << b.norm.E << ", " << b.iterations << " Newton steps, polygon depth "
            << tree_depth(b.tree) << "\n";
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    std::cout << names[i].to_string() << "  d=" << ordered[i].d << "  terms=" << ordered[i].term_count() << "\n  "
              << leading_terms(ordered[i], 4) << "\n";
  }
  if (o.dump_polygon) std::cout << "\n" << dump_tree(b.tree);
  if (o.residual_log) {
    std::cout << "\nremoved numerically-zero terms:\n";
    for (const auto& r : b.residuals)
      std::cout << "  level " << r.level << " w^" << r.w_power << " z^(" << r.exponent.get_str()
                << ") = " << format_short(r.value.value(), 6) << "  " << r.where << "\n";
  }
  return 0;
}

int cmd_singular(const Options& o) {
  std::string text = read_input(o.input);
  BiPoly f = parse(text);
  Inventory inv = inventory(f, o.cfg.precision);
  if (o.format == "doc") {
    auto doc = nlohmann::ordered_json::parse(inventory_document(inv));
    doc["run"] = run_header(text, o.cfg);
    emit(doc);
    return 0;
  }
  std::cout << inv.point_count() << " singular points in " << inv.rings.size() << " rings"
            << (inv.origin_singular ? ", origin singular" : "") << "\n";
  for (const auto& r : inv.rings) {
    for (const auto& p : r.members) {
      std::cout << r.index << "\t" << format_short(p.location.value(), 10) << "\t" << format_short(r.modulus.re(), 10)
                << (p.is_pole ? "\tpole" : "") << "\n";
    }
  }
  return 0;
}

int cmd_radius(const Options& o) {
  std::string text = read_input(o.input);
  BiPoly f = parse(text);
  RadiusReport r = radius_all(f, o.cfg.radius());
  if (o.format == "doc") {
    emit(radius_document(r, text, o.cfg));
    return 0;
  }
  std::cout << "input " << input_hash(text) << ", seed " << o.cfg.seed << ", version " << version() << "\n\n";
  std::cout << continuation_table(r) << "\n" << convergence_table(r);
  if (o.diagnostic) std::cout << "\n" << integration_diagnostic(r);
  return 0;
}

int cmd_verify(const Options& o) {
  std::string text = read_input(o.input);
  BiPoly f = parse(text);
  std::ifstream in(o.series_file);
  if (!in) throw Error("cannot read series document " + o.series_file);
  std::stringstream ss;
  ss << in.rdbuf();
  auto series = parse_series_document(ss.str());
  std::optional<RadiusReport> r;
  if (!o.skip_radius) r = radius_all(f, o.cfg.radius());
  VerifyReport v = verify(f, series, o.cfg, r ? &*r : nullptr, o.max_error);
  if (o.format == "doc")
    emit(verify_document(v, text, o.cfg));
  else
    std::cout << verify_table(v);
  return v.all_pass() ? 0 : 1;
}

void print_hint(const RetryHint& h) {
  std::cerr << "retry with:";
  if (h.precision) std::cerr << " --precision " << *h.precision;
  if (h.terms) std::cerr << " --terms " << *h.terms;
  if (h.ode_precision) std::cerr << " --ode-precision " << *h.ode_precision;
  std::cerr << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Puiseux expansions and their radii of convergence"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  Options o;
  std::optional<int> max_ring;

  auto common = [&](CLI::App* c) {
    c->add_option("input", o.input, "polynomial expression, or a file holding one or a JSON document")->required();
    c->add_option("--precision", o.cfg.precision, "working precision in digits")->capture_default_str();
    c->add_option("--terms", o.cfg.terms, "series terms")->capture_default_str();
    c->add_option("--tolerance-divisor", o.cfg.N, "match tolerance p/N")->capture_default_str();
    c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"table", "doc"}))->capture_default_str();
  };
  auto radius_opts = [&](CLI::App* c) {
    c->add_option("--max-ring", max_ring, "stop after this ring");
    c->add_option("--ode-precision", o.cfg.ode_precision, "integration working digits")->capture_default_str();
    c->add_option("--ode-accuracy", o.cfg.ode_accuracy, "integration accuracy goal (digits)")->capture_default_str();
    c->add_option("--checks", o.cfg.checks, "random points per branch")->capture_default_str();
    c->add_option("--seed", o.cfg.seed, "random seed")->capture_default_str();
  };

  auto* expand = app.add_subcommand("expand", "basis of Puiseux series at the origin");
  common(expand);
  expand->add_flag("--dump-polygon", o.dump_polygon, "print the Newton polygon tree");
  expand->add_flag("--residual-log", o.residual_log, "list coefficients dropped as numerically zero");

  auto* singular = app.add_subcommand("singular", "singular points grouped into rings");
  common(singular);

  auto* radius = app.add_subcommand("radius", "ring of convergence of every branch");
  common(radius);
  radius_opts(radius);
  radius->add_flag("--diagnostic", o.diagnostic, "print the integration diagnostic");

  auto* verify_cmd = app.add_subcommand("verify", "property checks on a series document");
  common(verify_cmd);
  radius_opts(verify_cmd);
  verify_cmd->add_option("series", o.series_file, "series document from `expand --format doc`")->required();
  verify_cmd->add_flag("--no-radius", o.skip_radius, "skip the straddle and random-point checks");
  verify_cmd->add_option("--max-error", o.max_error, "random-point error bound")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  o.cfg.max_ring = max_ring;

  try {
    o.cfg.validate();
    if (*expand) return cmd_expand(o);
    if (*singular) return cmd_singular(o);
    if (*radius) return cmd_radius(o);
    if (*verify_cmd) return cmd_verify(o);
  } catch (const EscalationError& e) {
    std::cerr << "escalation needed: " << e.what() << "\n";
    print_hint(e.hint());
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
