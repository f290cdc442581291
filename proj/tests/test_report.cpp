#include <gtest/gtest.h>

#include "puiseux/errors.hpp"
#include "puiseux/report.hpp"

using namespace puiseux;

TEST(Report, InputHashMatchesFnv1a) {
  // published FNV-1a 64 test vectors
  EXPECT_EQ(input_hash(""), "cbf29ce484222325");
  EXPECT_EQ(input_hash("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(input_hash("foobar"), "85944171f73967e8");
}

TEST(Report, ConfigValidation) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.precision = 20;
  EXPECT_THROW(c.validate(), InvariantViolation);
  c = RunConfig{};
  c.N = 1;
  EXPECT_THROW(c.validate(), InvariantViolation);
  c = RunConfig{};
  c.max_ring = 0;
  EXPECT_THROW(c.validate(), InvariantViolation);
  c = RunConfig{};
  c.ode_accuracy = 50;
  EXPECT_THROW(c.validate(), InvariantViolation);
}

TEST(Report, HeaderCarriesConfig) {
  RunConfig c;
  c.seed = 9;
  auto h = run_header("w^2-z", c);
  EXPECT_EQ(h["version"], version());
  EXPECT_EQ(h["input_hash"], input_hash("w^2-z"));
  EXPECT_EQ(h["config"]["seed"], 9);
}

TEST(Report, TablesAndVerify) {
  const char* text = "w^2-(1-z)";
  RunConfig c;
  c.precision = 100;
  c.terms = 256;  // random points reach |z| = 0.99
  c.checks = 20;
  BiPoly f = parse(text);
  RadiusReport r = radius_all(f, c.radius());
  std::string ct = continuation_table(r);
  std::string vt = convergence_table(r);
  EXPECT_NE(ct.find("1"), std::string::npos);
  EXPECT_NE(vt.find("w"), std::string::npos);
  EXPECT_FALSE(integration_diagnostic(r).empty());

  std::vector<std::pair<BranchLabel, PuiseuxSeries>> s;
  for (const auto& l : r.labels) s.emplace_back(l.label, r.basis.series[l.basis_index]);
  VerifyReport v = verify(f, s, c, &r);
  EXPECT_TRUE(v.all_pass()) << verify_table(v);

  // dropping a branch breaks completeness
  s.pop_back();
  EXPECT_FALSE(verify(f, s, c).all_pass());
}

TEST(Report, DocumentsAreReproducible) {
  const char* text = "(1-z)w^3-z";
  RunConfig c;
  c.precision = 100;
  c.terms = 32;
  c.checks = 10;
  c.seed = 3;
  BiPoly f = parse(text);
  std::string a = radius_document(radius_all(f, c.radius()), text, c).dump();
  std::string b = radius_document(radius_all(f, c.radius()), text, c).dump();
  EXPECT_EQ(a, b);
}
