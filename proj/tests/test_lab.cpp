#include <doctest.h>

#include <cmath>
#include <string>

#include "dwf/error.hpp"
#include "dwf/lab.hpp"

using namespace dwf;
using nlohmann::json;

namespace {

json fix1d_doc() {
  return json::parse(R"({
    "id": "fix1d-doc",
    "factors": [{"kind": "euclidean", "dim": 1}, {"kind": "euclidean", "dim": 1}],
    "warps": {"f1": {"kind": "poly_quadratic", "a": [1.0]}, "f2": {"kind": "poly_quadratic", "a": [1.0]}},
    "sampling": {"seed": 7, "count": 5}
  })");
}

// Error kind and message of a rejected spec.
std::pair<ErrorKind, std::string> rejection(const json& doc) {
  try {
    parse_spec(doc);
  } catch (const Error& e) {
    return {e.kind(), e.what()};
  }
  FAIL("spec was accepted");
  return {ErrorKind::Argument, ""};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("FIX-1D written as a spec document") {
  const auto spec = parse_spec(fix1d_doc());
  CHECK(spec.config.n1() == 1);
  CHECK(spec.config.n2() == 1);
  CHECK(spec.config.f1.kind() == WarpSpec::Kind::PolyQuadratic);
  CHECK(spec.config.f2.kind() == WarpSpec::Kind::PolyQuadratic);
  CHECK(spec.suites == suite_names());
  CHECK(spec.sampling.seed == 7);
  const auto again = parse_spec(spec_to_json(spec));
  CHECK(spec_to_json(again) == spec_to_json(spec));
  CHECK(config_to_json(again.config) == config_to_json(fixture("FIX-1D")));
}

TEST_CASE("declarative configs round-trip for every fixture") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    auto doc = config_to_json(fixture(name));
    doc["sampling"] = {{"seed", 1}};
    const auto spec = parse_spec(doc);
    CHECK(config_to_json(spec.config) == config_to_json(fixture(name)));
  }
}

TEST_CASE("schema and semantic rejections") {
  auto doc = fix1d_doc();
  doc["sampling"].erase("seed");
  auto [kind, msg] = rejection(doc);
  CHECK(kind == ErrorKind::Schema);
  CHECK(contains(msg, "$.sampling.seed"));

  doc = fix1d_doc();
  doc["factors"][1]["colour"] = "red";
  std::tie(kind, msg) = rejection(doc);
  CHECK(kind == ErrorKind::Schema);
  CHECK(contains(msg, "$.factors[1].colour"));

  doc = fix1d_doc();
  doc["factors"][1] = json::parse(R"({"kind": "randers", "dim": 2, "base": {"kind": "euclidean", "dim": 2}, "b": [1.2, 0]})");
  std::tie(kind, msg) = rejection(doc);
  CHECK(kind == ErrorKind::Semantic);
  CHECK(contains(msg, "$.factors[1].b"));
  CHECK(contains(msg, "< 1"));

  doc = fix1d_doc();
  doc["sampling"]["count"] = 0;
  CHECK(rejection(doc).first == ErrorKind::Semantic);

  doc = fix1d_doc();
  doc["sampling"]["radii"] = {1e-9, 1.0};
  CHECK(rejection(doc).first == ErrorKind::Semantic);

  doc = fix1d_doc();
  doc["sampling"]["box"] = {1.0, -1.0};
  CHECK(rejection(doc).first == ErrorKind::Semantic);

  doc = fix1d_doc();
  doc["warps"]["f1"] = {{"kind", "poly_quadratic"}, {"a", {-0.5}}};
  std::tie(kind, msg) = rejection(doc);
  CHECK(kind == ErrorKind::Semantic);
  CHECK(contains(msg, "$.warps.f1"));

  doc = fix1d_doc();
  doc["suites"] = {"homogeneity", "astrology"};
  std::tie(kind, msg) = rejection(doc);
  CHECK(kind == ErrorKind::Semantic);
  CHECK(contains(msg, "$.suites[1]"));

  doc = fix1d_doc();
  doc["tolerances"] = {{"homogeneity/nope", 1e-3}};
  CHECK(rejection(doc).first == ErrorKind::Semantic);

  doc = fix1d_doc();
  doc["fixture"] = "FIX-E";
  CHECK(rejection(doc).first == ErrorKind::Schema);

  CHECK_THROWS_AS(parse_spec(std::string("{ not json")), Error);
}

TEST_CASE("sampling is deterministic and respects the slit floor") {
  auto spec = fixture_spec("FIX-E", 123, 100);
  const auto a = sample_points(spec);
  const auto b = sample_points(spec);
  REQUIRE(a.size() == 100);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].flat() == b[k].flat());
    double ny = 0.0;
    double nv = 0.0;
    for (double c : a[k].y) ny += c * c;
    for (double c : a[k].v) nv += c * c;
    CHECK(std::sqrt(ny) >= 0.5 - 1e-12);
    CHECK(std::sqrt(ny) <= 2.0 + 1e-12);
    CHECK(std::sqrt(nv) >= 1e-6);
    for (double c : a[k].x) CHECK(std::abs(c) <= 1.0);
  }
  spec.sampling.seed = 124;
  CHECK(sample_points(spec)[0].flat() != a[0].flat());
}

TEST_CASE("unknown suite fails before computation and empty list passes") {
  auto spec = fixture_spec("FIX-P", 1, 3);
  spec.suites = {"homogeneity", "nonexistent"};
  CHECK_THROWS_AS(run_suites(spec), Error);
  spec.suites.clear();
  const auto r = run_suites(spec);
  CHECK(r.suites.empty());
  CHECK(r.pass + r.fail + r.skipped == 0);
  CHECK(report_exit_code(r) == 0);
}

TEST_CASE("suites give identical residuals alone and together") {
  auto all = fixture_spec("FIX-Q", 5, 4);
  const auto together = run_suites(all);
  for (const auto& s : together.suites) {
    CAPTURE(s.name);
    auto one = all;
    one.suites = {s.name};
    const auto alone = run_suites(one);
    REQUIRE(alone.suites.size() == 1);
    CHECK(report_to_json(alone)["diffable"]["suites"][0] ==
          report_to_json(together)["diffable"]["suites"][static_cast<std::size_t>(&s - &together.suites[0])]);
  }
}

TEST_CASE("summary counts and verdicts follow residuals") {
  const auto r = run_suites(fixture_spec("FIX-R", 3, 6));
  int pass = 0, fail = 0, skipped = 0;
  for (const auto& s : r.suites) {
    for (const auto& c : s.checks) {
      if (c.verdict == Verdict::Pass) ++pass;
      if (c.verdict == Verdict::Fail) ++fail;
      if (c.verdict == Verdict::Skipped) ++skipped;
      if (c.verdict != Verdict::Skipped) CHECK((c.verdict == Verdict::Pass) == (c.residual <= c.tolerance));
    }
  }
  CHECK(pass == r.pass);
  CHECK(fail == r.fail);
  CHECK(skipped == r.skipped);
  // Reinhart is the declared expected failure.
  CHECK(r.fail == 1);
  CHECK(r.unexpected == 0);
  CHECK(report_exit_code(r) == 0);
}

TEST_CASE("tolerance overrides and undeclared failures change the exit code") {
  auto spec = fixture_spec("FIX-E", 9, 3);
  spec.suites = {"homogeneity"};
  spec.tolerances["homogeneity/spray"] = -1.0;
  auto r = run_suites(spec);
  CHECK(r.fail == 1);
  CHECK(report_exit_code(r) == 1);
  CHECK(r.suites[0].checks[1].tolerance == -1.0);

  // A declared failure that passes is also unexpected.
  spec.tolerances.clear();
  spec.expected_failures = {"homogeneity/spray"};
  r = run_suites(spec);
  CHECK(r.unexpected == 1);
  CHECK(report_exit_code(r) == 1);

  auto fr = fixture_spec("FIX-R", 9, 3);
  fr.expected_failures.clear();
  fr.suites = {"reinhart"};
  r = run_suites(fr);
  CHECK(report_exit_code(r) == 1);
}

TEST_CASE("json reports round-trip and text has one row per suite") {
  auto spec = fixture_spec("FIX-R", 11, 3);
  spec.suites = {"reinhart", "con1", "homogeneity"};
  const auto r = run_suites(spec);
  const auto text = emit_report(r, ReportFormat::Json);
  const auto back = parse_report(text);
  CHECK(emit_report(back, ReportFormat::Json) == text);
  const auto table = emit_report(r, ReportFormat::Text);
  for (const auto& s : spec.suites) CHECK(contains(table, "\n" + s + " "));
  // Failing rows carry the witness point.
  CHECK(contains(table, "reinhart/defect @ {\"u\""));
  const auto& w = r.suites[0].checks[0].witness;
  CHECK(w.contains("X"));
  CHECK(w.contains("point"));
  CHECK(report_to_json(r)["diffable"]["summary"]["max_residual"].contains("reinhart"));
}

TEST_CASE("non-finite residuals survive serialization") {
  DiagnosticsReport r;
  r.id = "x";
  SuiteReport s;
  s.name = "homogeneity";
  CheckEntry c;
  c.name = "homogeneity/spray";
  c.residual = INFINITY;
  c.verdict = Verdict::Fail;
  c.as_expected = false;
  c.witness = {{"value", NAN}};
  s.checks.push_back(c);
  s.max_residual = INFINITY;
  r.suites.push_back(s);
  const auto back = parse_report(emit_report(r, ReportFormat::Json));
  CHECK(std::isinf(back.suites[0].checks[0].residual));
  CHECK(back.suites[0].checks[0].witness["value"] == "nan");
}
