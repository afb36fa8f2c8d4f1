#include <cmath>
#include <cstdio>
#include <sstream>

#include "dwf/error.hpp"
#include "dwf/lab.hpp"

namespace dwf {

using nlohmann::json;

namespace {

// JSON has no infinities; they travel as strings.
json number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  fail(ErrorKind::Schema, "report: expected a number");
}

// Witness details may carry non-finite values too.
json sanitize(const json& j) {
  if (j.is_number_float()) return number_json(j.get<double>());
  if (j.is_array() || j.is_object()) {
    json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = sanitize(*it);
    return out;
  }
  return j;
}

Verdict verdict_from(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "skipped") return Verdict::Skipped;
  fail(ErrorKind::Schema, "report: unknown verdict '" + s + "'");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

json report_to_json(const DiagnosticsReport& r) {
  json suites = json::array();
  json max_res = json::object();
  for (const auto& s : r.suites) {
    json checks = json::array();
    for (const auto& c : s.checks) {
      json e{{"name", c.name},
             {"residual", number_json(c.residual)},
             {"tolerance", number_json(c.tolerance)},
             {"verdict", to_string(c.verdict)},
             {"expected_failure", c.expected_failure},
             {"as_expected", c.as_expected},
             {"point", c.point},
             {"witness", c.witness.is_null() ? json::object() : sanitize(c.witness)}};
      if (!c.note.empty()) e["note"] = c.note;
      checks.push_back(std::move(e));
    }
    suites.push_back({{"name", s.name},
                      {"verdict", to_string(s.verdict)},
                      {"expected_failure", s.expected_failure},
                      {"as_expected", s.as_expected},
                      {"max_residual", number_json(s.max_residual)},
                      {"checks", std::move(checks)}});
    max_res[s.name] = number_json(s.max_residual);
  }
  json diff{{"id", r.id},
            {"fixture", r.fixture},
            {"classification", r.classification},
            {"n1", r.n1},
            {"n2", r.n2},
            {"jet_order", r.jet_order},
            {"seed", r.seed},
            {"count", r.count},
            {"summary",
             {{"pass", r.pass}, {"fail", r.fail}, {"skipped", r.skipped}, {"unexpected", r.unexpected},
              {"max_residual", std::move(max_res)}}},
            {"suites", std::move(suites)}};
  return {{"diffable", std::move(diff)}, {"meta", {{"timestamp", r.timestamp}}}};
}

DiagnosticsReport report_from_json(const json& doc) {
  try {
    const auto& d = doc.at("diffable");
    DiagnosticsReport r;
    r.id = d.at("id").get<std::string>();
    r.fixture = d.at("fixture").get<std::string>();
    r.classification = d.at("classification").get<std::string>();
    r.n1 = d.at("n1").get<int>();
    r.n2 = d.at("n2").get<int>();
    r.jet_order = d.at("jet_order").get<int>();
    r.seed = d.at("seed").get<std::uint64_t>();
    r.count = d.at("count").get<int>();
    const auto& sum = d.at("summary");
    r.pass = sum.at("pass").get<int>();
    r.fail = sum.at("fail").get<int>();
    r.skipped = sum.at("skipped").get<int>();
    r.unexpected = sum.at("unexpected").get<int>();
    for (const auto& s : d.at("suites")) {
      SuiteReport sr;
      sr.name = s.at("name").get<std::string>();
      sr.verdict = verdict_from(s.at("verdict").get<std::string>());
      sr.expected_failure = s.at("expected_failure").get<bool>();
      sr.as_expected = s.at("as_expected").get<bool>();
      sr.max_residual = number_from(s.at("max_residual"));
      for (const auto& c : s.at("checks")) {
        CheckEntry e;
        e.name = c.at("name").get<std::string>();
        e.residual = number_from(c.at("residual"));
        e.tolerance = number_from(c.at("tolerance"));
        e.verdict = verdict_from(c.at("verdict").get<std::string>());
        e.expected_failure = c.at("expected_failure").get<bool>();
        e.as_expected = c.at("as_expected").get<bool>();
        e.point = c.at("point").get<int>();
        e.witness = c.at("witness");
        if (c.contains("note")) e.note = c.at("note").get<std::string>();
        sr.checks.push_back(std::move(e));
      }
      r.suites.push_back(std::move(sr));
    }
    if (doc.contains("meta") && doc.at("meta").contains("timestamp")) {
      r.timestamp = doc.at("meta").at("timestamp").get<std::string>();
    }
    return r;
  } catch (const json::exception& e) {
    fail(ErrorKind::Schema, std::string("report: ") + e.what());
  }
}

DiagnosticsReport parse_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Schema, std::string("report: not a valid JSON document (") + e.what() + ")");
  }
  return report_from_json(j);
}

std::string emit_report(const DiagnosticsReport& r, ReportFormat format) {
  if (format == ReportFormat::Json) return report_to_json(r).dump(2) + "\n";
  std::ostringstream out;
  out << "run " << r.id << "  (" << r.classification << ", n1=" << r.n1 << ", n2=" << r.n2 << ", seed=" << r.seed
      << ", points=" << r.count << ", jet order " << r.jet_order << ")\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %-8s %-12s %-9s %s\n", "suite", "verdict", "max resid", "expected",
                "witness");
  out << line;
  for (const auto& s : r.suites) {
    std::string witness;
    for (const auto& c : s.checks) {
      if (c.verdict != Verdict::Fail || !c.witness.contains("point")) continue;
      witness = c.name + " @ " + sanitize(c.witness.at("point")).dump();
      break;
    }
    std::string status = s.as_expected ? (s.expected_failure ? "xfail-ok" : "yes") : "NO";
    std::snprintf(line, sizeof line, "%-22s %-8s %-12s %-9s ", s.name.c_str(), to_string(s.verdict),
                  fmt(s.max_residual).c_str(), status.c_str());
    out << line << witness << "\n";
  }
  out << "checks: " << r.pass << " pass, " << r.fail << " fail, " << r.skipped << " skipped, " << r.unexpected
      << " unexpected\n";
  return out.str();
}

int report_exit_code(const DiagnosticsReport& r) { return r.unexpected == 0 ? 0 : 1; }

}  // namespace dwf
