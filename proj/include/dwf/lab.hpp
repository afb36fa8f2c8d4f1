#pragma once

// Run specifications, deterministic sampling, verification suites and reports.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwf/config.hpp"
#include "dwf/coords.hpp"

namespace dwf {

struct Sampling {
  std::uint64_t seed = 0;
  int count = 25;
  double box_lo = -1.0;
  double box_hi = 1.0;
  double radius_lo = 0.5;
  double radius_hi = 2.0;
};

inline constexpr double kMinRadius = 1e-6;
inline constexpr double kMaxRadius = 1e6;

struct RunSpec {
  std::string id;
  std::string fixture;  // empty when the config is given explicitly
  ProductConfig config;
  Sampling sampling;
  std::vector<std::string> suites;
  std::vector<std::string> expected_failures;  // suite or "suite/check" names
  std::map<std::string, double> tolerances;     // suite or "suite/check" names
};

// Schema errors name the offending path; Semantic errors cover invalid values.
RunSpec parse_spec(const std::string& text);
RunSpec parse_spec(const nlohmann::json& doc);
nlohmann::json spec_to_json(const RunSpec& spec);
// Factors and warps of a declarative config (Custom factors cannot be written).
nlohmann::json config_to_json(const ProductConfig& cfg);

// Spec for a built-in fixture with its declared expected failures.
RunSpec fixture_spec(const std::string& name, std::uint64_t seed, int count = 25);

std::vector<TangentSample> sample_points(const RunSpec& spec);

// Registered suites in canonical order and their checks with default tolerances.
struct CheckInfo {
  std::string name;  // "suite/check"
  double tolerance;
};
const std::vector<std::string>& suite_names();
std::vector<CheckInfo> suite_checks(const std::string& suite);

enum class Verdict { Pass, Fail, Skipped };
const char* to_string(Verdict v) noexcept;

struct CheckEntry {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Pass;
  bool expected_failure = false;
  bool as_expected = true;
  int point = -1;  // sample index of the worst residual
  nlohmann::json witness;  // point coordinates and check-specific detail
  std::string note;  // reason for a skip
};

struct SuiteReport {
  std::string name;
  Verdict verdict = Verdict::Pass;
  bool expected_failure = false;
  bool as_expected = true;
  double max_residual = 0.0;
  std::vector<CheckEntry> checks;
};

struct DiagnosticsReport {
  std::string id;
  std::string fixture;
  std::string classification;
  int n1 = 0;
  int n2 = 0;
  int jet_order = 0;
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<SuiteReport> suites;
  int pass = 0;
  int fail = 0;
  int skipped = 0;
  int unexpected = 0;
  std::string timestamp;  // excluded from the diffable section
};

DiagnosticsReport run_suites(const RunSpec& spec);

enum class ReportFormat { Json, Text };
std::string emit_report(const DiagnosticsReport& report, ReportFormat format);
nlohmann::json report_to_json(const DiagnosticsReport& report);
DiagnosticsReport report_from_json(const nlohmann::json& doc);
DiagnosticsReport parse_report(const std::string& text);
// 0 when every verdict is as expected, 1 otherwise.
int report_exit_code(const DiagnosticsReport& report);

}  // namespace dwf
