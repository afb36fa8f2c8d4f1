// Command-line front end; talks to the engine only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dwf/dwf.h"

namespace {

constexpr int kExitUsage = 2;

struct SpecDeleter {
  void operator()(dwf_spec* s) const { dwf_spec_free(s); }
};
struct ReportDeleter {
  void operator()(dwf_report* r) const { dwf_report_free(r); }
};
using SpecPtr = std::unique_ptr<dwf_spec, SpecDeleter>;
using ReportPtr = std::unique_ptr<dwf_report, ReportDeleter>;

struct CliError {
  int code;
  std::string message;
};

void check(dwf_status s, int code = kExitUsage) {
  if (s != DWF_OK) throw CliError{code, std::string(dwf_status_name(s)) + " error: " + dwf_last_error()};
}

std::string take(char* s) {
  std::string out(s);
  dwf_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{kExitUsage, "cannot read '" + path + "'"};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw CliError{kExitUsage, "cannot write '" + path + "'"};
}

struct SpecOptions {
  std::string spec_path;
  std::string fixture;
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  std::vector<std::string> tols;
  std::vector<std::string> suites;
};

void add_spec_options(CLI::App* cmd, SpecOptions& o, bool with_suites) {
  auto* spec = cmd->add_option("--spec", o.spec_path, "run specification (json)")->check(CLI::ExistingFile);
  cmd->add_option("--fixture", o.fixture, "built-in fixture name")->excludes(spec);
  cmd->add_option("--seed", o.seed, "sampling seed (u64)");
  cmd->add_option("--points", o.points, "number of sample points")->check(CLI::PositiveNumber);
  if (with_suites) {
    cmd->add_option("--tol", o.tols, "tolerance override name=value (repeatable)");
    cmd->add_option("--suite", o.suites, "suite to run (repeatable)");
  }
}

SpecPtr build_spec(const SpecOptions& o) {
  dwf_spec* raw = nullptr;
  if (!o.spec_path.empty()) {
    check(dwf_spec_parse(read_file(o.spec_path).c_str(), &raw));
  } else if (!o.fixture.empty()) {
    check(dwf_spec_from_fixture(o.fixture.c_str(), o.seed.value_or(0), o.points.value_or(25), &raw));
  } else {
    throw CliError{kExitUsage, "one of --spec or --fixture is required"};
  }
  SpecPtr spec(raw);
  if (o.seed) check(dwf_spec_set_seed(spec.get(), *o.seed));
  if (o.points) check(dwf_spec_set_count(spec.get(), *o.points));
  for (const auto& t : o.tols) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) throw CliError{kExitUsage, "--tol expects name=value, got '" + t + "'"};
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(t.substr(eq + 1), &used);
      if (used != t.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw CliError{kExitUsage, "--tol value is not a number in '" + t + "'"};
    }
    check(dwf_spec_set_tolerance(spec.get(), t.substr(0, eq).c_str(), value));
  }
  if (!o.suites.empty()) {
    std::vector<const char*> names;
    for (const auto& s : o.suites) names.push_back(s.c_str());
    check(dwf_spec_set_suites(spec.get(), names.data(), names.size()));
  }
  return spec;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw CliError{kExitUsage, "--at expects comma-separated numbers, got '" + text + "'"};
    }
  }
  return out;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_eval(const SpecOptions& o, const std::vector<std::string>& at, std::vector<std::string> tensors) {
  const auto spec = build_spec(o);
  const int n = dwf_spec_n1(spec.get()) + dwf_spec_n2(spec.get());
  std::vector<std::vector<double>> points;
  for (const auto& a : at) points.push_back(parse_point(a));
  if (points.empty()) {
    const int count = o.points.value_or(1);
    for (int i = 0; i < count; ++i) {
      std::vector<double> flat(static_cast<std::size_t>(2 * n));
      check(dwf_sample_point(spec.get(), i, flat.data(), flat.size()));
      points.push_back(std::move(flat));
    }
  }
  if (tensors.empty()) tensors = {"F2", "g", "spray", "N"};
  std::ostringstream out;
  out << "[";
  for (std::size_t k = 0; k < points.size(); ++k) {
    out << (k ? ",\n " : "") << "{\"point\": [";
    for (std::size_t i = 0; i < points[k].size(); ++i) out << (i ? ", " : "") << number(points[k][i]);
    out << "]";
    for (const auto& t : tensors) {
      std::size_t len = 0;
      int rank = 0;
      const auto s = dwf_eval(spec.get(), t.c_str(), points[k].data(), points[k].size(), nullptr, 0, &len, &rank);
      if (s != DWF_OK && len == 0) check(s);
      std::vector<double> values(len);
      check(dwf_eval(spec.get(), t.c_str(), points[k].data(), points[k].size(), values.data(), values.size(), &len,
                     &rank));
      out << ", \"" << t << "\": {\"rank\": " << rank << ", \"dim\": " << n << ", \"values\": [";
      for (std::size_t i = 0; i < values.size(); ++i) out << (i ? ", " : "") << number(values[i]);
      out << "]}";
    }
    out << "}";
  }
  out << "]\n";
  std::cout << out.str();
  return 0;
}

int run_verify(const SpecOptions& o, const std::string& json_path) {
  const auto spec = build_spec(o);
  dwf_report* raw = nullptr;
  check(dwf_run(spec.get(), &raw));
  ReportPtr report(raw);
  char* text = nullptr;
  check(dwf_report_render(report.get(), DWF_FORMAT_TEXT, &text));
  std::cout << take(text);
  if (!json_path.empty()) {
    char* json = nullptr;
    check(dwf_report_render(report.get(), DWF_FORMAT_JSON, &json));
    write_file(json_path, take(json));
  }
  return dwf_report_exit_code(report.get());
}

int run_report(const std::string& input, const std::string& json_path) {
  dwf_report* raw = nullptr;
  check(dwf_report_parse(read_file(input).c_str(), &raw));
  ReportPtr report(raw);
  char* text = nullptr;
  check(dwf_report_render(report.get(), DWF_FORMAT_TEXT, &text));
  std::cout << take(text);
  if (!json_path.empty()) {
    char* json = nullptr;
    check(dwf_report_render(report.get(), DWF_FORMAT_JSON, &json));
    write_file(json_path, take(json));
  }
  return dwf_report_exit_code(report.get());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Doubly warped Finsler product engine"};
  app.require_subcommand(1);

  SpecOptions eval_opts;
  std::vector<std::string> at;
  std::vector<std::string> tensors;
  auto* eval = app.add_subcommand("eval", "print tensors at points");
  add_spec_options(eval, eval_opts, false);
  eval->add_option("--at", at, "point as comma-separated x,u,y,v coordinates (repeatable)");
  eval->add_option("--tensor", tensors, "quantity to print (repeatable)");

  SpecOptions verify_opts;
  std::string verify_json;
  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_spec_options(verify, verify_opts, true);
  verify->add_option("--json", verify_json, "write the json report here");

  auto* fixtures = app.add_subcommand("fixtures", "list built-in fixtures, suites and quantities");

  std::string report_in;
  std::string report_json;
  auto* report = app.add_subcommand("report", "re-render a stored json report");
  report->add_option("input", report_in, "json report")->required()->check(CLI::ExistingFile);
  report->add_option("--json", report_json, "write the re-serialized json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*eval) return run_eval(eval_opts, at, tensors);
    if (*verify) return run_verify(verify_opts, verify_json);
    if (*report) return run_report(report_in, report_json);
    if (*fixtures) {
      std::cout << "fixtures:";
      for (std::size_t i = 0; i < dwf_fixture_count(); ++i) std::cout << " " << dwf_fixture_name(i);
      std::cout << "\nsuites:";
      for (std::size_t i = 0; i < dwf_suite_count(); ++i) std::cout << " " << dwf_suite_name(i);
      std::cout << "\nquantities:";
      for (std::size_t i = 0; i < dwf_quantity_count(); ++i) std::cout << " " << dwf_quantity_name(i);
      std::cout << "\n";
      return 0;
    }
  } catch (const CliError& e) {
    std::cerr << "dwf: " << e.message << "\n";
    return e.code;
  }
  return kExitUsage;
}
