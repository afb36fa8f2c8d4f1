#include "dwf/dwf.h"

#include <cstring>
#include <functional>
#include <string>

#include "dwf/connection.hpp"
#include "dwf/curvature.hpp"
#include "dwf/error.hpp"
#include "dwf/finsler_core.hpp"
#include "dwf/lab.hpp"

struct dwf_spec {
  dwf::RunSpec spec;
};

struct dwf_report {
  dwf::DiagnosticsReport report;
};

namespace {

thread_local std::string g_last_error;

dwf_status status_of(dwf::ErrorKind k) {
  switch (k) {
    case dwf::ErrorKind::Capability:
      return DWF_ERR_CAPABILITY;
    case dwf::ErrorKind::Domain:
      return DWF_ERR_DOMAIN;
    case dwf::ErrorKind::Singular:
      return DWF_ERR_SINGULAR;
    case dwf::ErrorKind::Schema:
      return DWF_ERR_SCHEMA;
    case dwf::ErrorKind::Semantic:
      return DWF_ERR_SEMANTIC;
    case dwf::ErrorKind::Precondition:
      return DWF_ERR_PRECONDITION;
    case dwf::ErrorKind::Argument:
      return DWF_ERR_ARGUMENT;
  }
  return DWF_ERR_INTERNAL;
}

dwf_status guarded(const std::function<void()>& f) {
  g_last_error.clear();
  try {
    f();
    return DWF_OK;
  } catch (const dwf::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DWF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return DWF_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) dwf::fail(dwf::ErrorKind::Argument, what);
}

struct Values {
  std::vector<double> data;
  int rank = 0;
  Values(const dwf::BlockTensor& t) : data(t.data()), rank(t.rank()) {}
  Values(double v) : data{v} {}
};

struct Quantity {
  const char* name;
  std::function<Values(const dwf::ProductGeometry&)> eval;
};

const std::vector<Quantity>& quantities() {
  using namespace dwf;
  static const std::vector<Quantity> q{
      {"F2", [](const ProductGeometry& pg) { return Values(pg.product().F2().value()); }},
      {"g", [](const ProductGeometry& pg) { return Values(fundamental_tensor(pg).g); }},
      {"ginv", [](const ProductGeometry& pg) { return Values(fundamental_tensor(pg).ginv); }},
      {"angular", [](const ProductGeometry& pg) { return Values(angular_metric(pg)); }},
      {"cartan", [](const ProductGeometry& pg) { return Values(cartan_tensor(pg)); }},
      {"mean_cartan", [](const ProductGeometry& pg) { return Values(mean_cartan(pg)); }},
      {"matsumoto", [](const ProductGeometry& pg) { return Values(matsumoto_torsion(pg)); }},
      {"spray", [](const ProductGeometry& pg) { return Values(spray(pg).G); }},
      {"N", [](const ProductGeometry& pg) { return Values(nonlinear_connection(pg)); }},
      {"Gc", [](const ProductGeometry& pg) { return Values(frame_brackets(pg).Gc); }},
      {"F", [](const ProductGeometry& pg) { return Values(horizontal_coefficients(pg)); }},
      {"R", [](const ProductGeometry& pg) { return Values(frame_brackets(pg).R); }},
      {"B", [](const ProductGeometry& pg) { return Values(berwald_curvature(pg)); }},
      {"Rhh", [](const ProductGeometry& pg) { return Values(hh_curvature(pg)); }},
      {"Rmap", [](const ProductGeometry& pg) { return Values(riemann_map(pg)); }},
  };
  return q;
}

}  // namespace

extern "C" {

const char* dwf_last_error(void) { return g_last_error.c_str(); }

const char* dwf_status_name(dwf_status status) {
  switch (status) {
    case DWF_OK:
      return "ok";
    case DWF_ERR_CAPABILITY:
      return "capability";
    case DWF_ERR_DOMAIN:
      return "domain";
    case DWF_ERR_SINGULAR:
      return "singular";
    case DWF_ERR_SCHEMA:
      return "schema";
    case DWF_ERR_SEMANTIC:
      return "semantic";
    case DWF_ERR_PRECONDITION:
      return "precondition";
    case DWF_ERR_ARGUMENT:
      return "argument";
    case DWF_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

void dwf_string_free(char* s) { delete[] s; }

size_t dwf_fixture_count(void) { return dwf::fixture_names().size(); }

const char* dwf_fixture_name(size_t i) {
  static const std::vector<std::string> names = dwf::fixture_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

size_t dwf_suite_count(void) { return dwf::suite_names().size(); }

const char* dwf_suite_name(size_t i) {
  const auto& names = dwf::suite_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

dwf_status dwf_spec_parse(const char* json_text, dwf_spec** out) {
  return guarded([&] {
    require(json_text && out, "null argument");
    *out = new dwf_spec{dwf::parse_spec(std::string(json_text))};
  });
}

dwf_status dwf_spec_from_fixture(const char* name, uint64_t seed, int count, dwf_spec** out) {
  return guarded([&] {
    require(name && out, "null argument");
    require(count >= 1, "count must be >= 1");
    *out = new dwf_spec{dwf::fixture_spec(name, seed, count)};
  });
}

dwf_status dwf_spec_set_seed(dwf_spec* spec, uint64_t seed) {
  return guarded([&] {
    require(spec, "null spec");
    spec->spec.sampling.seed = seed;
  });
}

dwf_status dwf_spec_set_count(dwf_spec* spec, int count) {
  return guarded([&] {
    require(spec, "null spec");
    if (count < 1) dwf::fail(dwf::ErrorKind::Semantic, "sampling.count must be >= 1");
    spec->spec.sampling.count = count;
  });
}

dwf_status dwf_spec_set_tolerance(dwf_spec* spec, const char* name, double value) {
  return guarded([&] {
    require(spec && name, "null argument");
    // Validate through the parser so the rules stay in one place.
    auto doc = dwf::spec_to_json(spec->spec);
    doc["tolerances"][name] = value;
    const auto parsed = dwf::parse_spec(doc);
    spec->spec.tolerances = parsed.tolerances;
  });
}

dwf_status dwf_spec_set_suites(dwf_spec* spec, const char* const* names, size_t n) {
  return guarded([&] {
    require(spec && (names || n == 0), "null argument");
    std::vector<std::string> suites;
    for (size_t k = 0; k < n; ++k) {
      require(names[k], "null suite name");
      suites.emplace_back(names[k]);
    }
    for (const auto& s : suites) dwf::suite_checks(s);  // throws on unknown names
    spec->spec.suites = std::move(suites);
  });
}

dwf_status dwf_spec_to_json(const dwf_spec* spec, char** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    *out = copy_string(dwf::spec_to_json(spec->spec).dump(2));
  });
}

int dwf_spec_n1(const dwf_spec* spec) { return spec ? spec->spec.config.n1() : 0; }
int dwf_spec_n2(const dwf_spec* spec) { return spec ? spec->spec.config.n2() : 0; }

void dwf_spec_free(dwf_spec* spec) { delete spec; }

size_t dwf_quantity_count(void) { return quantities().size(); }

const char* dwf_quantity_name(size_t i) { return i < quantities().size() ? quantities()[i].name : nullptr; }

dwf_status dwf_eval(const dwf_spec* spec, const char* quantity, const double* flat, size_t flat_len, double* out,
                    size_t out_cap, size_t* out_len, int* rank) {
  return guarded([&] {
    require(spec && quantity && flat && out_len, "null argument");
    const auto& cfg = spec->spec.config;
    const Quantity* q = nullptr;
    for (const auto& c : quantities()) {
      if (std::strcmp(c.name, quantity) == 0) q = &c;
    }
    if (!q) dwf::fail(dwf::ErrorKind::Argument, std::string("unknown quantity '") + quantity + "'");
    require(flat_len == static_cast<size_t>(2 * cfg.n()), "point must have 2 (n1 + n2) coordinates");
    const auto p = dwf::TangentSample::from_flat(std::vector<double>(flat, flat + flat_len), cfg.n1(), cfg.n2());
    const dwf::ProductGeometry pg(cfg, p);
    const auto t = q->eval(pg);
    *out_len = t.data.size();
    if (rank) *rank = t.rank;
    require(out != nullptr && out_cap >= t.data.size(), "output buffer too small");
    std::copy(t.data.begin(), t.data.end(), out);
  });
}

dwf_status dwf_sample_point(const dwf_spec* spec, int i, double* flat, size_t flat_cap) {
  return guarded([&] {
    require(spec && flat, "null argument");
    require(i >= 0 && i < spec->spec.sampling.count, "sample index out of range");
    const auto pts = dwf::sample_points(spec->spec);
    const auto f = pts[static_cast<size_t>(i)].flat();
    require(flat_cap >= f.size(), "output buffer too small");
    std::copy(f.begin(), f.end(), flat);
  });
}

dwf_status dwf_run(const dwf_spec* spec, dwf_report** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    *out = new dwf_report{dwf::run_suites(spec->spec)};
  });
}

dwf_status dwf_report_parse(const char* json_text, dwf_report** out) {
  return guarded([&] {
    require(json_text && out, "null argument");
    *out = new dwf_report{dwf::parse_report(json_text)};
  });
}

dwf_status dwf_report_render(const dwf_report* report, dwf_format format, char** out) {
  return guarded([&] {
    require(report && out, "null argument");
    require(format == DWF_FORMAT_JSON || format == DWF_FORMAT_TEXT, "unknown format");
    *out = copy_string(dwf::emit_report(
        report->report, format == DWF_FORMAT_JSON ? dwf::ReportFormat::Json : dwf::ReportFormat::Text));
  });
}

dwf_status dwf_report_diffable(const dwf_report* report, char** out) {
  return guarded([&] {
    require(report && out, "null argument");
    *out = copy_string(dwf::report_to_json(report->report).at("diffable").dump(2));
  });
}

int dwf_report_exit_code(const dwf_report* report) { return report ? dwf::report_exit_code(report->report) : 1; }

void dwf_report_free(dwf_report* report) { delete report; }

}  // extern "C"
