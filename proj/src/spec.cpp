#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "dwf/error.hpp"
#include "dwf/lab.hpp"

namespace dwf {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  fail(ErrorKind::Schema, path + ": " + what);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) schema(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) schema(path + "." + key, "unknown key");
  }
}

const json& required(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) schema(path + "." + key, "required key is missing");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) schema(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema(path, "expected a finite number");
  return d;
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) schema(path, "expected an integer");
  const auto i = v.get<std::int64_t>();
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) schema(path, "integer out of range");
  return static_cast<int>(i);
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) schema(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) schema(path, "expected a string");
  return v.get<std::string>();
}

// Re-tag value errors from the config constructors with the spec path.
template <typename F>
auto semantic_at(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Schema) throw;
    fail(ErrorKind::Semantic, path + ": " + e.what());
  }
}

Polynomial polynomial(const json& v, const std::string& path) {
  if (v.is_number()) return Polynomial::constant(number(v, path));
  if (!v.is_array()) schema(path, "expected a number or an array of terms");
  Polynomial p;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string tp = path + "[" + std::to_string(k) + "]";
    only_keys(v[k], tp, {"coeff", "powers"});
    Polynomial::Term t;
    t.coeff = number(required(v[k], tp, "coeff"), tp + ".coeff");
    if (v[k].contains("powers")) {
      const auto& pw = v[k].at("powers");
      if (!pw.is_array()) schema(tp + ".powers", "expected an array of integers");
      for (std::size_t e = 0; e < pw.size(); ++e) {
        const int x = integer(pw[e], tp + ".powers[" + std::to_string(e) + "]");
        if (x < 0) fail(ErrorKind::Semantic, tp + ".powers: exponents must be >= 0");
        t.exponents.push_back(x);
      }
    }
    p.terms.push_back(std::move(t));
  }
  return p;
}

json polynomial_json(const Polynomial& p) {
  if (p.terms.size() == 1 && p.is_constant()) return p.terms[0].coeff;
  json arr = json::array();
  for (const auto& t : p.terms) arr.push_back({{"coeff", t.coeff}, {"powers", t.exponents}});
  return arr;
}

FactorMetricSpec factor(const json& v, const std::string& path) {
  only_keys(v, path, {"kind", "dim", "matrix", "base", "b"});
  const std::string kind = text(required(v, path, "kind"), path + ".kind");
  const int dim = integer(required(v, path, "dim"), path + ".dim");
  if (dim < 1) fail(ErrorKind::Semantic, path + ".dim: must be >= 1");
  auto forbid = [&](const char* key) {
    if (v.contains(key)) schema(path + "." + key, "not allowed for kind '" + kind + "'");
  };
  if (kind == "euclidean") {
    forbid("matrix");
    forbid("base");
    forbid("b");
    return FactorMetricSpec::euclidean(dim);
  }
  if (kind == "riemannian_quadratic") {
    forbid("base");
    forbid("b");
    const auto& m = required(v, path, "matrix");
    const std::string mp = path + ".matrix";
    if (!m.is_array() || static_cast<int>(m.size()) != dim) schema(mp, "expected a dim x dim array");
    std::vector<std::vector<Polynomial>> a;
    for (int i = 0; i < dim; ++i) {
      const std::string rp = mp + "[" + std::to_string(i) + "]";
      if (!m[static_cast<std::size_t>(i)].is_array() || static_cast<int>(m[static_cast<std::size_t>(i)].size()) != dim) {
        schema(rp, "expected a row of length dim");
      }
      std::vector<Polynomial> row;
      for (int j = 0; j < dim; ++j) {
        auto p = polynomial(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], rp + "[" + std::to_string(j) + "]");
        for (const auto& t : p.terms) {
          if (static_cast<int>(t.exponents.size()) > dim) {
            fail(ErrorKind::Semantic, rp + ": polynomial refers to more than dim coordinates");
          }
        }
        row.push_back(std::move(p));
      }
      a.push_back(std::move(row));
    }
    return semantic_at(mp, [&] { return FactorMetricSpec::riemannian_quadratic(std::move(a)); });
  }
  if (kind == "randers") {
    forbid("matrix");
    const auto base = factor(required(v, path, "base"), path + ".base");
    if (base.kind() == FactorMetricSpec::Kind::Randers) schema(path + ".base", "randers base must be Riemannian");
    if (base.dim() != dim) fail(ErrorKind::Semantic, path + ".base.dim: must equal dim");
    auto b = numbers(required(v, path, "b"), path + ".b");
    if (static_cast<int>(b.size()) != dim) fail(ErrorKind::Semantic, path + ".b: length must equal dim");
    return semantic_at(path + ".b", [&] { return FactorMetricSpec::randers(base, std::move(b)); });
  }
  schema(path + ".kind", "unknown factor kind '" + kind + "' (euclidean, riemannian_quadratic, randers)");
}

json factor_json(const FactorMetricSpec& f) {
  json out;
  out["dim"] = f.dim();
  auto matrix = [&] {
    json m = json::array();
    for (const auto& row : f.quadratic()) {
      json r = json::array();
      for (const auto& p : row) r.push_back(polynomial_json(p));
      m.push_back(std::move(r));
    }
    return m;
  };
  switch (f.kind()) {
    case FactorMetricSpec::Kind::Euclidean:
      out["kind"] = "euclidean";
      break;
    case FactorMetricSpec::Kind::RiemannianQuadratic:
      out["kind"] = "riemannian_quadratic";
      out["matrix"] = matrix();
      break;
    case FactorMetricSpec::Kind::Randers: {
      out["kind"] = "randers";
      json base{{"dim", f.dim()}};
      if (f.quadratic().empty()) {
        base["kind"] = "euclidean";
      } else {
        base["kind"] = "riemannian_quadratic";
        base["matrix"] = matrix();
      }
      out["base"] = std::move(base);
      out["b"] = f.covector();
      break;
    }
    case FactorMetricSpec::Kind::Custom:
      fail(ErrorKind::Argument, "custom factor metrics cannot be written as a spec document");
  }
  return out;
}

WarpSpec warp(const json& v, const std::string& path) {
  only_keys(v, path, {"kind", "c", "a", "k", "axis"});
  const std::string kind = text(required(v, path, "kind"), path + ".kind");
  auto only = [&](std::initializer_list<const char*> keys) {
    for (const char* k : {"c", "a", "k", "axis"}) {
      bool ok = false;
      for (const char* a : keys) ok = ok || std::string(a) == k;
      if (!ok && v.contains(k)) schema(path + "." + k, "not allowed for kind '" + kind + "'");
    }
  };
  if (kind == "constant") {
    only({"c"});
    const double c = number(required(v, path, "c"), path + ".c");
    return semantic_at(path + ".c", [&] { return WarpSpec::constant(c); });
  }
  if (kind == "poly_quadratic") {
    only({"a"});
    auto a = numbers(required(v, path, "a"), path + ".a");
    return semantic_at(path + ".a", [&] { return WarpSpec::poly_quadratic(std::move(a)); });
  }
  if (kind == "exponential") {
    only({"k", "axis"});
    const double k = number(required(v, path, "k"), path + ".k");
    const int axis = v.contains("axis") ? integer(v.at("axis"), path + ".axis") : 0;
    return semantic_at(path, [&] { return WarpSpec::exponential(k, axis); });
  }
  schema(path + ".kind", "unknown warp kind '" + kind + "' (constant, poly_quadratic, exponential)");
}

json warp_json(const WarpSpec& w) {
  switch (w.kind()) {
    case WarpSpec::Kind::Constant:
      return {{"kind", "constant"}, {"c", w.c()}};
    case WarpSpec::Kind::PolyQuadratic:
      return {{"kind", "poly_quadratic"}, {"a", w.coefficients()}};
    case WarpSpec::Kind::Exponential:
      return {{"kind", "exponential"}, {"k", w.rate()}, {"axis", w.axis()}};
  }
  return {};
}

std::vector<std::string> names(const json& v, const std::string& path) {
  if (!v.is_array()) schema(path, "expected an array of names");
  std::vector<std::string> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(text(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

bool known_name(const std::string& name) {
  for (const auto& s : suite_names()) {
    if (s == name) return true;
    for (const auto& c : suite_checks(s)) {
      if (c.name == name) return true;
    }
  }
  return false;
}

bool known_suite(const std::string& name) {
  for (const auto& s : suite_names()) {
    if (s == name) return true;
  }
  return false;
}

// Uniform double in [0, 1) from the top 53 bits.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double gaussian(std::mt19937_64& rng) {
  double u1 = uniform(rng);
  while (u1 <= 0.0) u1 = uniform(rng);
  const double u2 = uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::vector<double> sphere(std::mt19937_64& rng, int dim, double radius) {
  std::vector<double> d(static_cast<std::size_t>(dim));
  double norm = 0.0;
  while (norm < 1e-8) {
    norm = 0.0;
    for (auto& c : d) {
      c = gaussian(rng);
      norm += c * c;
    }
    norm = std::sqrt(norm);
  }
  for (auto& c : d) c *= radius / norm;
  return d;
}

}  // namespace

RunSpec parse_spec(const json& doc) {
  only_keys(doc, "$", {"id", "fixture", "factors", "warps", "sampling", "suites", "expected_failures", "tolerances"});
  RunSpec spec;
  if (doc.contains("id")) spec.id = text(doc.at("id"), "$.id");
  if (doc.contains("fixture")) {
    if (doc.contains("factors") || doc.contains("warps")) schema("$.fixture", "use either fixture or factors/warps");
    spec.fixture = text(doc.at("fixture"), "$.fixture");
    const auto f = find_fixture(spec.fixture);
    if (!f) fail(ErrorKind::Semantic, "$.fixture: unknown fixture '" + spec.fixture + "'");
    spec.config = *f;
  } else {
    const auto& fs = required(doc, "$", "factors");
    if (!fs.is_array() || fs.size() != 2) schema("$.factors", "expected exactly two factor entries");
    spec.config.factor1 = factor(fs[0], "$.factors[0]");
    spec.config.factor2 = factor(fs[1], "$.factors[1]");
    const auto& ws = required(doc, "$", "warps");
    only_keys(ws, "$.warps", {"f1", "f2"});
    spec.config.f1 = warp(required(ws, "$.warps", "f1"), "$.warps.f1");
    spec.config.f2 = warp(required(ws, "$.warps", "f2"), "$.warps.f2");
    semantic_at("$.warps.f1", [&] { spec.config.f1.check_dim(spec.config.n1()); return 0; });
    semantic_at("$.warps.f2", [&] { spec.config.f2.check_dim(spec.config.n2()); return 0; });
  }
  if (spec.id.empty()) spec.id = spec.fixture.empty() ? "custom" : spec.fixture;
  spec.config.id = spec.id;
  semantic_at("$", [&] { spec.config.validate(); return 0; });

  const auto& s = required(doc, "$", "sampling");
  only_keys(s, "$.sampling", {"seed", "count", "box", "radii"});
  const auto& seed = required(s, "$.sampling", "seed");
  if (!seed.is_number_integer()) schema("$.sampling.seed", "expected a non-negative 64-bit integer");
  if (seed.is_number_unsigned()) {
    spec.sampling.seed = seed.get<std::uint64_t>();
  } else {
    const auto v = seed.get<std::int64_t>();
    if (v < 0) schema("$.sampling.seed", "expected a non-negative 64-bit integer");
    spec.sampling.seed = static_cast<std::uint64_t>(v);
  }
  if (s.contains("count")) spec.sampling.count = integer(s.at("count"), "$.sampling.count");
  if (spec.sampling.count < 1) fail(ErrorKind::Semantic, "$.sampling.count: must be >= 1");
  if (s.contains("box")) {
    const auto b = numbers(s.at("box"), "$.sampling.box");
    if (b.size() != 2) schema("$.sampling.box", "expected [lo, hi]");
    if (!(b[0] < b[1])) fail(ErrorKind::Semantic, "$.sampling.box: need lo < hi");
    spec.sampling.box_lo = b[0];
    spec.sampling.box_hi = b[1];
  }
  if (s.contains("radii")) {
    const auto r = numbers(s.at("radii"), "$.sampling.radii");
    if (r.size() != 2) schema("$.sampling.radii", "expected [lo, hi]");
    if (!(r[0] >= kMinRadius && r[1] <= kMaxRadius && r[0] <= r[1])) {
      fail(ErrorKind::Semantic, "$.sampling.radii: need 1e-6 <= lo <= hi <= 1e6");
    }
    spec.sampling.radius_lo = r[0];
    spec.sampling.radius_hi = r[1];
  }

  spec.suites = suite_names();
  if (doc.contains("suites")) {
    spec.suites = names(doc.at("suites"), "$.suites");
    for (std::size_t k = 0; k < spec.suites.size(); ++k) {
      if (!known_suite(spec.suites[k])) {
        fail(ErrorKind::Semantic, "$.suites[" + std::to_string(k) + "]: unknown suite '" + spec.suites[k] + "'");
      }
    }
  }
  if (doc.contains("expected_failures")) {
    spec.expected_failures = names(doc.at("expected_failures"), "$.expected_failures");
    for (std::size_t k = 0; k < spec.expected_failures.size(); ++k) {
      if (!known_name(spec.expected_failures[k])) {
        fail(ErrorKind::Semantic, "$.expected_failures[" + std::to_string(k) + "]: unknown suite or check '" +
                                      spec.expected_failures[k] + "'");
      }
    }
  }
  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    if (!t.is_object()) schema("$.tolerances", "expected an object");
    for (const auto& [key, val] : t.items()) {
      const std::string path = "$.tolerances." + key;
      if (!known_name(key)) fail(ErrorKind::Semantic, path + ": unknown suite or check");
      const double v = number(val, path);
      if (!(v >= 0.0)) fail(ErrorKind::Semantic, path + ": must be >= 0");
      spec.tolerances[key] = v;
    }
  }
  return spec;
}

RunSpec parse_spec(const std::string& doc) {
  json j;
  try {
    j = json::parse(doc);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Schema, std::string("$: not a valid JSON document (") + e.what() + ")");
  }
  return parse_spec(j);
}

json config_to_json(const ProductConfig& cfg) {
  return {{"factors", json::array({factor_json(cfg.factor1), factor_json(cfg.factor2)})},
          {"warps", {{"f1", warp_json(cfg.f1)}, {"f2", warp_json(cfg.f2)}}}};
}

json spec_to_json(const RunSpec& spec) {
  json out;
  out["id"] = spec.id;
  if (!spec.fixture.empty()) {
    out["fixture"] = spec.fixture;
  } else {
    const auto c = config_to_json(spec.config);
    out["factors"] = c.at("factors");
    out["warps"] = c.at("warps");
  }
  const auto& s = spec.sampling;
  out["sampling"] = {{"seed", s.seed},
                     {"count", s.count},
                     {"box", {s.box_lo, s.box_hi}},
                     {"radii", {s.radius_lo, s.radius_hi}}};
  out["suites"] = spec.suites;
  out["expected_failures"] = spec.expected_failures;
  out["tolerances"] = spec.tolerances;
  return out;
}

RunSpec fixture_spec(const std::string& name, std::uint64_t seed, int count) {
  RunSpec spec;
  spec.id = name;
  spec.fixture = name;
  spec.config = fixture(name);
  spec.sampling.seed = seed;
  spec.sampling.count = count;
  spec.suites = suite_names();
  // A non-Riemannian factor cannot give a Reinhart lift.
  if (!spec.config.factor1.is_riemannian() || !spec.config.factor2.is_riemannian()) {
    spec.expected_failures.push_back("reinhart/defect");
  }
  return spec;
}

std::vector<TangentSample> sample_points(const RunSpec& spec) {
  std::mt19937_64 rng(spec.sampling.seed);
  const auto& s = spec.sampling;
  const int n1 = spec.config.n1();
  const int n2 = spec.config.n2();
  auto box = [&](int dim) {
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (auto& c : x) c = s.box_lo + (s.box_hi - s.box_lo) * uniform(rng);
    return x;
  };
  auto radius = [&] { return std::max(kMinRadius, s.radius_lo + (s.radius_hi - s.radius_lo) * uniform(rng)); };
  std::vector<TangentSample> out;
  out.reserve(static_cast<std::size_t>(s.count));
  for (int k = 0; k < s.count; ++k) {
    TangentSample p;
    p.x = box(n1);
    p.u = box(n2);
    p.y = sphere(rng, n1, radius());
    p.v = sphere(rng, n2, radius());
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace dwf
