#include "dwf/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dwf/error.hpp"
#include "dwf/linalg.hpp"

namespace dwf {

Polynomial Polynomial::constant(double c) { return Polynomial{{{c, {}}}}; }

Jet Polynomial::eval(std::span<const Jet> x) const {
  Jet sum(0.0);
  for (const auto& t : terms) {
    if (t.exponents.size() > x.size()) fail(ErrorKind::Argument, "polynomial term refers to a missing coordinate");
    Jet term(t.coeff);
    for (std::size_t k = 0; k < t.exponents.size(); ++k) {
      if (t.exponents[k] < 0) fail(ErrorKind::Argument, "negative polynomial exponent");
      if (t.exponents[k] > 0) term = term * pow(x[k], t.exponents[k]);
    }
    sum += term;
  }
  return sum;
}

double Polynomial::eval(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& t : terms) {
    if (t.exponents.size() > x.size()) fail(ErrorKind::Argument, "polynomial term refers to a missing coordinate");
    double term = t.coeff;
    for (std::size_t k = 0; k < t.exponents.size(); ++k) term *= std::pow(x[k], t.exponents[k]);
    sum += term;
  }
  return sum;
}

bool Polynomial::is_constant() const {
  return std::all_of(terms.begin(), terms.end(), [](const Term& t) {
    return t.coeff == 0.0 || std::all_of(t.exponents.begin(), t.exponents.end(), [](int e) { return e == 0; });
  });
}

FactorMetricSpec FactorMetricSpec::euclidean(int dim) {
  if (dim < 1) fail(ErrorKind::Semantic, "factor dimension must be >= 1");
  FactorMetricSpec s;
  s.kind_ = Kind::Euclidean;
  s.dim_ = dim;
  s.label_ = "euclidean";
  return s;
}

FactorMetricSpec FactorMetricSpec::riemannian_quadratic(std::vector<std::vector<Polynomial>> a) {
  const auto n = a.size();
  if (n < 1) fail(ErrorKind::Semantic, "factor dimension must be >= 1");
  for (const auto& row : a) {
    if (row.size() != n) fail(ErrorKind::Semantic, "quadratic metric matrix must be square");
  }
  // Symmetrize: keep the upper triangle as authoritative.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) a[i][j] = a[j][i];
  }
  FactorMetricSpec s;
  s.kind_ = Kind::RiemannianQuadratic;
  s.dim_ = static_cast<int>(n);
  s.a_ = std::move(a);
  s.label_ = "riemannian_quadratic";
  bool constant = true;
  for (const auto& row : s.a_) {
    for (const auto& p : row) constant = constant && p.is_constant();
  }
  if (constant) {
    std::vector<double> origin(n, 0.0);
    s.check_positive_definite(origin);
  }
  return s;
}

FactorMetricSpec FactorMetricSpec::randers(const FactorMetricSpec& base, std::vector<double> b) {
  if (base.kind_ != Kind::Euclidean && base.kind_ != Kind::RiemannianQuadratic) {
    fail(ErrorKind::Semantic, "randers base must be euclidean or riemannian_quadratic");
  }
  if (static_cast<int>(b.size()) != base.dim_) fail(ErrorKind::Semantic, "randers covector length must equal dim");
  FactorMetricSpec s = base;
  s.kind_ = Kind::Randers;
  s.b_ = std::move(b);
  s.label_ = "randers";
  bool constant = true;
  for (const auto& row : s.a_) {
    for (const auto& p : row) constant = constant && p.is_constant();
  }
  if (constant) {
    std::vector<double> origin(static_cast<std::size_t>(s.dim_), 0.0);
    const double norm = s.covector_norm(origin);
    if (!(norm < 1.0)) {
      fail(ErrorKind::Semantic, "randers covector must satisfy |b| < 1 in the base metric (got " +
                                    std::to_string(norm) + ")");
    }
  }
  return s;
}

FactorMetricSpec FactorMetricSpec::custom(int dim, CustomF2Fn f2, bool riemannian, std::string label) {
  if (dim < 1) fail(ErrorKind::Semantic, "factor dimension must be >= 1");
  if (!f2) fail(ErrorKind::Argument, "custom factor needs an evaluator");
  FactorMetricSpec s;
  s.kind_ = Kind::Custom;
  s.dim_ = dim;
  s.custom_ = std::move(f2);
  s.custom_riemannian_ = riemannian;
  s.label_ = std::move(label);
  return s;
}

bool FactorMetricSpec::is_riemannian() const noexcept {
  switch (kind_) {
    case Kind::Euclidean:
    case Kind::RiemannianQuadratic: return true;
    case Kind::Randers: return std::all_of(b_.begin(), b_.end(), [](double e) { return e == 0.0; });
    case Kind::Custom: return custom_riemannian_;
  }
  return false;
}

void FactorMetricSpec::check_positive_definite(std::span<const double> base) const {
  if (a_.empty()) return;
  const auto n = a_.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a_[i][j].eval(base);
  }
  // Leading principal minors are the products of the elimination pivots.
  for (std::size_t k = 0; k < n; ++k) {
    if (!(m[k][k] > 0.0)) {
      fail(ErrorKind::Domain, "quadratic factor metric is not positive definite at the evaluated point");
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
}

double FactorMetricSpec::covector_norm(std::span<const double> base) const {
  if (kind_ != Kind::Randers) return 0.0;
  const auto n = static_cast<std::size_t>(dim_);
  Matrix<double> a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = a_.empty() ? (i == j ? 1.0 : 0.0) : a_[i][j].eval(base);
  }
  const auto inv = invert(a);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) s += inv[i][j] * b_[i] * b_[j];
  }
  return std::sqrt(std::max(s, 0.0));
}

Jet FactorMetricSpec::quadratic_form(std::span<const Jet> base, std::span<const Jet> fiber) const {
  Jet q(0.0);
  if (a_.empty()) {
    for (const auto& y : fiber) q += y * y;
    return q;
  }
  std::vector<double> at(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) at[k] = base[k].value();
  check_positive_definite(at);
  for (std::size_t i = 0; i < a_.size(); ++i) {
    for (std::size_t j = 0; j < a_.size(); ++j) q += a_[i][j].eval(base) * fiber[i] * fiber[j];
  }
  return q;
}

Jet FactorMetricSpec::eval_F2(std::span<const Jet> base, std::span<const Jet> fiber) const {
  if (static_cast<int>(base.size()) != dim_ || static_cast<int>(fiber.size()) != dim_) {
    fail(ErrorKind::Argument, "factor evaluated with wrong coordinate count");
  }
  switch (kind_) {
    case Kind::Euclidean:
    case Kind::RiemannianQuadratic: return quadratic_form(base, fiber);
    case Kind::Randers: {
      std::vector<double> at(base.size());
      for (std::size_t k = 0; k < base.size(); ++k) at[k] = base[k].value();
      if (!(covector_norm(at) < 1.0)) {
        fail(ErrorKind::Semantic, "randers covector norm reached 1 at the evaluated point");
      }
      const Jet alpha = sqrt(quadratic_form(base, fiber));
      Jet beta(0.0);
      for (std::size_t i = 0; i < b_.size(); ++i) beta += b_[i] * fiber[i];
      const Jet f = alpha + beta;
      return f * f;
    }
    case Kind::Custom: return custom_(base, fiber);
  }
  return Jet(0.0);
}

WarpSpec WarpSpec::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorKind::Semantic, "constant warp must be positive");
  WarpSpec w;
  w.kind_ = Kind::Constant;
  w.c_ = c;
  return w;
}

WarpSpec WarpSpec::poly_quadratic(std::vector<double> a) {
  for (double e : a) {
    if (!(e >= 0.0) || !std::isfinite(e)) fail(ErrorKind::Semantic, "poly_quadratic coefficients must be >= 0");
  }
  WarpSpec w;
  w.kind_ = Kind::PolyQuadratic;
  w.a_ = std::move(a);
  return w;
}

WarpSpec WarpSpec::exponential(double k, int axis) {
  if (!std::isfinite(k)) fail(ErrorKind::Semantic, "exponential warp rate must be finite");
  if (axis < 0) fail(ErrorKind::Semantic, "exponential warp axis must be >= 0");
  WarpSpec w;
  w.kind_ = Kind::Exponential;
  w.k_ = k;
  w.axis_ = axis;
  return w;
}

bool WarpSpec::is_constant() const noexcept {
  switch (kind_) {
    case Kind::Constant: return true;
    case Kind::PolyQuadratic: return std::all_of(a_.begin(), a_.end(), [](double e) { return e == 0.0; });
    case Kind::Exponential: return k_ == 0.0;
  }
  return true;
}

void WarpSpec::check_dim(int dim) const {
  if (kind_ == Kind::PolyQuadratic && static_cast<int>(a_.size()) > dim) {
    fail(ErrorKind::Semantic, "poly_quadratic warp has more coefficients than base coordinates");
  }
  if (kind_ == Kind::Exponential && axis_ >= dim) fail(ErrorKind::Semantic, "exponential warp axis out of range");
}

Jet WarpSpec::f_squared(std::span<const Jet> base) const {
  switch (kind_) {
    case Kind::Constant: return Jet(c_ * c_);
    case Kind::PolyQuadratic: {
      Jet s(1.0);
      for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i] != 0.0) s += a_[i] * base[i] * base[i];
      }
      return s;
    }
    case Kind::Exponential: return exp(2.0 * k_ * base[static_cast<std::size_t>(axis_)]);
  }
  return Jet(1.0);
}

std::string ProductConfig::classification() const {
  const bool c1 = f1.is_constant();
  const bool c2 = f2.is_constant();
  if (c1 && c2) return "product";
  if (c1 || c2) return "warped";
  return "doubly-warped";
}

void ProductConfig::validate() const {
  if (n1() < 1 || n2() < 1) fail(ErrorKind::Semantic, "both factors need dimension >= 1");
  if (n() > kMaxJetVars / 2) {
    fail(ErrorKind::Capability, "n1 + n2 must be at most " + std::to_string(kMaxJetVars / 2));
  }
  f1.check_dim(n1());
  f2.check_dim(n2());
}

Jet ProductConfig::w1(std::span<const Jet> flat) const {
  return f1.f_squared(flat.subspan(0, static_cast<std::size_t>(n1())));
}

Jet ProductConfig::w2(std::span<const Jet> flat) const {
  return f2.f_squared(flat.subspan(static_cast<std::size_t>(n1()), static_cast<std::size_t>(n2())));
}

Jet ProductConfig::factor1_F2(std::span<const Jet> flat) const {
  const auto a = static_cast<std::size_t>(n1());
  const auto nn = static_cast<std::size_t>(n());
  return factor1.eval_F2(flat.subspan(0, a), flat.subspan(nn, a));
}

Jet ProductConfig::factor2_F2(std::span<const Jet> flat) const {
  const auto a = static_cast<std::size_t>(n1());
  const auto b = static_cast<std::size_t>(n2());
  const auto nn = static_cast<std::size_t>(n());
  return factor2.eval_F2(flat.subspan(a, b), flat.subspan(nn + a, b));
}

Jet ProductConfig::eval_F2(std::span<const Jet> flat) const {
  if (static_cast<int>(flat.size()) != 2 * n()) fail(ErrorKind::Argument, "product evaluated with wrong coordinate count");
  return w2(flat) * factor1_F2(flat) + w1(flat) * factor2_F2(flat);
}

namespace {

Polynomial poly(std::initializer_list<Polynomial::Term> terms) { return Polynomial{terms}; }

std::map<std::string, ProductConfig> build_fixtures() {
  std::map<std::string, ProductConfig> out;
  out["FIX-1D"] = {"FIX-1D", FactorMetricSpec::euclidean(1), FactorMetricSpec::euclidean(1),
                   WarpSpec::poly_quadratic({1.0}), WarpSpec::poly_quadratic({1.0})};
  out["FIX-E"] = {"FIX-E", FactorMetricSpec::euclidean(2), FactorMetricSpec::euclidean(2),
                  WarpSpec::poly_quadratic({1.0, 0.0}), WarpSpec::poly_quadratic({1.0, 0.0})};
  out["FIX-P"] = {"FIX-P", FactorMetricSpec::euclidean(2), FactorMetricSpec::euclidean(2), WarpSpec::constant(1.0),
                  WarpSpec::constant(1.0)};
  out["FIX-R"] = {"FIX-R", FactorMetricSpec::euclidean(2),
                  FactorMetricSpec::randers(FactorMetricSpec::euclidean(2), {0.3, 0.0}),
                  WarpSpec::poly_quadratic({1.0, 0.0}), WarpSpec::poly_quadratic({1.0, 0.0})};
  // Non-flat Riemannian factors with proper warps.
  auto a1 = FactorMetricSpec::riemannian_quadratic(
      {{poly({{1.0, {}}, {0.5, {2, 0}}}), poly({{0.2, {0, 1}}})},
       {poly({{0.2, {0, 1}}}), poly({{1.0, {}}, {0.3, {0, 2}}})}});
  auto a2 = FactorMetricSpec::riemannian_quadratic(
      {{poly({{1.0, {}}, {0.4, {0, 2}}}), Polynomial::constant(0.0)},
       {Polynomial::constant(0.0), poly({{1.0, {}}, {0.2, {2, 0}}})}});
  out["FIX-Q"] = {"FIX-Q", a1, a2, WarpSpec::poly_quadratic({0.5, 0.3}), WarpSpec::poly_quadratic({0.4, 0.6})};
  return out;
}

const std::map<std::string, ProductConfig>& fixtures() {
  static const auto table = build_fixtures();
  return table;
}

}  // namespace

std::vector<std::string> fixture_names() {
  return {"FIX-1D", "FIX-E", "FIX-P", "FIX-R", "FIX-Q"};
}

std::optional<ProductConfig> find_fixture(const std::string& name) {
  const auto& t = fixtures();
  const auto it = t.find(name);
  if (it == t.end()) return std::nullopt;
  return it->second;
}

ProductConfig fixture(const std::string& name) {
  auto f = find_fixture(name);
  if (!f) fail(ErrorKind::Argument, "unknown fixture '" + name + "'");
  return *f;
}

}  // namespace dwf
