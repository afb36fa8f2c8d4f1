#include "dwf/jet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>

#include "dwf/error.hpp"

namespace dwf {
namespace {

constexpr int kKeyBits = 5;

std::uint64_t encode(std::span<const std::uint8_t> exps) {
  std::uint64_t key = 0;
  for (std::size_t v = 0; v < exps.size(); ++v) key |= static_cast<std::uint64_t>(exps[v]) << (kKeyBits * v);
  return key;
}

// Appends every exponent vector of total degree `remaining` over vars [var, n)
// in lexicographic order (first variable varies slowest, highest power first).
void enumerate_degree(int n, int var, int remaining, std::vector<std::uint8_t>& current,
                      std::vector<std::uint8_t>& out) {
  if (var == n - 1) {
    current[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(remaining);
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
    enumerate_degree(n, var + 1, remaining - e, current, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Capability: return "capability";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Semantic: return "semantic";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Argument: return "argument";
  }
  return "unknown";
}

JetLayout::JetLayout(int nvars) : nvars_(nvars) {
  const auto n = static_cast<std::size_t>(nvars);
  std::vector<std::uint8_t> current(n, 0);
  degree_end_.assign(kMaxJetOrder + 1, 0);
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    enumerate_degree(nvars, 0, d, current, exponents_);
    degree_end_[static_cast<std::size_t>(d)] = exponents_.size() / n;
  }
  const std::size_t count = exponents_.size() / n;
  degree_.resize(count);
  weight_.resize(count);
  std::vector<std::uint64_t> keys(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto e = exponents(i);
    int deg = 0;
    double w = 1.0;
    for (auto p : e) {
      deg += p;
      for (int k = 2; k <= p; ++k) w *= k;
    }
    degree_[i] = deg;
    weight_[i] = w;
    keys[i] = encode(e);
  }
  key_index_.resize(count);
  std::iota(key_index_.begin(), key_index_.end(), 0U);
  std::sort(key_index_.begin(), key_index_.end(), [&](auto a, auto b) { return keys[a] < keys[b]; });
  keys_.resize(count);
  for (std::size_t i = 0; i < count; ++i) keys_[i] = keys[key_index_[i]];

  // Product terms bucketed by output degree.
  std::array<std::vector<ProductTerm>, kMaxJetOrder + 1> buckets;
  std::vector<std::uint8_t> sum(n);
  for (std::size_t i = 0; i < count; ++i) {
    const auto budget = kMaxJetOrder - degree_[i];
    const auto jmax = size(budget);
    const auto ei = exponents(i);
    for (std::size_t j = 0; j < jmax; ++j) {
      const auto ej = exponents(j);
      for (std::size_t v = 0; v < n; ++v) sum[v] = static_cast<std::uint8_t>(ei[v] + ej[v]);
      const auto out = index_of(sum);
      buckets[static_cast<std::size_t>(degree_[i] + degree_[j])].push_back(
          {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(out)});
    }
  }
  product_end_.assign(kMaxJetOrder + 1, 0);
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    auto& b = buckets[static_cast<std::size_t>(d)];
    products_.insert(products_.end(), b.begin(), b.end());
    product_end_[static_cast<std::size_t>(d)] = products_.size();
    std::vector<ProductTerm>().swap(b);
  }

  const auto targets = size(kMaxJetOrder - 1);
  shift_.resize(n * targets);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t t = 0; t < targets; ++t) {
      const auto e = exponents(t);
      std::copy(e.begin(), e.end(), sum.begin());
      sum[v] = static_cast<std::uint8_t>(sum[v] + 1);
      shift_[v * targets + t] = static_cast<std::uint32_t>(index_of(sum));
    }
  }
}

std::shared_ptr<const JetLayout> JetLayout::get(int nvars) {
  if (nvars < 1 || nvars > kMaxJetVars) {
    fail(ErrorKind::Capability, "jet layouts support 1.." + std::to_string(kMaxJetVars) + " variables, got " +
                                    std::to_string(nvars));
  }
  static std::mutex mutex;
  static std::array<std::shared_ptr<const JetLayout>, kMaxJetVars + 1> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[static_cast<std::size_t>(nvars)];
  if (!slot) slot = std::shared_ptr<const JetLayout>(new JetLayout(nvars));
  return slot;
}

std::size_t JetLayout::index_of(std::span<const std::uint8_t> exps) const {
  int deg = 0;
  for (auto e : exps) deg += e;
  if (deg > kMaxJetOrder || exps.size() != static_cast<std::size_t>(nvars_)) return size(kMaxJetOrder);
  const auto key = encode(exps);
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return size(kMaxJetOrder);
  return key_index_[static_cast<std::size_t>(it - keys_.begin())];
}

Jet Jet::constant(std::shared_ptr<const JetLayout> layout, int order, double value) {
  if (order < 0 || order > kMaxJetOrder) {
    fail(ErrorKind::Capability, "jet order must be within 0.." + std::to_string(kMaxJetOrder));
  }
  Jet j;
  j.coeffs_.assign(layout->size(order), 0.0);
  j.coeffs_[0] = value;
  j.layout_ = std::move(layout);
  j.order_ = order;
  return j;
}

Jet Jet::variable(std::shared_ptr<const JetLayout> layout, int order, int var, double value) {
  if (var < 0 || var >= layout->nvars()) fail(ErrorKind::Argument, "jet variable index out of range");
  Jet j = constant(std::move(layout), order, value);
  if (order >= 1) j.coeffs_[static_cast<std::size_t>(var) + 1] = 1.0;
  return j;
}

double Jet::partial(std::span<const int> exponents) const {
  int deg = 0;
  for (auto e : exponents) {
    if (e < 0) fail(ErrorKind::Argument, "negative exponent in partial()");
    deg += e;
  }
  if (!layout_) return deg == 0 ? coeffs_[0] : 0.0;
  if (exponents.size() != static_cast<std::size_t>(layout_->nvars())) {
    fail(ErrorKind::Argument, "partial(): exponent vector length does not match the jet's seed count");
  }
  if (deg > order_) {
    fail(ErrorKind::Capability,
         "partial of order " + std::to_string(deg) + " requested from a jet of order " + std::to_string(order_));
  }
  std::vector<std::uint8_t> e(exponents.begin(), exponents.end());
  const auto idx = layout_->index_of(e);
  return coeffs_[idx] * layout_->factorial_weight(idx);
}

double Jet::partial_by(std::initializer_list<int> vars) const {
  if (!layout_) return vars.size() == 0 ? coeffs_[0] : 0.0;
  std::vector<int> e(static_cast<std::size_t>(layout_->nvars()), 0);
  for (int v : vars) {
    if (v < 0 || v >= layout_->nvars()) fail(ErrorKind::Argument, "partial_by(): variable out of range");
    ++e[static_cast<std::size_t>(v)];
  }
  return partial(e);
}

double Jet::d(int var) const { return partial_by({var}); }
double Jet::dd(int var1, int var2) const { return partial_by({var1, var2}); }

Jet Jet::derivative(int var) const {
  if (!layout_) return Jet(0.0);
  if (var < 0 || var >= layout_->nvars()) fail(ErrorKind::Argument, "derivative(): variable out of range");
  if (order_ == 0) fail(ErrorKind::Capability, "cannot differentiate an order-0 jet");
  Jet out;
  out.layout_ = layout_;
  out.order_ = order_ - 1;
  const auto n = layout_->size(out.order_);
  out.coeffs_.resize(n);
  const auto src = layout_->shift(var);
  for (std::size_t t = 0; t < n; ++t) {
    out.coeffs_[t] = (layout_->exponents(t)[static_cast<std::size_t>(var)] + 1) * coeffs_[src[t]];
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (!layout_ || order >= order_) return *this;
  if (order < 0) fail(ErrorKind::Argument, "negative truncation order");
  Jet out = *this;
  out.order_ = order;
  out.coeffs_.resize(layout_->size(order));
  return out;
}

namespace {

void check_compatible(const std::shared_ptr<const JetLayout>& a, const std::shared_ptr<const JetLayout>& b) {
  if (a && b && a != b) fail(ErrorKind::Argument, "jet operands are seeded on different variable sets");
}

}  // namespace

Jet& Jet::operator+=(const Jet& rhs) {
  check_compatible(layout_, rhs.layout_);
  if (!rhs.layout_) {
    coeffs_[0] += rhs.coeffs_[0];
    return *this;
  }
  if (!layout_) {
    const double c = coeffs_[0];
    *this = rhs;
    coeffs_[0] += c;
    return *this;
  }
  if (rhs.order_ < order_) *this = truncated(rhs.order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) { return *this += -rhs; }

Jet& Jet::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Jet operator-(const Jet& a) {
  Jet out = a;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_compatible(a.layout_, b.layout_);
  if (!a.layout_) {
    Jet out = b;
    return out *= a.coeffs_[0];
  }
  if (!b.layout_) {
    Jet out = a;
    return out *= b.coeffs_[0];
  }
  Jet out;
  out.layout_ = a.layout_;
  out.order_ = std::min(a.order_, b.order_);
  out.coeffs_.assign(a.layout_->size(out.order_), 0.0);
  const double* pa = a.coeffs_.data();
  const double* pb = b.coeffs_.data();
  double* po = out.coeffs_.data();
  for (const auto& t : a.layout_->products(out.order_)) po[t.out] += pa[t.lhs] * pb[t.rhs];
  return out;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet Jet::compose(const Jet& a, std::span<const double> taylor) {
  Jet abar = a;
  abar.coeffs_[0] = 0.0;
  Jet r = constant(a.layout_, a.order_, taylor.back());
  for (std::size_t k = taylor.size() - 1; k-- > 0;) {
    r = r * abar;
    r.coeffs_[0] += taylor[k];
  }
  return r;
}

Jet reciprocal(const Jet& a) {
  const double a0 = a.value();
  if (a0 == 0.0) fail(ErrorKind::Domain, "division by a jet with zero value");
  if (!a.layout_) return Jet(1.0 / a0);
  std::vector<double> t(static_cast<std::size_t>(a.order_) + 1);
  t[0] = 1.0 / a0;
  for (std::size_t k = 1; k < t.size(); ++k) t[k] = -t[k - 1] / a0;
  return Jet::compose(a, t);
}

Jet sqrt(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) fail(ErrorKind::Domain, "sqrt of a jet with non-positive value " + std::to_string(a0));
  if (!a.layout_) return Jet(std::sqrt(a0));
  std::vector<double> t(static_cast<std::size_t>(a.order_) + 1);
  t[0] = std::sqrt(a0);
  for (std::size_t k = 1; k < t.size(); ++k) {
    t[k] = t[k - 1] * (0.5 - static_cast<double>(k - 1)) / (static_cast<double>(k) * a0);
  }
  return Jet::compose(a, t);
}

Jet exp(const Jet& a) {
  const double e0 = std::exp(a.value());
  if (!a.layout_) return Jet(e0);
  std::vector<double> t(static_cast<std::size_t>(a.order_) + 1);
  t[0] = e0;
  for (std::size_t k = 1; k < t.size(); ++k) t[k] = t[k - 1] / static_cast<double>(k);
  return Jet::compose(a, t);
}

Jet log(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) fail(ErrorKind::Domain, "log of a jet with non-positive value");
  if (!a.layout_) return Jet(std::log(a0));
  std::vector<double> t(static_cast<std::size_t>(a.order_) + 1);
  t[0] = std::log(a0);
  double p = 1.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    p /= a0;
    t[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / static_cast<double>(k);
  }
  return Jet::compose(a, t);
}

Jet pow(const Jet& a, int n) {
  if (n < 0) return reciprocal(pow(a, -n));
  Jet result(1.0);
  Jet base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

}  // namespace dwf
