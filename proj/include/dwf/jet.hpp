#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Jet holds all Taylor coefficients of a scalar function up to a total
// order over a fixed set of nvars seed variables. Monomials are enumerated in
// graded order, so the coefficients of the order-d truncation form a prefix of
// the coefficient vector and indices agree across orders. partial() returns
// true derivatives; the internal storage is Taylor-scaled (divided by alpha!).

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

namespace dwf {

inline constexpr int kMaxJetOrder = 6;
inline constexpr int kMaxJetVars = 12;

class JetLayout {
 public:
  struct ProductTerm {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };

  // Shared, immutable layout for nvars variables up to kMaxJetOrder.
  static std::shared_ptr<const JetLayout> get(int nvars);

  int nvars() const noexcept { return nvars_; }
  std::size_t size(int order) const { return degree_end_[static_cast<std::size_t>(order)]; }
  int degree(std::size_t idx) const { return degree_[idx]; }
  std::span<const std::uint8_t> exponents(std::size_t idx) const {
    return {exponents_.data() + idx * static_cast<std::size_t>(nvars_), static_cast<std::size_t>(nvars_)};
  }
  // alpha! for the monomial at idx.
  double factorial_weight(std::size_t idx) const { return weight_[idx]; }
  // Returns size(kMaxJetOrder) when the exponent vector is out of range.
  std::size_t index_of(std::span<const std::uint8_t> exps) const;

  // Product terms whose output degree is <= order.
  std::span<const ProductTerm> products(int order) const {
    return {products_.data(), product_end_[static_cast<std::size_t>(order)]};
  }
  // src index of (target + e_var) for every target of degree < kMaxJetOrder.
  std::span<const std::uint32_t> shift(int var) const {
    return {shift_.data() + static_cast<std::size_t>(var) * size(kMaxJetOrder - 1), size(kMaxJetOrder - 1)};
  }

 private:
  explicit JetLayout(int nvars);

  int nvars_;
  std::vector<std::uint8_t> exponents_;
  std::vector<int> degree_;
  std::vector<double> weight_;
  std::vector<std::size_t> degree_end_;
  std::vector<std::uint64_t> keys_;  // sorted copy for lookup
  std::vector<std::uint32_t> key_index_;
  std::vector<ProductTerm> products_;
  std::vector<std::size_t> product_end_;
  std::vector<std::uint32_t> shift_;
};

class Jet {
 public:
  // Layout-free jets are exact constants (valid to any order).
  Jet() : coeffs_{0.0} {}
  Jet(double value) : coeffs_{value} {}  // NOLINT(google-explicit-constructor)

  static Jet constant(std::shared_ptr<const JetLayout> layout, int order, double value);
  static Jet variable(std::shared_ptr<const JetLayout> layout, int order, int var, double value);

  double value() const noexcept { return coeffs_[0]; }
  bool is_constant() const noexcept { return layout_ == nullptr; }
  // kMaxJetOrder for layout-free constants.
  int order() const noexcept { return layout_ ? order_ : kMaxJetOrder; }
  const std::shared_ptr<const JetLayout>& layout() const noexcept { return layout_; }
  int nvars() const noexcept { return layout_ ? layout_->nvars() : 0; }

  // True partial derivative for the exponent vector (length nvars).
  double partial(std::span<const int> exponents) const;
  // Partial derivative by a list of variable ids (repetition = higher order).
  double partial_by(std::initializer_list<int> vars) const;
  double d(int var) const;
  double dd(int var1, int var2) const;

  // Taylor-scaled coefficients (read only).
  std::span<const double> coefficients() const noexcept { return coeffs_; }

  Jet derivative(int var) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator*=(double s);

  friend Jet operator-(const Jet& a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  friend Jet reciprocal(const Jet& a);
  friend Jet sqrt(const Jet& a);
  friend Jet exp(const Jet& a);
  friend Jet log(const Jet& a);
  friend Jet pow(const Jet& a, int n);

 private:
  // Evaluates sum_k taylor[k] * (a - a0)^k truncated at a's order.
  static Jet compose(const Jet& a, std::span<const double> taylor);

  std::shared_ptr<const JetLayout> layout_;
  int order_ = 0;
  std::vector<double> coeffs_;
};

inline double value(const Jet& j) noexcept { return j.value(); }
inline double value(double x) noexcept { return x; }

}  // namespace dwf
