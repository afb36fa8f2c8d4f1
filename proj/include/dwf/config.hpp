#pragma once

// Declarative factor metrics, warp functions and the doubly warped product.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dwf/jet.hpp"

namespace dwf {

// Sum of coeff * prod x_k^e_k over the base coordinates of one factor.
struct Polynomial {
  struct Term {
    double coeff = 0.0;
    std::vector<int> exponents;  // one entry per base coordinate (may be shorter)
  };
  std::vector<Term> terms;

  static Polynomial constant(double c);
  Jet eval(std::span<const Jet> x) const;
  double eval(std::span<const double> x) const;
  bool is_constant() const;
};

using CustomF2Fn = std::function<Jet(std::span<const Jet> base, std::span<const Jet> fiber)>;

class FactorMetricSpec {
 public:
  enum class Kind { Euclidean, RiemannianQuadratic, Randers, Custom };

  static FactorMetricSpec euclidean(int dim);
  // a: dim x dim symmetric matrix of polynomial entries (symmetry enforced).
  static FactorMetricSpec riemannian_quadratic(std::vector<std::vector<Polynomial>> a);
  // Base must be Euclidean or RiemannianQuadratic. Throws Semantic if the
  // base is constant and |b| >= 1.
  static FactorMetricSpec randers(const FactorMetricSpec& base, std::vector<double> b);
  static FactorMetricSpec custom(int dim, CustomF2Fn f2, bool riemannian, std::string label);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  bool is_riemannian() const noexcept;
  const std::vector<std::vector<Polynomial>>& quadratic() const noexcept { return a_; }
  const std::vector<double>& covector() const noexcept { return b_; }
  const std::string& label() const noexcept { return label_; }

  // F^2 at (base, fiber). Domain/Semantic errors for a non-positive-definite
  // quadratic part, fiber in the null cone, or |b| >= 1 at this point.
  Jet eval_F2(std::span<const Jet> base, std::span<const Jet> fiber) const;

  // Riemannian norm of b at the point (Randers only).
  double covector_norm(std::span<const double> base) const;

 private:
  Kind kind_ = Kind::Euclidean;
  int dim_ = 0;
  std::vector<std::vector<Polynomial>> a_;  // empty for Euclidean
  std::vector<double> b_;
  CustomF2Fn custom_;
  bool custom_riemannian_ = false;
  std::string label_;

  Jet quadratic_form(std::span<const Jet> base, std::span<const Jet> fiber) const;
  void check_positive_definite(std::span<const double> base) const;
};

class WarpSpec {
 public:
  enum class Kind { Constant, PolyQuadratic, Exponential };

  static WarpSpec constant(double c);
  // f^2 = 1 + sum a_i x_i^2, a_i >= 0.
  static WarpSpec poly_quadratic(std::vector<double> a);
  // f^2 = exp(2 k x_axis).
  static WarpSpec exponential(double k, int axis);

  Kind kind() const noexcept { return kind_; }
  bool is_constant() const noexcept;
  double c() const noexcept { return c_; }
  const std::vector<double>& coefficients() const noexcept { return a_; }
  double rate() const noexcept { return k_; }
  int axis() const noexcept { return axis_; }

  // f^2 over the base coordinates of the factor the warp lives on.
  Jet f_squared(std::span<const Jet> base) const;
  // Throws Argument if the warp refers to coordinates beyond dim.
  void check_dim(int dim) const;

 private:
  Kind kind_ = Kind::Constant;
  double c_ = 1.0;
  std::vector<double> a_;
  double k_ = 0.0;
  int axis_ = 0;
};

struct ProductConfig {
  std::string id;
  FactorMetricSpec factor1;
  FactorMetricSpec factor2;
  WarpSpec f1;  // over x (factor-1 base)
  WarpSpec f2;  // over u (factor-2 base)

  int n1() const noexcept { return factor1.dim(); }
  int n2() const noexcept { return factor2.dim(); }
  int n() const noexcept { return n1() + n2(); }
  // "product", "warped" or "doubly-warped".
  std::string classification() const;
  void validate() const;

  // Jets of f1^2(x) and f2^2(u) from the flat coordinate jets [x,u,y,v].
  Jet w1(std::span<const Jet> flat) const;
  Jet w2(std::span<const Jet> flat) const;
  Jet factor1_F2(std::span<const Jet> flat) const;
  Jet factor2_F2(std::span<const Jet> flat) const;
  // F^2 = f2^2 F1^2 + f1^2 F2^2.
  Jet eval_F2(std::span<const Jet> flat) const;
};

std::vector<std::string> fixture_names();
std::optional<ProductConfig> find_fixture(const std::string& name);
ProductConfig fixture(const std::string& name);  // throws Argument if unknown

}  // namespace dwf
