#pragma once

// Point evaluation context for a doubly warped product: the product
// geometry plus both factor geometries and the warp jets, all expanded over
// the flat coordinates [x, u, y, v].

#include <memory>
#include <optional>

#include "dwf/config.hpp"
#include "dwf/coords.hpp"
#include "dwf/local_geometry.hpp"

namespace dwf {

// Enough for third fiber derivatives of the spray.
inline constexpr int kDefaultGeometryOrder = 5;

class ProductGeometry {
 public:
  ProductGeometry(ProductConfig cfg, TangentSample p, int order = kDefaultGeometryOrder);

  const ProductConfig& config() const noexcept { return cfg_; }
  const TangentSample& sample() const noexcept { return p_; }
  int order() const noexcept { return order_; }
  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  int n() const noexcept { return n1_ + n2_; }
  bool latin(int a) const noexcept { return a < n1_; }

  const LocalGeometry& product() const { return product_; }
  // Factor 1 in local indices i (combined index a = i).
  const LocalGeometry& factor1() const;
  // Factor 2 in local indices alpha (combined index a = n1 + alpha).
  const LocalGeometry& factor2() const;

  const Jet& w1() const noexcept { return w1_; }  // f1^2(x)
  const Jet& w2() const noexcept { return w2_; }  // f2^2(u)
  double dw1(int i) const { return w1_.d(i); }          // d f1^2 / dx^i
  double dw2(int alpha) const { return w2_.d(n1_ + alpha); }  // d f2^2 / du^alpha
  const Jet& F1sq() const noexcept { return f1sq_; }
  const Jet& F2sq() const noexcept { return f2sq_; }

 private:
  ProductConfig cfg_;
  TangentSample p_;
  int order_;
  int n1_;
  int n2_;
  std::vector<Jet> coords_;
  Jet w1_, w2_, f1sq_, f2sq_;
  LocalGeometry product_;
  mutable std::optional<LocalGeometry> factor1_, factor2_;
};

}  // namespace dwf
