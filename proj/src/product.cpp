#include "dwf/product.hpp"

#include <numeric>

#include "dwf/error.hpp"
#include "dwf/lift.hpp"

namespace dwf {

namespace {

std::vector<int> range(int begin, int count) {
  std::vector<int> r(static_cast<std::size_t>(count));
  std::iota(r.begin(), r.end(), begin);
  return r;
}

std::vector<Jet> checked_coords(const ProductConfig& cfg, const TangentSample& p, int order) {
  cfg.validate();
  p.validate();
  if (p.n1() != cfg.n1() || p.n2() != cfg.n2()) {
    fail(ErrorKind::Argument, "sample dimensions do not match the configuration");
  }
  if (order < 2 || order > kMaxJetOrder) fail(ErrorKind::Capability, "geometry order must be within 2..6");
  return seed_all(p.flat(), order);
}

LocalGeometry make_product(const ProductConfig& cfg, const TangentSample& p, const Jet& w1, const Jet& w2,
                           const Jet& f1sq, const Jet& f2sq) {
  const int n = cfg.n();
  std::vector<double> fiber(p.y);
  fiber.insert(fiber.end(), p.v.begin(), p.v.end());
  return LocalGeometry(w2 * f1sq + w1 * f2sq, range(0, n), range(n, n), std::move(fiber));
}

}  // namespace

ProductGeometry::ProductGeometry(ProductConfig cfg, TangentSample p, int order)
    : cfg_(std::move(cfg)),
      p_(std::move(p)),
      order_(order),
      n1_(cfg_.n1()),
      n2_(cfg_.n2()),
      coords_(checked_coords(cfg_, p_, order)),
      w1_(cfg_.w1(coords_)),
      w2_(cfg_.w2(coords_)),
      f1sq_(cfg_.factor1_F2(coords_)),
      f2sq_(cfg_.factor2_F2(coords_)),
      product_(make_product(cfg_, p_, w1_, w2_, f1sq_, f2sq_)) {
  if (!(w1_.value() > 0.0) || !(w2_.value() > 0.0)) fail(ErrorKind::Domain, "warp function squared must be positive");
}

const LocalGeometry& ProductGeometry::factor1() const {
  if (!factor1_) factor1_.emplace(f1sq_, range(0, n1_), range(n(), n1_), p_.y);
  return *factor1_;
}

const LocalGeometry& ProductGeometry::factor2() const {
  if (!factor2_) factor2_.emplace(f2sq_, range(n1_, n2_), range(n() + n1_, n2_), p_.v);
  return *factor2_;
}

}  // namespace dwf
