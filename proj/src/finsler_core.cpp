#include "dwf/finsler_core.hpp"

#include "dwf/error.hpp"

namespace dwf {

BlockTensor to_block(const JetTensor& t, int n1, std::vector<Variance> variance) {
  if (static_cast<int>(variance.size()) != t.rank()) fail(ErrorKind::Argument, "variance list does not match rank");
  BlockTensor out(n1, t.dim() - n1, std::move(variance));
  auto& d = out.data();
  for (std::size_t p = 0; p < d.size(); ++p) {
    const auto idx = out.unflatten(p);
    switch (idx.size()) {
      case 1: d[p] = t.val(idx[0]); break;
      case 2: d[p] = t.val(idx[0], idx[1]); break;
      case 3: d[p] = t.val(idx[0], idx[1], idx[2]); break;
      default: d[p] = t.val(idx[0], idx[1], idx[2], idx[3]); break;
    }
  }
  return out;
}

SeededJet eval_F2(const ProductConfig& cfg, const TangentSample& p, std::span<const CoordIndex> seeds, int order) {
  cfg.validate();
  if (p.n1() != cfg.n1() || p.n2() != cfg.n2()) fail(ErrorKind::Argument, "sample dimensions do not match the configuration");
  const ScalarField f = [&cfg](std::span<const Jet> flat) { return cfg.eval_F2(flat); };
  return jet_lift(f, p, seeds, order);
}

MetricPair fundamental_tensor(const ProductGeometry& pg) {
  const auto& P = pg.product();
  return {to_block(P.g(), pg.n1(), {Variance::Lower, Variance::Lower}),
          to_block(P.ginv(), pg.n1(), {Variance::Upper, Variance::Upper})};
}

BlockTensor angular_metric(const ProductGeometry& pg) {
  const auto& P = pg.product();
  const int n = pg.n();
  const auto& g = P.g();
  std::vector<double> ylow(static_cast<std::size_t>(n), 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) ylow[static_cast<std::size_t>(a)] += g.val(a, b) * P.fiber(b).value();
  }
  const double F2 = P.F2().value();
  BlockTensor h(pg.n1(), pg.n2(), {Variance::Lower, Variance::Lower});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      h(a, b) = g.val(a, b) - ylow[static_cast<std::size_t>(a)] * ylow[static_cast<std::size_t>(b)] / F2;
    }
  }
  return h;
}

BlockTensor cartan_tensor(const ProductGeometry& pg) {
  return to_block(pg.product().cartan(), pg.n1(), {Variance::Lower, Variance::Lower, Variance::Lower});
}

BlockTensor mean_cartan(const ProductGeometry& pg) {
  return to_block(pg.product().mean_cartan(), pg.n1(), {Variance::Lower});
}

BlockTensor matsumoto_torsion(const ProductGeometry& pg) {
  const int n = pg.n();
  const auto C = cartan_tensor(pg);
  const auto I = mean_cartan(pg);
  const auto h = angular_metric(pg);
  const double k = 1.0 / (n + 1.0);
  BlockTensor M(pg.n1(), pg.n2(), {Variance::Lower, Variance::Lower, Variance::Lower});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        M(a, b, c) = C(a, b, c) - k * (I(a) * h(b, c) + I(b) * h(a, c) + I(c) * h(a, b));
      }
    }
  }
  return M;
}

MetricPair fundamental_tensor(const ProductConfig& cfg, const TangentSample& p) {
  return fundamental_tensor(ProductGeometry(cfg, p, 2));
}
BlockTensor angular_metric(const ProductConfig& cfg, const TangentSample& p) {
  return angular_metric(ProductGeometry(cfg, p, 2));
}
BlockTensor cartan_tensor(const ProductConfig& cfg, const TangentSample& p) {
  return cartan_tensor(ProductGeometry(cfg, p, 3));
}
BlockTensor mean_cartan(const ProductConfig& cfg, const TangentSample& p) {
  return mean_cartan(ProductGeometry(cfg, p, 3));
}
BlockTensor matsumoto_torsion(const ProductConfig& cfg, const TangentSample& p) {
  return matsumoto_torsion(ProductGeometry(cfg, p, 3));
}

}  // namespace dwf
