#include "dwf/curvature.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "dwf/error.hpp"
#include "dwf/finsler_core.hpp"
#include "factor_data.hpp"

namespace dwf {

using detail::FactorData;
using detail::kron;

namespace {

const std::vector<Variance> kUpLow{Variance::Upper, Variance::Lower};
const std::vector<Variance> kR4{Variance::Lower, Variance::Upper, Variance::Lower, Variance::Lower};
const std::vector<Variance> kB4{Variance::Upper, Variance::Lower, Variance::Lower, Variance::Lower};

BlockTensor map_to_block(const std::vector<std::vector<double>>& m, int n1, int n2) {
  BlockTensor t(n1, n2, kUpLow);
  for (int a = 0; a < n1 + n2; ++a) {
    for (int b = 0; b < n1 + n2; ++b) t(a, b) = m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  return t;
}

// Tracks |generic - closed| for one named block.
struct Tracker {
  BlockCheck check;
  const JetTensor& B;

  void add(int a, int b, int c, int d, double closed) {
    double diff = std::abs(B.val(a, b, c, d) - closed);
    if (std::isnan(diff)) diff = std::numeric_limits<double>::infinity();
    if (check.witness.empty() || diff > check.max_abs) {
      check.max_abs = diff;
      check.witness = {a, b, c, d};
    }
  }
};

}  // namespace

BlockTensor berwald_curvature(const ProductGeometry& pg) {
  return to_block(pg.product().berwald_curvature(), pg.n1(), kB4);
}

BlockTensor berwald_curvature(const ProductConfig& cfg, const TangentSample& p) {
  return berwald_curvature(ProductGeometry(cfg, p, 5));
}

std::vector<BlockCheck> berwald_closed_blocks(const ProductGeometry& pg) {
  const FactorData d(pg);
  const int n1 = d.n1;
  const int n2 = d.n2;
  const double W1 = d.W1();
  const double W2 = d.W2();
  const auto& B = d.P.berwald_curvature();
  const auto& B1 = d.A.berwald_curvature();
  const auto& B2 = d.B.berwald_curvature();
  const auto& C1 = d.A.cartan();
  const auto& C2 = d.B.cartan();

  auto sum1 = [&](const std::function<double(int)>& f) {
    double s = 0.0;
    for (int h = 0; h < n1; ++h) s += f(h) * d.dW1(h);
    return s;
  };
  auto sum2 = [&](const std::function<double(int)>& f) {
    double s = 0.0;
    for (int al = 0; al < n2; ++al) s += f(al) * d.dW2(al);
    return s;
  };

  std::vector<Tracker> t;
  auto block = [&](const char* name) -> Tracker& {
    t.push_back(Tracker{BlockCheck{name, 0.0, {}}, B});
    return t.back();
  };

  {
    auto& k1 = block("B^k_ijl");
    for (int k = 0; k < n1; ++k)
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j)
          for (int l = 0; l < n1; ++l) {
            const double s = sum1([&](int h) { return d.dddgi1(k, h, i, j, l); });
            k1.add(k, i, j, l, B1.val(k, i, j, l) - s * d.F2sq() / (4.0 * W2));
          }
  }
  {
    auto& k2 = block("B^k_ibl");
    for (int k = 0; k < n1; ++k)
      for (int i = 0; i < n1; ++i)
        for (int be = 0; be < n2; ++be)
          for (int l = 0; l < n1; ++l) {
            const double s = sum1([&](int h) { return d.ddgi1(k, h, l, i); });
            k2.add(k, i, n1 + be, l, -s * d.dF2(be) / (4.0 * W2));
          }
  }
  {
    auto& k3 = block("B^k_abl");
    for (int k = 0; k < n1; ++k)
      for (int al = 0; al < n2; ++al)
        for (int be = 0; be < n2; ++be)
          for (int l = 0; l < n1; ++l) {
            const double s = sum1([&](int h) { return d.dgi1(k, h, l); });
            k3.add(k, n1 + al, n1 + be, l, -d.g2(al, be) * s / (2.0 * W2));
          }
  }
  {
    auto& k4 = block("B^k_abc");
    for (int k = 0; k < n1; ++k)
      for (int al = 0; al < n2; ++al)
        for (int be = 0; be < n2; ++be)
          for (int la = 0; la < n2; ++la) {
            k4.add(k, n1 + al, n1 + be, n1 + la, -C2.val(al, be, la) * d.grad1(k) / W2);
          }
  }
  {
    auto& k5 = block("B^k_ibc");
    for (int k = 0; k < n1; ++k)
      for (int i = 0; i < n1; ++i)
        for (int be = 0; be < n2; ++be)
          for (int la = 0; la < n2; ++la) {
            const double s = sum1([&](int h) { return d.dgi1(k, h, i); });
            k5.add(k, i, n1 + be, n1 + la, -s * d.g2(be, la) / (2.0 * W2));
          }
  }
  {
    auto& k6 = block("B^g_abc");
    for (int ga = 0; ga < n2; ++ga)
      for (int al = 0; al < n2; ++al)
        for (int be = 0; be < n2; ++be)
          for (int la = 0; la < n2; ++la) {
            const double s = sum2([&](int nu) { return d.dddgi2(ga, nu, be, al, la); });
            k6.add(n1 + ga, n1 + al, n1 + be, n1 + la, B2.val(ga, al, be, la) - s * d.F1sq() / (4.0 * W1));
          }
  }
  {
    auto& k7 = block("B^g_ibc");
    for (int ga = 0; ga < n2; ++ga)
      for (int i = 0; i < n1; ++i)
        for (int be = 0; be < n2; ++be)
          for (int la = 0; la < n2; ++la) {
            const double s = sum2([&](int al) { return d.ddgi2(al, ga, be, la); });
            k7.add(n1 + ga, i, n1 + be, n1 + la, -s * d.dF1(i) / (4.0 * W1));
          }
  }
  {
    auto& k8 = block("B^g_ijc");
    for (int ga = 0; ga < n2; ++ga)
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j)
          for (int la = 0; la < n2; ++la) {
            const double s = sum2([&](int al) { return d.dgi2(al, ga, la); });
            k8.add(n1 + ga, i, j, n1 + la, -d.g1(i, j) * s / (2.0 * W1));
          }
  }
  {
    auto& k9 = block("B^g_ijk");
    for (int ga = 0; ga < n2; ++ga)
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j)
          for (int k = 0; k < n1; ++k) k9.add(n1 + ga, i, j, k, -C1.val(i, j, k) * d.grad2(ga) / W1);
  }
  {
    auto& k10 = block("B^g_ibk");
    for (int ga = 0; ga < n2; ++ga)
      for (int i = 0; i < n1; ++i)
        for (int be = 0; be < n2; ++be)
          for (int k = 0; k < n1; ++k) {
            const double s = sum2([&](int al) { return d.dgi2(al, ga, be); });
            k10.add(n1 + ga, i, n1 + be, k, -s * d.g1(i, k) / (2.0 * W1));
          }
  }

  std::vector<BlockCheck> out;
  out.reserve(t.size());
  for (auto& tr : t) out.push_back(std::move(tr.check));
  return out;
}

BlockTensor hh_curvature(const ProductGeometry& pg) {
  return to_block(pg.product().hh_curvature(), pg.n1(), kR4);
}

BlockTensor hh_curvature(const ProductConfig& cfg, const TangentSample& p) {
  return hh_curvature(ProductGeometry(cfg, p, 4));
}

BlockTensor riemann_map(const ProductGeometry& pg) {
  return map_to_block(pg.product().riemann_map(), pg.n1(), pg.n2());
}

BlockTensor riemann_map(const ProductConfig& cfg, const TangentSample& p) {
  return riemann_map(ProductGeometry(cfg, p, 4));
}

BlockTensor riemann_map_from_hh(const ProductGeometry& pg) {
  const auto& P = pg.product();
  const auto& R = P.hh_curvature();
  const int n = pg.n();
  BlockTensor t(pg.n1(), pg.n2(), kUpLow);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) {
        for (int dd = 0; dd < n; ++dd) s += P.fiber(c).value() * P.fiber(dd).value() * R.val(c, a, dd, b);
      }
      t(a, b) = s;
    }
  }
  return t;
}

double flag_curvature(const ProductGeometry& pg, const std::vector<double>& u) {
  const int n = pg.n();
  if (static_cast<int>(u.size()) != n) fail(ErrorKind::Argument, "flag edge has the wrong dimension");
  const auto& P = pg.product();
  const auto& g = P.g();
  const auto& R = P.riemann_map();
  auto inner = [&](auto&& X, auto&& Y) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) s += g.val(a, b) * X(a) * Y(b);
    }
    return s;
  };
  auto yv = [&](int a) { return P.fiber(a).value(); };
  auto uv = [&](int a) { return u[static_cast<std::size_t>(a)]; };
  auto Ru = [&](int a) {
    double s = 0.0;
    for (int b = 0; b < n; ++b) s += R[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] * u[static_cast<std::size_t>(b)];
    return s;
  };
  const double yy = inner(yv, yv);
  const double uu = inner(uv, uv);
  const double yu = inner(yv, uv);
  const double den = yy * uu - yu * yu;
  if (!(den > kFlagDegeneracy)) fail(ErrorKind::Precondition, "degenerate flag: y and u are (nearly) parallel");
  return inner(uv, Ru) / den;
}

double flag_curvature(const ProductConfig& cfg, const TangentSample& p, const std::vector<double>& u) {
  return flag_curvature(ProductGeometry(cfg, p, 4), u);
}

FlatFactorResidual flat_factor_residual(const ProductGeometry& pg) {
  const auto& cfg = pg.config();
  if (!cfg.factor1.is_riemannian()) fail(ErrorKind::Precondition, "flat-factor relation needs a Riemannian first factor");
  const FactorData d(pg);
  const int n1 = d.n1;
  const int n2 = d.n2;
  const auto& R = d.P.hh_curvature();
  FlatFactorResidual out;

  double grad_f2 = 0.0;  // g2^{ab} df2_a df2_b with df2 = dW2 / (2 f2)
  for (int al = 0; al < n2; ++al) {
    for (int ga = 0; ga < n2; ++ga) grad_f2 += d.gi2(al, ga) * d.dW2(al) * d.dW2(ga);
  }
  grad_f2 /= 4.0 * d.W2();
  out.lambda1 = grad_f2 / d.W1();
  const auto& R1 = d.A.hh_curvature();
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i < n1; ++i)
      for (int k = 0; k < n1; ++k)
        for (int l = 0; l < n1; ++l) {
          const double T = kron(i, l) * d.g1(j, k) - kron(i, k) * d.g1(j, l);
          out.latin = std::max(out.latin, std::abs(R.val(j, i, k, l) - R1.val(j, i, k, l) + out.lambda1 * T));
        }

  double grad_f1 = 0.0;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n1; ++j) grad_f1 += d.gi1(i, j) * d.dW1(i) * d.dW1(j);
  }
  grad_f1 /= 4.0 * d.W1();
  out.lambda2 = grad_f1 / d.W2();
  if (cfg.factor2.is_riemannian()) {
    out.greek_checked = true;
    const auto& R2 = d.B.hh_curvature();
    for (int be = 0; be < n2; ++be)
      for (int ga = 0; ga < n2; ++ga)
        for (int la = 0; la < n2; ++la)
          for (int mu = 0; mu < n2; ++mu) {
            const double T = kron(ga, mu) * d.g2(be, la) - kron(ga, la) * d.g2(be, mu);
            const double r = R.val(n1 + be, n1 + ga, n1 + la, n1 + mu) - R2.val(be, ga, la, mu) + out.lambda2 * T;
            out.greek = std::max(out.greek, std::abs(r));
          }
  }
  return out;
}

FlatFactorResidual flat_factor_residual(const ProductConfig& cfg, const TangentSample& p) {
  return flat_factor_residual(ProductGeometry(cfg, p, 4));
}

ScalarFlagFit scalar_flag_residual(const ProductGeometry& pg) {
  if (!pg.config().factor1.is_riemannian()) {
    fail(ErrorKind::Precondition, "scalar-flag fit needs a Riemannian first factor");
  }
  const int n1 = pg.n1();
  if (n1 < 2) fail(ErrorKind::Precondition, "scalar-flag fit needs a first factor of dimension >= 2");
  const FactorData d(pg);
  const auto& R = d.P.hh_curvature();
  double rt = 0.0;
  double tt = 0.0;
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i < n1; ++i)
      for (int k = 0; k < n1; ++k)
        for (int l = 0; l < n1; ++l) {
          const double T = kron(i, l) * d.g1(j, k) - kron(i, k) * d.g1(j, l);
          rt += R.val(j, i, k, l) * T;
          tt += T * T;
        }
  ScalarFlagFit fit;
  if (!(tt > 1e-300)) {
    fit.lambda = std::numeric_limits<double>::quiet_NaN();
    fit.defect = std::numeric_limits<double>::infinity();
    return fit;
  }
  fit.lambda = rt / tt;
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i < n1; ++i)
      for (int k = 0; k < n1; ++k)
        for (int l = 0; l < n1; ++l) {
          const double T = kron(i, l) * d.g1(j, k) - kron(i, k) * d.g1(j, l);
          fit.defect = std::max(fit.defect, std::abs(R.val(j, i, k, l) - fit.lambda * T));
        }
  return fit;
}

ScalarFlagFit scalar_flag_residual(const ProductConfig& cfg, const TangentSample& p) {
  return scalar_flag_residual(ProductGeometry(cfg, p, 4));
}

CurvatureBundle curvature_bundle(const ProductGeometry& pg) {
  return {to_block(pg.product().bracket_curvature(), pg.n1(), {Variance::Upper, Variance::Lower, Variance::Lower}),
          berwald_curvature(pg), hh_curvature(pg), riemann_map(pg)};
}

}  // namespace dwf
