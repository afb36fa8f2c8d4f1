#include "dwf/connection.hpp"

#include <cmath>
#include <map>

#include "dwf/error.hpp"
#include "dwf/finsler_core.hpp"
#include "factor_data.hpp"

namespace dwf {

using detail::FactorData;
using detail::kron;

namespace {

const std::vector<Variance> kUp{Variance::Upper};
const std::vector<Variance> kUpLow{Variance::Upper, Variance::Lower};
const std::vector<Variance> kUpLowLow{Variance::Upper, Variance::Lower, Variance::Lower};

// M^r_i: the warp-induced shift of the factor-1 nonlinear connection.
double shift1(const FactorData& d, int r, int i) {
  double s = 0.0;
  for (int h = 0; h < d.n1; ++h) s += d.dgi1(r, h, i) * d.dW1(h);
  return d.vdW2() * kron(r, i) / (2.0 * d.W2()) - s * d.F2sq() / (4.0 * d.W2());
}

double shift2(const FactorData& d, int mu, int al) {
  double s = 0.0;
  for (int la = 0; la < d.n2; ++la) s += d.dgi2(mu, la, al) * d.dW2(la);
  return d.ydW1() * kron(mu, al) / (2.0 * d.W1()) - s * d.F1sq() / (4.0 * d.W1());
}

}  // namespace

SprayField spray(const ProductGeometry& pg, SprayPath path) {
  BlockTensor G(pg.n1(), pg.n2(), kUp);
  if (path == SprayPath::Generic) {
    const auto& s = pg.product().spray();
    for (int a = 0; a < pg.n(); ++a) G(a) = s.val(a);
    return {std::move(G), path};
  }
  const FactorData d(pg);
  const auto& s1 = d.A.spray();
  const auto& s2 = d.B.spray();
  for (int i = 0; i < d.n1; ++i) {
    double t = 0.0;
    for (int h = 0; h < d.n1; ++h) t += d.gi1(i, h) * (d.vdW2() * d.dF1(h) - d.dW1(h) * d.F2sq());
    G(i) = s1.val(i) + t / (4.0 * d.W2());
  }
  for (int al = 0; al < d.n2; ++al) {
    double t = 0.0;
    for (int ga = 0; ga < d.n2; ++ga) t += d.gi2(al, ga) * (d.ydW1() * d.dF2(ga) - d.dW2(ga) * d.F1sq());
    G(d.n1 + al) = s2.val(al) + t / (4.0 * d.W1());
  }
  return {std::move(G), path};
}

SprayField spray(const ProductConfig& cfg, const TangentSample& p, SprayPath path) {
  return spray(ProductGeometry(cfg, p, 2), path);
}

BlockTensor nonlinear_connection(const ProductGeometry& pg) {
  return to_block(pg.product().nonlinear(), pg.n1(), kUpLow);
}

BlockTensor nonlinear_connection(const ProductConfig& cfg, const TangentSample& p) {
  return nonlinear_connection(ProductGeometry(cfg, p, 3));
}

BlockTensor nonlinear_connection_closed(const ProductGeometry& pg) {
  const FactorData d(pg);
  const int n1 = d.n1;
  const auto& N1 = d.A.nonlinear();
  const auto& N2 = d.B.nonlinear();
  BlockTensor N(d.n1, d.n2, kUpLow);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n1; ++j) {
      double s = 0.0;
      for (int h = 0; h < n1; ++h) s += d.dgi1(i, h, j) * d.dW1(h);
      N(i, j) = N1.val(i, j) - s * d.F2sq() / (4.0 * d.W2()) + d.vdW2() * kron(i, j) / (2.0 * d.W2());
    }
    for (int be = 0; be < d.n2; ++be) {
      double s = 0.0;
      for (int h = 0; h < n1; ++h) s += d.gi1(i, h) * (d.dW2(be) * d.dF1(h) - d.dW1(h) * d.dF2(be));
      N(i, n1 + be) = s / (4.0 * d.W2());
    }
  }
  for (int al = 0; al < d.n2; ++al) {
    for (int j = 0; j < n1; ++j) {
      double s = 0.0;
      for (int ga = 0; ga < d.n2; ++ga) s += d.gi2(al, ga) * (d.dW1(j) * d.dF2(ga) - d.dW2(ga) * d.dF1(j));
      N(n1 + al, j) = s / (4.0 * d.W1());
    }
    for (int be = 0; be < d.n2; ++be) {
      double s = 0.0;
      for (int ga = 0; ga < d.n2; ++ga) s += d.dgi2(al, ga, be) * d.dW2(ga);
      N(n1 + al, n1 + be) = N2.val(al, be) - s * d.F1sq() / (4.0 * d.W1()) + d.ydW1() * kron(al, be) / (2.0 * d.W1());
    }
  }
  return N;
}

double adapted_derivative(const ProductGeometry& pg, const ScalarField& f, CoordIndex direction) {
  if (direction.block != Block::Base1 && direction.block != Block::Base2) {
    fail(ErrorKind::Argument, "adapted derivative direction must be a base coordinate");
  }
  const int n = pg.n();
  const int b = flat_index(direction, pg.n1(), pg.n2());
  std::vector<CoordIndex> seeds;
  for (int k = 0; k < 2 * n; ++k) seeds.push_back(coord_of_flat(k, pg.n1(), pg.n2()));
  const auto lifted = jet_lift(f, pg.sample(), seeds, 1);
  const auto& N = pg.product().nonlinear();
  double out = lifted.jet.d(b);
  for (int c = 0; c < n; ++c) out -= N.val(c, b) * lifted.jet.d(n + c);
  return out;
}

double adapted_derivative(const ProductConfig& cfg, const TangentSample& p, const ScalarField& f,
                          CoordIndex direction) {
  return adapted_derivative(ProductGeometry(cfg, p, 3), f, direction);
}

FrameBrackets frame_brackets(const ProductGeometry& pg) {
  const auto& P = pg.product();
  return {to_block(P.bracket_curvature(), pg.n1(), kUpLowLow), to_block(P.berwald_connection(), pg.n1(), kUpLowLow)};
}

FrameBrackets frame_brackets(const ProductConfig& cfg, const TangentSample& p) {
  return frame_brackets(ProductGeometry(cfg, p, 4));
}

BlockTensor berwald_connection_closed(const ProductGeometry& pg) {
  const FactorData d(pg);
  const int n1 = d.n1;
  const int n2 = d.n2;
  const auto& G1 = d.A.berwald_connection();
  const auto& G2 = d.B.berwald_connection();
  const double W1 = d.W1();
  const double W2 = d.W2();
  BlockTensor G(n1, n2, kUpLowLow);
  for (int k = 0; k < n1; ++k) {
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n1; ++j) {
        double s = 0.0;
        for (int h = 0; h < n1; ++h) s += d.ddgi1(k, h, j, i) * d.dW1(h);
        G(k, i, j) = G1.val(k, i, j) - s * d.F2sq() / (4.0 * W2);
      }
      for (int be = 0; be < n2; ++be) {
        double s = 0.0;
        for (int h = 0; h < n1; ++h) s += d.dgi1(k, h, i) * d.dW1(h);
        const double val = -s * d.dF2(be) / (4.0 * W2) + d.dW2(be) * kron(k, i) / (2.0 * W2);
        G(k, i, n1 + be) = val;
        G(k, n1 + be, i) = val;
      }
    }
    for (int al = 0; al < n2; ++al) {
      for (int be = 0; be < n2; ++be) G(k, n1 + al, n1 + be) = -d.g2(al, be) * d.grad1(k) / (2.0 * W2);
    }
  }
  for (int ga = 0; ga < n2; ++ga) {
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n1; ++j) G(n1 + ga, i, j) = -d.g1(i, j) * d.grad2(ga) / (2.0 * W1);
      for (int be = 0; be < n2; ++be) {
        double s = 0.0;
        for (int al = 0; al < n2; ++al) s += d.dgi2(al, ga, be) * d.dW2(al);
        const double val = -s * d.dF1(i) / (4.0 * W1) + d.dW1(i) * kron(ga, be) / (2.0 * W1);
        G(n1 + ga, i, n1 + be) = val;
        G(n1 + ga, n1 + be, i) = val;
      }
    }
    for (int al = 0; al < n2; ++al) {
      for (int be = 0; be < n2; ++be) {
        double s = 0.0;
        for (int la = 0; la < n2; ++la) s += d.ddgi2(ga, la, be, al) * d.dW2(la);
        G(n1 + ga, n1 + al, n1 + be) = G2.val(ga, al, be) - s * d.F1sq() / (4.0 * W1);
      }
    }
  }
  return G;
}

BlockTensor horizontal_coefficients(const ProductGeometry& pg) {
  return to_block(pg.product().horizontal(), pg.n1(), kUpLowLow);
}

BlockTensor horizontal_coefficients(const ProductConfig& cfg, const TangentSample& p) {
  return horizontal_coefficients(ProductGeometry(cfg, p, 3));
}

BlockTensor horizontal_coefficients_closed(const ProductGeometry& pg) {
  const FactorData d(pg);
  const int n1 = d.n1;
  const int n2 = d.n2;
  const double W1 = d.W1();
  const double W2 = d.W2();
  const auto N = nonlinear_connection_closed(pg);
  const auto& F1 = d.A.horizontal();
  const auto& F2 = d.B.horizontal();
  BlockTensor F(n1, n2, kUpLowLow);

  std::vector<std::vector<double>> M1(static_cast<std::size_t>(n1), std::vector<double>(static_cast<std::size_t>(n1)));
  std::vector<std::vector<double>> M2(static_cast<std::size_t>(n2), std::vector<double>(static_cast<std::size_t>(n2)));
  for (int r = 0; r < n1; ++r) {
    for (int i = 0; i < n1; ++i) M1[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = shift1(d, r, i);
  }
  for (int mu = 0; mu < n2; ++mu) {
    for (int al = 0; al < n2; ++al) M2[static_cast<std::size_t>(mu)][static_cast<std::size_t>(al)] = shift2(d, mu, al);
  }
  auto m1 = [&](int r, int i) { return M1[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)]; };
  auto m2 = [&](int r, int i) { return M2[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)]; };

  for (int k = 0; k < n1; ++k) {
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n1; ++j) {
        double s = 0.0;
        for (int h = 0; h < n1; ++h) {
          double t = 0.0;
          for (int r = 0; r < n1; ++r) {
            t += m1(r, j) * d.dg1(h, i, r) + m1(r, i) * d.dg1(h, j, r) - m1(r, h) * d.dg1(i, j, r);
          }
          s += d.gi1(k, h) * t;
        }
        F(k, i, j) = F1.val(k, i, j) - 0.5 * s;
      }
      for (int be = 0; be < n2; ++be) {
        double s = 0.0;
        for (int h = 0; h < n1; ++h) {
          double t = d.dW2(be) * d.g1(h, i);
          for (int r = 0; r < n1; ++r) t -= W2 * N(r, n1 + be) * d.dg1(h, i, r);
          s += d.gi1(k, h) * t;
        }
        F(k, i, n1 + be) = F(k, n1 + be, i) = s / (2.0 * W2);
      }
    }
    for (int al = 0; al < n2; ++al) {
      for (int be = 0; be < n2; ++be) {
        double s = 0.0;
        for (int h = 0; h < n1; ++h) {
          double t = d.dW1(h) * d.g2(al, be);
          for (int la = 0; la < n2; ++la) t -= W1 * N(n1 + la, h) * d.dg2(al, be, la);
          s += d.gi1(k, h) * t;
        }
        F(k, n1 + al, n1 + be) = -s / (2.0 * W2);
      }
    }
  }
  for (int ga = 0; ga < n2; ++ga) {
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n1; ++j) {
        double s = 0.0;
        for (int la = 0; la < n2; ++la) {
          double t = d.dW2(la) * d.g1(i, j);
          for (int r = 0; r < n1; ++r) t -= W2 * N(r, n1 + la) * d.dg1(i, j, r);
          s += d.gi2(ga, la) * t;
        }
        F(n1 + ga, i, j) = -s / (2.0 * W1);
      }
      for (int be = 0; be < n2; ++be) {
        double s = 0.0;
        for (int la = 0; la < n2; ++la) {
          double t = d.dW1(i) * d.g2(be, la);
          for (int al = 0; al < n2; ++al) t -= W1 * N(n1 + al, i) * d.dg2(be, la, al);
          s += d.gi2(ga, la) * t;
        }
        F(n1 + ga, i, n1 + be) = F(n1 + ga, n1 + be, i) = s / (2.0 * W1);
      }
    }
    for (int al = 0; al < n2; ++al) {
      for (int be = 0; be < n2; ++be) {
        double s = 0.0;
        for (int la = 0; la < n2; ++la) {
          double t = 0.0;
          for (int mu = 0; mu < n2; ++mu) {
            t += m2(mu, be) * d.dg2(la, al, mu) + m2(mu, al) * d.dg2(la, be, mu) - m2(mu, la) * d.dg2(al, be, mu);
          }
          s += d.gi2(ga, la) * t;
        }
        F(n1 + ga, n1 + al, n1 + be) = F2.val(ga, al, be) - 0.5 * s;
      }
    }
  }
  return F;
}

std::vector<BlockDiscrepancy> block_discrepancies(const BlockTensor& generic, const BlockTensor& closed) {
  if (generic.rank() != closed.rank() || generic.n1() != closed.n1() || generic.n2() != closed.n2()) {
    fail(ErrorKind::Argument, "tensor shapes differ");
  }
  std::map<std::string, BlockDiscrepancy> by_block;
  const auto& gd = generic.data();
  const auto& cd = closed.data();
  for (std::size_t p = 0; p < gd.size(); ++p) {
    const auto idx = generic.unflatten(p);
    std::string label;
    for (std::size_t s = 0; s < idx.size(); ++s) {
      label += generic.variance()[s] == Variance::Upper ? '^' : '_';
      label += generic.is_latin(idx[s]) ? 'L' : 'G';
    }
    auto& e = by_block[label];
    e.block = label;
    double diff = std::abs(gd[p] - cd[p]);
    if (std::isnan(diff)) diff = INFINITY;
    if (e.witness.empty() || diff > e.max_abs) {
      e.max_abs = diff;
      e.witness = idx;
    }
  }
  std::vector<BlockDiscrepancy> out;
  for (auto& [_, e] : by_block) out.push_back(std::move(e));
  return out;
}

FrameVector FrameVector::horizontal_basis(int n1, int n2, int a) {
  FrameVector X(n1, n2);
  X.h(a) = 1.0;
  return X;
}

FrameVector FrameVector::vertical_basis(int n1, int n2, int a) {
  FrameVector X(n1, n2);
  X.v(a) = 1.0;
  return X;
}

bool FrameVector::is_vertical(double tol) const {
  for (int a = 0; a < n(); ++a) {
    if (std::abs(h(a)) > tol) return false;
  }
  return true;
}

bool FrameVector::is_horizontal(double tol) const {
  for (int a = 0; a < n(); ++a) {
    if (std::abs(v(a)) > tol) return false;
  }
  return true;
}

FrameVector& FrameVector::operator+=(const FrameVector& o) {
  if (o.n1_ != n1_ || o.n2_ != n2_) fail(ErrorKind::Argument, "frame vector dimensions differ");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

FrameVector& FrameVector::operator-=(const FrameVector& o) {
  if (o.n1_ != n1_ || o.n2_ != n2_) fail(ErrorKind::Argument, "frame vector dimensions differ");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

FrameVector& FrameVector::operator*=(double s) {
  for (auto& c : c_) c *= s;
  return *this;
}

FrameVector vertical_projector(const FrameVector& X) {
  FrameVector out(X.n1(), X.n2());
  for (int a = 0; a < X.n(); ++a) out.v(a) = X.v(a);
  return out;
}

FrameVector horizontal_projector(const FrameVector& X) {
  FrameVector out(X.n1(), X.n2());
  for (int a = 0; a < X.n(); ++a) out.h(a) = X.h(a);
  return out;
}

FrameVector almost_tangent(const FrameVector& X) {
  FrameVector out(X.n1(), X.n2());
  for (int a = 0; a < X.n(); ++a) out.v(a) = X.h(a);
  return out;
}

}  // namespace dwf
