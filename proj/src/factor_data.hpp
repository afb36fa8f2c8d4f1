#pragma once

// Point values shared by the closed-form block formulas.

#include "dwf/product.hpp"

namespace dwf::detail {

struct FactorData {
  explicit FactorData(const ProductGeometry& pg)
      : pg(pg), P(pg.product()), A(pg.factor1()), B(pg.factor2()), n1(pg.n1()), n2(pg.n2()), N(pg.n()) {}

  const ProductGeometry& pg;
  const LocalGeometry& P;
  const LocalGeometry& A;  // factor 1, local index i
  const LocalGeometry& B;  // factor 2, local index alpha
  int n1, n2, N;

  double W1() const { return pg.w1().value(); }
  double W2() const { return pg.w2().value(); }
  double dW1(int i) const { return pg.dw1(i); }
  double dW2(int al) const { return pg.dw2(al); }
  double F1sq() const { return pg.F1sq().value(); }
  double F2sq() const { return pg.F2sq().value(); }
  double dF1(int h) const { return pg.F1sq().d(A.fiber_var(h)); }
  double dF2(int be) const { return pg.F2sq().d(B.fiber_var(be)); }
  double y(int i) const { return pg.sample().y[static_cast<std::size_t>(i)]; }
  double v(int al) const { return pg.sample().v[static_cast<std::size_t>(al)]; }

  double g1(int i, int j) const { return A.g().val(i, j); }
  double g2(int a, int b) const { return B.g().val(a, b); }
  double gi1(int i, int j) const { return A.ginv().val(i, j); }
  double gi2(int a, int b) const { return B.ginv().val(a, b); }
  // Fiber derivatives of factor metric components (local fiber indices).
  double dg1(int i, int j, int r) const { return A.g()(i, j).d(A.fiber_var(r)); }
  double dg2(int a, int b, int r) const { return B.g()(a, b).d(B.fiber_var(r)); }
  double dgi1(int k, int h, int j) const { return A.ginv()(k, h).d(A.fiber_var(j)); }
  double dgi2(int k, int h, int j) const { return B.ginv()(k, h).d(B.fiber_var(j)); }
  double ddgi1(int k, int h, int i, int j) const { return A.ginv()(k, h).dd(A.fiber_var(i), A.fiber_var(j)); }
  double ddgi2(int k, int h, int i, int j) const { return B.ginv()(k, h).dd(B.fiber_var(i), B.fiber_var(j)); }
  double dddgi1(int k, int h, int i, int j, int l) const {
    return A.ginv()(k, h).partial_by({A.fiber_var(i), A.fiber_var(j), A.fiber_var(l)});
  }
  double dddgi2(int k, int h, int i, int j, int l) const {
    return B.ginv()(k, h).partial_by({B.fiber_var(i), B.fiber_var(j), B.fiber_var(l)});
  }

  // sum_h g1^{kh} dW1_h and sum_al g2^{ga al} dW2_al.
  double grad1(int k) const {
    double s = 0.0;
    for (int h = 0; h < n1; ++h) s += gi1(k, h) * dW1(h);
    return s;
  }
  double grad2(int ga) const {
    double s = 0.0;
    for (int al = 0; al < n2; ++al) s += gi2(ga, al) * dW2(al);
    return s;
  }
  double vdW2() const {
    double s = 0.0;
    for (int al = 0; al < n2; ++al) s += dW2(al) * v(al);
    return s;
  }
  double ydW1() const {
    double s = 0.0;
    for (int i = 0; i < n1; ++i) s += dW1(i) * y(i);
    return s;
  }
};

inline double kron(int a, int b) { return a == b ? 1.0 : 0.0; }

}  // namespace dwf::detail
