#include "dwf/lifted.hpp"

#include <cmath>
#include <map>

#include "dwf/error.hpp"
#include "dwf/finsler_core.hpp"
#include "dwf/lift.hpp"
#include "factor_data.hpp"

namespace dwf {

using detail::FactorData;

namespace {

// Structure functions and metric data of the adapted frame.
class Frame {
 public:
  explicit Frame(const ProductGeometry& pg)
      : n_(pg.n()), P_(pg.product()), g_(P_.g()), gi_(P_.ginv()), fb_(frame_brackets(pg)) {}

  int n() const { return n_; }
  int size() const { return 2 * n_; }
  const FrameBrackets& brackets() const { return fb_; }

  double G(int A, int B) const { return (A < n_) == (B < n_) ? g_.val(A % n_, B % n_) : 0.0; }
  double Ginv(int A, int B) const { return (A < n_) == (B < n_) ? gi_.val(A % n_, B % n_) : 0.0; }
  // E_A applied to G_BC.
  double EG(int A, int B, int C) const {
    if ((B < n_) != (C < n_)) return 0.0;
    const int b = B % n_;
    const int c = C % n_;
    if (A < n_) return P_.delta_g().val(b, c, A);
    return 2.0 * P_.cartan().val(b, c, A - n_);
  }
  // Coefficient of E_D in [E_A, E_B].
  double cst(int D, int A, int B) const {
    if (D < n_) return 0.0;
    const int d = D - n_;
    if (A < n_ && B < n_) return fb_.R(d, A, B);
    if (A < n_ && B >= n_) return fb_.Gc(d, A, B - n_);
    if (A >= n_ && B < n_) return -fb_.Gc(d, B, A - n_);
    return 0.0;
  }
  double cG(int A, int B, int C) const {
    double s = 0.0;
    for (int D = n_; D < size(); ++D) s += cst(D, A, B) * G(D, C);
    return s;
  }

 private:
  int n_;
  const LocalGeometry& P_;
  const JetTensor& g_;
  const JetTensor& gi_;
  FrameBrackets fb_;
};

FrameVector basis(int n1, int n2, int A) {
  const int n = n1 + n2;
  return A < n ? FrameVector::horizontal_basis(n1, n2, A) : FrameVector::vertical_basis(n1, n2, A - n);
}

double max_abs(const FrameVector& X) {
  double m = 0.0;
  for (double c : X.components()) m = std::max(m, std::isnan(c) ? INFINITY : std::abs(c));
  return m;
}

// G(nabla_A E_B, E_C) from a table row.
double lower(const Frame& fr, const FrameVector& v, int C) {
  double s = 0.0;
  const auto& c = v.components();
  for (int D = 0; D < fr.size(); ++D) s += c[static_cast<std::size_t>(D)] * fr.G(D, C);
  return s;
}

double metricity(const Frame& fr, const ConnectionTable& t, int A, int B, int C) {
  return fr.EG(A, B, C) - lower(fr, t.at(A, B), C) - lower(fr, t.at(A, C), B);
}

FrameVector torsion(const Frame& fr, const ConnectionTable& t, int n1, int n2, int A, int B) {
  return t.at(A, B) - t.at(B, A) - frame_bracket(fr.brackets(), basis(n1, n2, A), basis(n1, n2, B));
}

}  // namespace

LiftedMetric::LiftedMetric(const ProductGeometry& pg) : g_(pg.n1(), pg.n2(), {Variance::Lower, Variance::Lower}) {
  const auto& g = pg.product().g();
  for (int a = 0; a < pg.n(); ++a) {
    for (int b = 0; b < pg.n(); ++b) g_(a, b) = g.val(a, b);
  }
}

double LiftedMetric::component(int A, int B) const {
  const int m = n();
  if (A < 0 || B < 0 || A >= 2 * m || B >= 2 * m) fail(ErrorKind::Argument, "frame index out of range");
  return (A < m) == (B < m) ? g_(A % m, B % m) : 0.0;
}

double LiftedMetric::operator()(const FrameVector& X, const FrameVector& Y) const {
  if (X.n1() != n1() || X.n2() != n2() || Y.n1() != n1() || Y.n2() != n2()) {
    fail(ErrorKind::Argument, "frame vector dimensions do not match the metric");
  }
  double s = 0.0;
  for (int a = 0; a < n(); ++a) {
    for (int b = 0; b < n(); ++b) s += g_(a, b) * (X.h(a) * Y.h(b) + X.v(a) * Y.v(b));
  }
  return s;
}

LiftedMetric lifted_metric(const ProductGeometry& pg) { return LiftedMetric(pg); }

FrameVector frame_bracket(const FrameBrackets& fb, const FrameVector& X, const FrameVector& Y) {
  const int n = X.n();
  FrameVector out(X.n1(), X.n2());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double hh = X.h(a) * Y.h(b);
      const double hv = X.h(a) * Y.v(b) - X.v(b) * Y.h(a);
      if (hh == 0.0 && hv == 0.0) continue;
      for (int c = 0; c < n; ++c) out.v(c) += hh * fb.R(c, a, b) + hv * fb.Gc(c, a, b);
    }
  }
  return out;
}

ConnectionTable::ConnectionTable(ConnectionKind kind, int n1, int n2)
    : kind_(kind), n1_(n1), n2_(n2), rows_(static_cast<std::size_t>(4 * (n1 + n2) * (n1 + n2))) {}

std::size_t ConnectionTable::slot(int A, int B) const {
  const int m = 2 * n();
  if (A < 0 || B < 0 || A >= m || B >= m) fail(ErrorKind::Argument, "frame index out of range");
  return static_cast<std::size_t>(A * m + B);
}

bool ConnectionTable::defined(int A, int B) const { return rows_[slot(A, B)].has_value(); }

const FrameVector& ConnectionTable::at(int A, int B) const {
  const auto& r = rows_[slot(A, B)];
  if (!r) fail(ErrorKind::Argument, "connection row not available in this table");
  return *r;
}

void ConnectionTable::set(int A, int B, FrameVector value) { rows_[slot(A, B)] = std::move(value); }

FrameVector ConnectionTable::apply(const FrameVector& X, const FrameVector& Y) const {
  FrameVector out(n1_, n2_);
  const auto& x = X.components();
  const auto& y = Y.components();
  for (std::size_t A = 0; A < x.size(); ++A) {
    if (x[A] == 0.0) continue;
    for (std::size_t B = 0; B < y.size(); ++B) {
      if (y[B] == 0.0) continue;
      out += (x[A] * y[B]) * at(static_cast<int>(A), static_cast<int>(B));
    }
  }
  return out;
}

KoszulResult koszul_levi_civita(const ProductGeometry& pg) {
  const Frame fr(pg);
  const int m = fr.size();
  KoszulResult res{ConnectionTable(ConnectionKind::LeviCivitaKoszul, pg.n1(), pg.n2())};
  for (int A = 0; A < m; ++A) {
    for (int B = 0; B < m; ++B) {
      std::vector<double> gamma(static_cast<std::size_t>(m));
      for (int C = 0; C < m; ++C) {
        gamma[static_cast<std::size_t>(C)] =
            0.5 * (fr.EG(A, B, C) + fr.EG(B, A, C) - fr.EG(C, A, B) + fr.cG(A, B, C) - fr.cG(A, C, B) - fr.cG(B, C, A));
      }
      FrameVector v(pg.n1(), pg.n2());
      for (int C = 0; C < m; ++C) {
        double s = 0.0;
        for (int D = 0; D < m; ++D) s += fr.Ginv(C, D) * gamma[static_cast<std::size_t>(D)];
        v.components()[static_cast<std::size_t>(C)] = s;
      }
      res.table.set(A, B, std::move(v));
    }
  }
  for (int A = 0; A < m; ++A) {
    for (int B = 0; B < m; ++B) {
      for (int C = 0; C < m; ++C) res.compatibility = std::max(res.compatibility, std::abs(metricity(fr, res.table, A, B, C)));
      res.torsion = std::max(res.torsion, max_abs(torsion(fr, res.table, pg.n1(), pg.n2(), A, B)));
    }
  }
  return res;
}

LeviClosedForms levi_civita_closed_forms(const ProductGeometry& pg, const ConnectionTable& koszul) {
  const FactorData d(pg);
  const int n1 = d.n1;
  const int n2 = d.n2;
  const int n = d.N;
  const double W1 = d.W1();
  const double W2 = d.W2();
  const auto& R = d.P.bracket_curvature();
  const auto& C1 = d.A.cartan_upper();
  const auto& C2 = d.B.cartan_upper();
  const auto& g1j = d.A.g();
  const auto& g2j = d.B.g();
  const BlockTensor Gc = berwald_connection_closed(pg);
  const BlockTensor F = horizontal_coefficients_closed(pg);
  auto dl = [&](const Jet& f, int b) { return d.P.delta(f, b).value(); };
  auto r = [&](int c, int a, int b) { return R.val(c, a, b); };
  auto g1 = [&](int i, int j) { return d.g1(i, j); };
  auto g2 = [&](int a, int b) { return d.g2(a, b); };
  auto gi1 = [&](int i, int j) { return d.gi1(i, j); };
  auto gi2 = [&](int a, int b) { return d.gi2(a, b); };
  // sum_r Gc(r, a, b) g1(r, j) and sum_l Gc(n1 + l, a, b) g2(l, be)
  auto GL = [&](int a, int b, int j) {
    double s = 0.0;
    for (int rr = 0; rr < n1; ++rr) s += Gc(rr, a, b) * g1(rr, j);
    return s;
  };
  auto GG = [&](int a, int b, int be) {
    double s = 0.0;
    for (int l = 0; l < n2; ++l) s += Gc(n1 + l, a, b) * g2(l, be);
    return s;
  };

  // Block names: frame kinds (h/v) of the two slots, then index classes (i,j Latin; A,B Greek).
  LeviClosedForms out{ConnectionTable(ConnectionKind::LeviCivitaClosedForm, n1, n2), {}};
  std::map<std::string, LeviBlock> blocks;
  auto put = [&](const char* name, int A, int B, FrameVector v) {
    auto& blk = blocks[name];
    blk.name = name;
    const auto& k = koszul.at(A, B).components();
    for (std::size_t c = 0; c < k.size(); ++c) {
      double diff = std::abs(v.components()[c] - k[c]);
      if (std::isnan(diff)) diff = INFINITY;
      if (blk.witness.empty() || diff > blk.max_abs) {
        blk.max_abs = diff;
        blk.witness = {A, B, static_cast<int>(c)};
      }
    }
    out.table.set(A, B, std::move(v));
  };
  auto fresh = [&] { return FrameVector(n1, n2); };
  auto hor_row = [&](int a, int b, bool latin_cartan, bool greek_cartan) {
    FrameVector v = fresh();
    for (int c = 0; c < n; ++c) {
      v.h(c) = F(c, a, b);
      v.v(c) = 0.5 * r(c, a, b);
    }
    if (latin_cartan) {
      for (int s = 0; s < n1; ++s) v.v(s) -= C1.val(s, a, b);
    }
    if (greek_cartan) {
      for (int ga = 0; ga < n2; ++ga) v.v(n1 + ga) -= C2.val(ga, a - n1, b - n1);
    }
    return v;
  };

  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n1; ++j) {
      put("hh:ij", i, j, hor_row(i, j, true, false));

      FrameVector v = fresh();  // nabla_{delta_i} d/dy^j
      for (int s = 0; s < n1; ++s) {
        double hs = C1.val(s, i, j);
        double vs = 0.0;
        for (int k = 0; k < n1; ++k) {
          for (int rr = 0; rr < n1; ++rr) hs += 0.5 * g1(rr, j) * gi1(k, s) * r(rr, k, i);
          vs += 0.5 * gi1(k, s) * (dl(g1j(j, k), i) + GL(i, j, k) - GL(i, k, j));
        }
        v.h(s) = hs;
        v.v(s) = vs;
      }
      for (int ga = 0; ga < n2; ++ga) {
        double hg = 0.0;
        double vg = 0.0;
        for (int mu = 0; mu < n2; ++mu) {
          for (int rr = 0; rr < n1; ++rr) hg += W2 / (2.0 * W1) * g1(rr, j) * gi2(ga, mu) * r(rr, n1 + mu, i);
          vg += gi2(ga, mu) * (W1 * GG(i, j, mu) - W2 * GL(i, n1 + mu, j)) / (2.0 * W1);
        }
        v.h(n1 + ga) = hg;
        v.v(n1 + ga) = vg;
      }
      put("hv:ij", i, n + j, std::move(v));

      FrameVector w = fresh();  // nabla_{d/dy^i} d/dy^j
      for (int s = 0; s < n1; ++s) {
        double hs = 0.0;
        for (int k = 0; k < n1; ++k) hs += 0.5 * gi1(k, s) * (GL(k, j, i) + GL(k, i, j) - dl(g1j(i, j), k));
        w.h(s) = hs;
        w.v(s) = C1.val(s, i, j);
      }
      for (int ga = 0; ga < n2; ++ga) {
        double hg = 0.0;
        for (int mu = 0; mu < n2; ++mu) {
          hg += gi2(ga, mu) * (W2 * GL(n1 + mu, j, i) + W2 * GL(n1 + mu, i, j) - dl(pg.w2() * g1j(i, j), n1 + mu)) /
                (2.0 * W1);
        }
        w.h(n1 + ga) = hg;
      }
      put("vv:ij", n + i, n + j, std::move(w));
    }
    for (int be = 0; be < n2; ++be) {
      const int B = n1 + be;
      put("hh:iB", i, B, hor_row(i, B, false, false));
      put("hh:Bi", B, i, hor_row(B, i, false, false));

      FrameVector v = fresh();  // nabla_{delta_i} d/dv^be
      for (int s = 0; s < n1; ++s) {
        double hs = 0.0;
        double vs = 0.0;
        for (int k = 0; k < n1; ++k) {
          for (int la = 0; la < n2; ++la) hs += W1 / (2.0 * W2) * g2(la, be) * gi1(k, s) * r(n1 + la, k, i);
          vs += gi1(k, s) * (W2 * GL(i, B, k) - W1 * GG(i, k, be)) / (2.0 * W2);
        }
        v.h(s) = hs;
        v.v(s) = vs;
      }
      for (int ga = 0; ga < n2; ++ga) {
        double hg = 0.0;
        double vg = 0.0;
        for (int mu = 0; mu < n2; ++mu) {
          for (int la = 0; la < n2; ++la) hg += 0.5 * g2(la, be) * gi2(mu, ga) * r(n1 + la, n1 + mu, i);
          vg += gi2(ga, mu) * (dl(pg.w1() * g2j(be, mu), i) + W1 * GG(i, B, mu) - W1 * GG(i, n1 + mu, be)) / (2.0 * W1);
        }
        v.h(n1 + ga) = hg;
        v.v(n1 + ga) = vg;
      }
      put("hv:iB", i, n + B, std::move(v));

      FrameVector w = fresh();  // nabla_{delta_be} d/dy^i
      for (int s = 0; s < n1; ++s) {
        double hs = 0.0;
        double vs = 0.0;
        for (int k = 0; k < n1; ++k) {
          for (int rr = 0; rr < n1; ++rr) hs += 0.5 * g1(rr, i) * gi1(k, s) * r(rr, k, B);
          vs += gi1(k, s) * (dl(pg.w2() * g1j(i, k), B) + W2 * GL(B, i, k) - W2 * GL(B, k, i)) / (2.0 * W2);
        }
        w.h(s) = hs;
        w.v(s) = vs;
      }
      for (int ga = 0; ga < n2; ++ga) {
        double hg = 0.0;
        double vg = 0.0;
        for (int mu = 0; mu < n2; ++mu) {
          for (int rr = 0; rr < n1; ++rr) hg += W2 / (2.0 * W1) * g1(rr, i) * gi2(ga, mu) * r(rr, n1 + mu, B);
          vg += gi2(ga, mu) * (W1 * GG(B, i, mu) - W2 * GL(B, n1 + mu, i)) / (2.0 * W1);
        }
        w.h(n1 + ga) = hg;
        w.v(n1 + ga) = vg;
      }
      put("hv:Bi", B, n + i, std::move(w));

      FrameVector u = fresh();  // nabla_{d/dv^be} d/dy^i = nabla_{d/dy^i} d/dv^be
      for (int s = 0; s < n1; ++s) {
        double hs = 0.0;
        for (int k = 0; k < n1; ++k) hs += gi1(k, s) * (W1 * GG(k, i, be) + W2 * GL(k, B, i)) / (2.0 * W2);
        u.h(s) = hs;
      }
      for (int ga = 0; ga < n2; ++ga) {
        double hg = 0.0;
        for (int mu = 0; mu < n2; ++mu) hg += gi2(ga, mu) * (W1 * GG(n1 + mu, i, be) + W2 * GL(n1 + mu, B, i)) / (2.0 * W1);
        u.h(n1 + ga) = hg;
      }
      put("vv:iB", n + i, n + B, u);
      put("vv:iB", n + B, n + i, std::move(u));
    }
  }
  for (int al = 0; al < n2; ++al) {
    const int Al = n1 + al;
    for (int be = 0; be < n2; ++be) {
      const int B = n1 + be;
      put("hh:AB", Al, B, hor_row(Al, B, false, true));

      FrameVector v = fresh();  // nabla_{delta_al} d/dv^be
      for (int s = 0; s < n1; ++s) {
        double hs = 0.0;
        double vs = 0.0;
        for (int k = 0; k < n1; ++k) {
          for (int la = 0; la < n2; ++la) hs += W1 / (2.0 * W2) * g2(la, be) * gi1(k, s) * r(n1 + la, k, Al);
          vs += gi1(k, s) * (W2 * GL(Al, B, k) - W1 * GG(Al, k, be)) / (2.0 * W2);
        }
        v.h(s) = hs;
        v.v(s) = vs;
      }
      for (int ga = 0; ga < n2; ++ga) {
        double hg = C2.val(ga, al, be);
        double vg = 0.0;
        for (int mu = 0; mu < n2; ++mu) {
          for (int la = 0; la < n2; ++la) hg += 0.5 * g2(la, be) * gi2(mu, ga) * r(n1 + la, n1 + mu, Al);
          vg += gi2(ga, mu) * (dl(pg.w1() * g2j(be, mu), Al) + W1 * GG(Al, B, mu) - W1 * GG(Al, n1 + mu, be)) /
                (2.0 * W1);
        }
        v.h(n1 + ga) = hg;
        v.v(n1 + ga) = vg;
      }
      put("hv:AB", Al, n + B, std::move(v));

      FrameVector w = fresh();  // nabla_{d/dv^al} d/dv^be
      for (int s = 0; s < n1; ++s) {
        double hs = 0.0;
        for (int k = 0; k < n1; ++k) {
          hs += gi1(k, s) * (-dl(pg.w1() * g2j(al, be), k) + W1 * GG(k, B, al) + W1 * GG(k, Al, be)) / (2.0 * W2);
        }
        w.h(s) = hs;
      }
      for (int ga = 0; ga < n2; ++ga) {
        double hg = 0.0;
        for (int mu = 0; mu < n2; ++mu) {
          hg += gi2(ga, mu) * (-W1 * dl(g2j(al, be), n1 + mu) + W1 * GG(n1 + mu, B, al) + W1 * GG(n1 + mu, Al, be)) /
                (2.0 * W1);
        }
        w.h(n1 + ga) = hg;
        w.v(n1 + ga) = C2.val(ga, al, be);
      }
      put("vv:AB", n + Al, n + B, std::move(w));
    }
  }
  for (const char* name : {"hh:ij", "hv:ij", "hh:iB", "hv:iB", "hh:AB", "hh:Bi", "hv:Bi", "hv:AB", "vv:ij", "vv:iB", "vv:AB"}) {
    const auto it = blocks.find(name);
    if (it != blocks.end()) out.blocks.push_back(it->second);
  }
  return out;
}

ConnectionTable induced_vertical_connection(const ConnectionTable& koszul) {
  const int n = koszul.n();
  ConnectionTable t(ConnectionKind::InducedVertical, koszul.n1(), koszul.n2());
  for (int A = 0; A < 2 * n; ++A) {
    for (int b = 0; b < n; ++b) t.set(A, n + b, vertical_projector(koszul.at(A, n + b)));
  }
  return t;
}

VaismanResult vaisman_connection(const ProductGeometry& pg) {
  const Frame fr(pg);
  const int n1 = pg.n1();
  const int n2 = pg.n2();
  const int n = pg.n();
  const auto& P = pg.product();
  const auto& F = P.horizontal();
  const auto& Gc = P.berwald_connection();
  const auto& Cu = P.cartan_upper();
  VaismanResult res{ConnectionTable(ConnectionKind::Vaisman, n1, n2)};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      FrameVector hh(n1, n2), hv(n1, n2), vv(n1, n2);
      for (int c = 0; c < n; ++c) {
        hh.h(c) = F.val(c, a, b);
        hv.v(c) = Gc.val(c, a, b);
        vv.v(c) = Cu.val(c, a, b);
      }
      res.table.set(a, b, std::move(hh));
      res.table.set(a, n + b, std::move(hv));
      res.table.set(n + a, n + b, std::move(vv));
      res.table.set(n + a, b, FrameVector(n1, n2));
    }
  }
  const int m = 2 * n;
  for (int A = 0; A < m; ++A) {
    for (int B = 0; B < m; ++B) {
      const auto& row = res.table.at(A, B);
      res.preservation =
          std::max(res.preservation, max_abs(B < n ? vertical_projector(row) : horizontal_projector(row)));
      for (int C = 0; C < m; ++C) {
        const bool all_h = A < n && B < n && C < n;
        const bool all_v = A >= n && B >= n && C >= n;
        if (all_h || all_v) res.metricity = std::max(res.metricity, std::abs(metricity(fr, res.table, A, B, C)));
      }
      const auto T = torsion(fr, res.table, n1, n2, A, B);
      double t = 0.0;
      if (A < n && B < n) {
        t = max_abs(horizontal_projector(T));
      } else if (A >= n && B >= n) {
        t = max_abs(vertical_projector(T));
      } else {
        t = max_abs(T);
      }
      res.torsion = std::max(res.torsion, t);
    }
  }
  return res;
}

double same_connection_gap(const ConnectionTable& induced, const ConnectionTable& vaisman) {
  const int n = induced.n();
  double gap = 0.0;
  for (int A = 0; A < 2 * n; ++A) {
    for (int b = 0; b < n; ++b) gap = std::max(gap, max_abs(induced.at(A, n + b) - vaisman.at(A, n + b)));
  }
  return gap;
}

ReinhartValue reinhart_defect(const ProductGeometry& pg, const VaismanResult& vaisman, const FrameVector& X,
                              const FrameVector& Y, const FrameVector& Z) {
  if (!X.is_vertical() || !Y.is_horizontal() || !Z.is_horizontal()) {
    fail(ErrorKind::Precondition, "Reinhart defect needs X vertical and Y, Z horizontal");
  }
  const Frame fr(pg);
  const int m = fr.size();
  const auto& t = vaisman.table;
  const auto nXY = t.apply(X, Y);
  const auto nXZ = t.apply(X, Z);
  const auto& x = X.components();
  const auto& y = Y.components();
  const auto& z = Z.components();
  ReinhartValue out;
  double s = 0.0;
  for (int A = 0; A < m; ++A) {
    for (int B = 0; B < m; ++B) {
      for (int C = 0; C < m; ++C) {
        const double w = x[static_cast<std::size_t>(A)] * y[static_cast<std::size_t>(B)] * z[static_cast<std::size_t>(C)];
        if (w != 0.0) s += w * fr.EG(A, B, C);
      }
      s -= nXY.components()[static_cast<std::size_t>(A)] * fr.G(A, B) * z[static_cast<std::size_t>(B)];
      s -= y[static_cast<std::size_t>(A)] * fr.G(A, B) * nXZ.components()[static_cast<std::size_t>(B)];
    }
  }
  out.defect = s;

  const FactorData d(pg);
  const auto& C1 = d.A.cartan();
  const auto& C2 = d.B.cartan();
  double id = 0.0;
  for (int i = 0; i < d.n1; ++i)
    for (int j = 0; j < d.n1; ++j)
      for (int k = 0; k < d.n1; ++k) id += 2.0 * X.v(i) * Y.h(j) * Z.h(k) * d.W2() * C1.val(i, j, k);
  for (int al = 0; al < d.n2; ++al)
    for (int be = 0; be < d.n2; ++be)
      for (int ga = 0; ga < d.n2; ++ga) {
        id += 2.0 * X.v(d.n1 + al) * Y.h(d.n1 + be) * Z.h(d.n1 + ga) * d.W1() * C2.val(al, be, ga);
      }
  out.identity = id;
  return out;
}

FrameVector apply_J(const FrameVector& X) {
  FrameVector out(X.n1(), X.n2());
  for (int a = 0; a < X.n(); ++a) {
    out.h(a) = X.v(a);
    out.v(a) = -X.h(a);
  }
  return out;
}

double symplectic_form(const LiftedMetric& G, const FrameVector& X, const FrameVector& Y) { return G(X, apply_J(Y)); }

std::vector<std::vector<double>> omega_coordinates(const ProductGeometry& pg) {
  const int n = pg.n();
  const auto& g = pg.product().g();
  const auto& N = pg.product().nonlinear();
  std::vector<std::vector<double>> O(static_cast<std::size_t>(2 * n), std::vector<double>(static_cast<std::size_t>(2 * n)));
  auto at = [&](int A, int B) -> double& { return O[static_cast<std::size_t>(A)][static_cast<std::size_t>(B)]; };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      at(a, n + b) = g.val(a, b);
      at(n + b, a) = -g.val(a, b);
      double s = 0.0;
      for (int c = 0; c < n; ++c) s += N.val(c, b) * g.val(a, c) - N.val(c, a) * g.val(c, b);
      at(a, b) = s;
    }
  }
  return O;
}

ClosednessResult closedness_check(const ProductConfig& cfg, const TangentSample& p) {
  const int n1 = cfg.n1();
  const int n2 = cfg.n2();
  const int m = 2 * (n1 + n2);
  const int n = n1 + n2;
  using Matrix = std::vector<std::vector<double>>;
  std::map<std::vector<double>, Matrix> omega_cache;
  std::map<std::vector<double>, std::vector<double>> w_cache;
  auto omega_at = [&](const std::vector<double>& flat) -> const Matrix& {
    auto it = omega_cache.find(flat);
    if (it == omega_cache.end()) {
      it = omega_cache.emplace(flat, omega_coordinates(ProductGeometry(cfg, TangentSample::from_flat(flat, n1, n2), 3))).first;
    }
    return it->second;
  };
  // omega_A: g_ab y^a on dx^b, zero on the fiber coordinates.
  auto w_at = [&](const std::vector<double>& flat) -> const std::vector<double>& {
    auto it = w_cache.find(flat);
    if (it == w_cache.end()) {
      const ProductGeometry pg(cfg, TangentSample::from_flat(flat, n1, n2), 2);
      std::vector<double> w(static_cast<std::size_t>(m), 0.0);
      for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) w[static_cast<std::size_t>(b)] += pg.product().g().val(a, b) * flat[static_cast<std::size_t>(n + a)];
      }
      it = w_cache.emplace(flat, std::move(w)).first;
    }
    return it->second;
  };

  const auto flat = p.flat();
  const double step = default_fd_step(1);
  // dO[C][A][B] = d Omega_AB / d z^C
  std::vector<Matrix> dO(static_cast<std::size_t>(m), Matrix(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m))));
  Matrix dw(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m)));
  for (int C = 0; C < m; ++C) {
    const int vars[1] = {C};
    for (int A = 0; A < m; ++A) {
      for (int B = A + 1; B < m; ++B) {
        const RealField f = [&, A, B](const std::vector<double>& z) {
          return omega_at(z)[static_cast<std::size_t>(A)][static_cast<std::size_t>(B)];
        };
        const double v = fd_partial(f, flat, vars, step);
        dO[static_cast<std::size_t>(C)][static_cast<std::size_t>(A)][static_cast<std::size_t>(B)] = v;
        dO[static_cast<std::size_t>(C)][static_cast<std::size_t>(B)][static_cast<std::size_t>(A)] = -v;
      }
      const RealField wf = [&, A](const std::vector<double>& z) { return w_at(z)[static_cast<std::size_t>(A)]; };
      dw[static_cast<std::size_t>(C)][static_cast<std::size_t>(A)] = fd_partial(wf, flat, vars, step);
    }
  }
  auto d = [&](int C, int A, int B) {
    return dO[static_cast<std::size_t>(C)][static_cast<std::size_t>(A)][static_cast<std::size_t>(B)];
  };
  ClosednessResult res;
  for (int A = 0; A < m; ++A) {
    for (int B = A + 1; B < m; ++B) {
      for (int C = B + 1; C < m; ++C) res.d_omega = std::max(res.d_omega, std::abs(d(A, B, C) + d(B, C, A) + d(C, A, B)));
    }
  }
  const Matrix& O = omega_at(flat);
  for (int A = 0; A < m; ++A) {
    for (int B = 0; B < m; ++B) {
      const double dwAB = dw[static_cast<std::size_t>(A)][static_cast<std::size_t>(B)] - dw[static_cast<std::size_t>(B)][static_cast<std::size_t>(A)];
      res.omega_plus_dw = std::max(res.omega_plus_dw, std::abs(O[static_cast<std::size_t>(A)][static_cast<std::size_t>(B)] + dwAB));
    }
  }
  return res;
}

NijenhuisResult nijenhuis(const ProductGeometry& pg) {
  const int n1 = pg.n1();
  const int n2 = pg.n2();
  const int n = pg.n();
  const int m = 2 * n;
  const auto fb = frame_brackets(pg);
  auto br = [&](const FrameVector& X, const FrameVector& Y) { return frame_bracket(fb, X, Y); };
  NijenhuisResult res;
  for (int A = 0; A < m; ++A) {
    for (int B = 0; B < m; ++B) {
      const auto X = basis(n1, n2, A);
      const auto Y = basis(n1, n2, B);
      const auto JX = apply_J(X);
      const auto JY = apply_J(Y);
      res.direct.push_back(br(JX, JY) - apply_J(br(JX, Y)) - apply_J(br(X, JY)) - br(X, Y));

      FrameVector c(n1, n2);
      for (int e = 0; e < n; ++e) {
        if (A < n && B < n) {
          c.v(e) = -fb.R(e, A, B);
        } else if (A >= n && B >= n) {
          c.v(e) = fb.R(e, A - n, B - n);
        } else if (A < n) {
          c.h(e) = -fb.R(e, A, B - n);
        } else {
          c.h(e) = fb.R(e, B, A - n);
        }
      }
      res.closed.push_back(std::move(c));
    }
  }
  for (int A = 0; A < m; ++A) {
    for (int B = 0; B < m; ++B) {
      const auto& dv = res.direct[static_cast<std::size_t>(A * m + B)];
      res.agreement = std::max(res.agreement, max_abs(dv - res.closed[static_cast<std::size_t>(A * m + B)]));
      res.max_norm = std::max(res.max_norm, max_abs(dv));
      res.skew = std::max(res.skew, max_abs(dv + res.direct[static_cast<std::size_t>(B * m + A)]));
    }
  }
  return res;
}

KahlerVerdict kahler_verdict(const ProductConfig& cfg, const std::vector<TangentSample>& region, double tol,
                             double tol_n) {
  if (region.empty()) fail(ErrorKind::Precondition, "Kähler verdict needs at least one sample point");
  KahlerVerdict v;
  for (const auto& p : region) {
    const ProductGeometry pg(cfg, p, 4);
    v.max_R = std::max(v.max_R, frame_brackets(pg).R.max_abs());
    v.max_N = std::max(v.max_N, nijenhuis(pg).max_norm);
  }
  v.kahler = v.max_R <= tol;
  v.consistent = (v.max_N <= tol_n) == v.kahler;
  return v;
}

TotallyGeodesic totally_geodesic_verdicts(const ProductConfig& cfg, const std::vector<TangentSample>& region,
                                          double tol) {
  if (region.size() < 20) fail(ErrorKind::Precondition, "totally-geodesic verdicts need at least 20 sample points");
  TotallyGeodesic v;
  for (const auto& p : region) {
    const ProductGeometry pg(cfg, p, 4);
    const int n = pg.n();
    const auto fb = frame_brackets(pg);
    v.max_F_minus_G = std::max(v.max_F_minus_G, horizontal_coefficients(pg).max_abs_diff(fb.Gc));
    v.max_C = std::max(v.max_C, cartan_tensor(pg).max_abs());
    v.max_R = std::max(v.max_R, fb.R.max_abs());
    const auto K = koszul_levi_civita(pg);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        v.koszul_vertical = std::max(v.koszul_vertical, max_abs(horizontal_projector(K.table.at(n + a, n + b))));
        v.koszul_horizontal = std::max(v.koszul_horizontal, max_abs(vertical_projector(K.table.at(a, b))));
      }
    }
  }
  v.vertical = v.max_F_minus_G <= tol;
  v.horizontal = v.max_C <= tol && v.max_R <= tol;
  v.consistent = ((v.koszul_vertical <= tol) == v.vertical) && ((v.koszul_horizontal <= tol) == v.horizontal);
  return v;
}

}  // namespace dwf
