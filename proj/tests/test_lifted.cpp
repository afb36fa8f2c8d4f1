#include <doctest.h>

#include <cmath>
#include <iostream>

#include "dwf/error.hpp"
#include "dwf/finsler_core.hpp"
#include "dwf/lifted.hpp"

using namespace dwf;

namespace {

TangentSample pt(int n1, double s) {
  if (n1 == 1) return {{0.2 + s}, {-0.4 + s}, {0.7}, {1.3 - s}};
  return {{0.3 + s, -0.2}, {0.4, 0.7 - s}, {0.8, -0.5 + s}, {0.6 + s, 1.1}};
}

std::vector<TangentSample> region(int n1, int count) {
  std::vector<TangentSample> r;
  for (int k = 0; k < count; ++k) r.push_back(pt(n1, 0.03 * k - 0.3));
  return r;
}

}  // namespace

TEST_CASE("lifted metric hand value and block orthogonality") {
  ProductGeometry pg(fixture("FIX-1D"), {{0.0}, {1.0}, {1.0}, {1.0}});
  const auto G = lifted_metric(pg);
  const auto d1 = FrameVector::horizontal_basis(1, 1, 0);
  const auto v1 = FrameVector::vertical_basis(1, 1, 0);
  CHECK(G(d1, d1) == doctest::Approx(2.0));
  CHECK(G(d1, v1) == 0.0);
  CHECK(symplectic_form(G, d1, v1) == doctest::Approx(2.0));
  CHECK(symplectic_form(G, d1, d1) == 0.0);
}

TEST_CASE("Koszul connection is metric and torsion free on every fixture") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto cfg = fixture(name);
    ProductGeometry pg(cfg, pt(cfg.n1(), 0.1));
    const auto K = koszul_levi_civita(pg);
    CHECK(K.compatibility <= 1e-7);
    CHECK(K.torsion <= 1e-7);
    const auto L = levi_civita_closed_forms(pg, K.table);
    for (const auto& b : L.blocks) {
      MESSAGE(name << " " << b.name << " " << b.max_abs);
      if (name == "FIX-P") CHECK(b.max_abs <= 1e-7);
    }
    const auto V = vaisman_connection(pg);
    CHECK(V.preservation <= 1e-8);
    CHECK(V.metricity <= 1e-8);
    CHECK(V.torsion <= 1e-8);
    const auto I = induced_vertical_connection(K.table);
    const double gap = same_connection_gap(I, V.table);
    const double fg = horizontal_coefficients(pg).max_abs_diff(frame_brackets(pg).Gc);
    MESSAGE(name << " gap " << gap << " F-G " << fg);
    CHECK((gap <= 1e-7) == (fg <= 1e-7));
    const auto N = nijenhuis(pg);
    CHECK(N.agreement <= 1e-7);
    CHECK(N.skew <= 1e-10);
    const auto C = closedness_check(cfg, pg.sample());
    MESSAGE(name << " dO " << C.d_omega << " O+dw " << C.omega_plus_dw);
    CHECK(C.d_omega <= 1e-5);
    CHECK(C.omega_plus_dw <= 1e-5);
  }
}

TEST_CASE("Reinhart defect against the factor Cartan identity") {
  const auto cfg = fixture("FIX-R");
  ProductGeometry pg(cfg, pt(2, 0.1));
  const auto V = vaisman_connection(pg);
  FrameVector X(2, 2), Y(2, 2), Z(2, 2);
  X.v(2) = 1.0; X.v(3) = 0.5; X.v(0) = 0.3;
  Y.h(2) = 0.7; Y.h(3) = -1.0; Y.h(1) = 0.2;
  Z.h(2) = 1.0; Z.h(0) = 0.4;
  const auto r = reinhart_defect(pg, V, X, Y, Z);
  CHECK(std::abs(r.defect) > 1e-3);
  CHECK(r.defect == doctest::Approx(r.identity).epsilon(1e-8));
  CHECK_THROWS_AS(reinhart_defect(pg, V, Y, Y, Z), Error);
  ProductGeometry pe(fixture("FIX-E"), pt(2, 0.1));
  CHECK(std::abs(reinhart_defect(pe, vaisman_connection(pe), X, Y, Z).defect) <= 1e-10);
}

TEST_CASE("J, Hermitian property and Kähler verdicts") {
  ProductGeometry pg(fixture("FIX-E"), pt(2, 0.0));
  const auto G = lifted_metric(pg);
  FrameVector X(2, 2), Y(2, 2);
  for (int k = 0; k < 8; ++k) {
    X.components()[k] = 0.1 * k - 0.3;
    Y.components()[k] = std::sin(k + 1.0);
  }
  CHECK(apply_J(apply_J(X)) == -1.0 * X);
  CHECK(std::abs(G(apply_J(X), apply_J(Y)) - G(X, Y)) <= 1e-10);
  const auto kp = kahler_verdict(fixture("FIX-P"), region(2, 3));
  CHECK(kp.kahler);
  CHECK(kp.consistent);
  const auto ke = kahler_verdict(fixture("FIX-E"), region(2, 3));
  CHECK_FALSE(ke.kahler);
  CHECK(ke.consistent);
}

TEST_CASE("totally geodesic verdicts") {
  const auto tp = totally_geodesic_verdicts(fixture("FIX-P"), region(2, 20));
  CHECK(tp.vertical);
  CHECK(tp.horizontal);
  CHECK(tp.consistent);
  const auto tr = totally_geodesic_verdicts(fixture("FIX-R"), region(2, 20));
  CHECK_FALSE(tr.vertical);
  CHECK(tr.consistent);
  const auto te = totally_geodesic_verdicts(fixture("FIX-E"), region(2, 20));
  MESSAGE("FIX-E vertical " << te.vertical << " horizontal " << te.horizontal << " kv " << te.koszul_vertical
                            << " kh " << te.koszul_horizontal);
  CHECK(te.consistent);
  CHECK_THROWS_AS(totally_geodesic_verdicts(fixture("FIX-P"), region(2, 5)), Error);
}
