#include <doctest.h>

#include <cmath>

#include "dwf/connection.hpp"
#include "dwf/curvature.hpp"
#include "dwf/error.hpp"
#include "dwf/finsler_core.hpp"

using namespace dwf;

namespace {

TangentSample sample_1d() { return {{0.0}, {1.0}, {1.0}, {1.0}}; }

TangentSample sample_2x2(double s = 0.0) {
  return {{0.3 + s, -0.2}, {0.4, 0.7 - s}, {0.8, -0.5 + s}, {0.6 + s, 1.1}};
}

double max_of(const std::vector<BlockDiscrepancy>& v) {
  double m = 0.0;
  for (const auto& e : v) m = std::max(m, e.max_abs);
  return m;
}

}  // namespace

TEST_CASE("F^2 hand values") {
  const auto cfg = fixture("FIX-1D");
  const auto p = sample_1d();
  CHECK(eval_F2(cfg, p, {}, 0).value() == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("fundamental tensor block structure") {
  for (const auto& name : fixture_names()) {
    const auto cfg = fixture(name);
    TangentSample p = cfg.n1() == 1 ? sample_1d() : sample_2x2();
    const auto m = fundamental_tensor(cfg, p);
    CHECK(m.g.max_abs_mixed() <= 1e-12);
  }
}

TEST_CASE("spray and nonlinear connection hand values on FIX-1D") {
  const auto cfg = fixture("FIX-1D");
  ProductGeometry pg(cfg, sample_1d());
  const auto G = spray(pg);
  const auto Gd = spray(pg, SprayPath::ProductDecomposed);
  CHECK(G.G(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(G.G(1) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(Gd.G.max_abs_diff(G.G) <= 1e-12);
  const auto N = nonlinear_connection(pg);
  CHECK(N(0, 0) == doctest::Approx(0.5));
  CHECK(N(0, 1) == doctest::Approx(0.5));
  CHECK(N(1, 0) == doctest::Approx(-1.0));
  CHECK(std::abs(N(1, 1)) <= 1e-12);
  const auto Gc = berwald_connection_closed(pg);
  CHECK(Gc(1, 0, 0) == doctest::Approx(-1.0));
  const auto F = horizontal_coefficients(pg);
  CHECK(F(0, 0, 1) == doctest::Approx(0.5));
}

TEST_CASE("closed forms agree with generic jets on every fixture") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto cfg = fixture(name);
    for (double s : {0.0, 0.13}) {
      TangentSample p = cfg.n1() == 1 ? TangentSample{{0.2 + s}, {-0.4}, {0.7}, {1.3 - s}} : sample_2x2(s);
      ProductGeometry pg(cfg, p);
      CHECK(spray(pg, SprayPath::ProductDecomposed).G.max_abs_diff(spray(pg).G) <= 1e-9);
      CHECK(max_of(block_discrepancies(nonlinear_connection(pg), nonlinear_connection_closed(pg))) <= 1e-8);
      CHECK(max_of(block_discrepancies(frame_brackets(pg).Gc, berwald_connection_closed(pg))) <= 1e-8);
      CHECK(max_of(block_discrepancies(horizontal_coefficients(pg), horizontal_coefficients_closed(pg))) <= 1e-8);
      for (const auto& b : berwald_closed_blocks(pg)) {
        CAPTURE(b.name);
        CHECK(b.max_abs <= 1e-7);
      }
      const auto Rm = riemann_map(pg);
      CHECK(Rm.max_abs_diff(riemann_map_from_hh(pg)) <= 1e-6 * (1.0 + Rm.max_abs()));
    }
  }
}

TEST_CASE("con1 and scalar flag on FIX-E") {
  const auto cfg = fixture("FIX-E");
  TangentSample p{{0.0, 0.0}, {1.0, 0.0}, {0.4, -0.9}, {0.7, 0.2}};
  ProductGeometry pg(cfg, p);
  const auto R = hh_curvature(pg);
  CHECK(R(1, 0, 0, 1) == doctest::Approx(0.5).epsilon(1e-9));
  const auto ff = flat_factor_residual(pg);
  CHECK(ff.latin <= 1e-6);
  CHECK(ff.greek_checked);
  CHECK(ff.greek <= 1e-6);
  const auto fit = scalar_flag_residual(pg);
  CHECK(fit.lambda == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(fit.defect <= 1e-6);
  auto swapped = fixture("FIX-R");
  std::swap(swapped.factor1, swapped.factor2);
  std::swap(swapped.f1, swapped.f2);
  CHECK_THROWS_AS(flat_factor_residual(ProductGeometry(swapped, p)), Error);
}

TEST_CASE("flag curvature invariances") {
  const auto cfg = fixture("FIX-E");
  ProductGeometry pg(cfg, sample_2x2());
  const std::vector<double> u{0.3, -1.0, 0.5, 0.2};
  const auto& s = pg.sample();
  const std::vector<double> y{s.y[0], s.y[1], s.v[0], s.v[1]};
  const double K = flag_curvature(pg, u);
  std::vector<double> u2(4), u3(4);
  for (int a = 0; a < 4; ++a) {
    u2[a] = u[a] + 0.7 * y[a];
    u3[a] = 3.0 * u[a];
  }
  CHECK(flag_curvature(pg, u2) == doctest::Approx(K).epsilon(1e-8));
  CHECK(flag_curvature(pg, u3) == doctest::Approx(K).epsilon(1e-8));
  CHECK_THROWS_AS(flag_curvature(pg, y), Error);
}
