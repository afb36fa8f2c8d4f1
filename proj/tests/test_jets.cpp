#include <cmath>
#include <random>

#include "doctest.h"
#include "dwf/error.hpp"
#include "dwf/jet.hpp"
#include "dwf/lift.hpp"

using namespace dwf;

namespace {

TangentSample sample_1d(double x, double u, double y, double v) { return {{x}, {u}, {y}, {v}}; }

constexpr CoordIndex kX{Block::Base1, 0};
constexpr CoordIndex kU{Block::Base2, 0};
constexpr CoordIndex kY{Block::Fiber1, 0};
constexpr CoordIndex kV{Block::Fiber2, 0};

}  // namespace

TEST_CASE("polynomial lift is exact") {
  const ScalarField f = [](std::span<const Jet> c) { return c[0] * c[0]; };
  const std::vector<CoordIndex> seeds{kX};
  const auto j = jet_lift(f, sample_1d(3, 0, 1, 1), seeds, 2);
  CHECK(j.value() == 9.0);
  CHECK(j.partial({{kX, 1}}) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(j.partial({{kX, 2}}) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("constant field has zero partials") {
  const ScalarField f = [](std::span<const Jet>) { return Jet(5.0); };
  const std::vector<CoordIndex> seeds{kX, kY};
  const auto j = jet_lift(f, sample_1d(0.3, 0.1, 1, 1), seeds, 3);
  CHECK(j.value() == 5.0);
  CHECK(j.partial({{kX, 1}}) == 0.0);
  CHECK(j.partial({{kX, 2}, {kY, 1}}) == 0.0);
}

TEST_CASE("mixed partial of y^2 v") {
  // Oracle: d^2/dy^2 d/dv (y^2 v) = 2.
  const ScalarField f = [](std::span<const Jet> c) { return c[2] * c[2] * c[3]; };
  const std::vector<CoordIndex> seeds{kY, kV};
  const auto j = jet_lift(f, sample_1d(0, 0, 1, 2), seeds, 3);
  CHECK(j.partial({{kY, 2}, {kV, 1}}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(j.partial({{kY, 1}}) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("order above six is a capability error") {
  const ScalarField f = [](std::span<const Jet> c) { return c[0]; };
  const std::vector<CoordIndex> seeds{kX};
  try {
    jet_lift(f, sample_1d(0, 0, 1, 1), seeds, 7);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Capability);
  }
}

TEST_CASE("slit violation is a domain error") {
  const ScalarField f = [](std::span<const Jet> c) { return c[0]; };
  const std::vector<CoordIndex> seeds{kX};
  try {
    jet_lift(f, sample_1d(0, 0, 0, 1), seeds, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("sqrt of x^2 at 2") {
  // |x| has slope 1 and zero curvature for x > 0.
  const auto layout = JetLayout::get(1);
  const Jet x = Jet::variable(layout, 2, 0, 2.0);
  const Jet r = sqrt(x * x);
  CHECK(r.value() == doctest::Approx(2.0));
  CHECK(r.d(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(r.dd(0, 0)) < 1e-14);
}

TEST_CASE("identity and quotient rules") {
  const auto layout = JetLayout::get(1);
  const Jet x = Jet::variable(layout, 3, 0, 1.0);
  const Jet f = 1.0 + x * x;
  const Jet one = Jet::constant(layout, 3, 1.0);
  const Jet g = exp(x) * f;
  const Jet prod = one * g;
  for (std::size_t k = 0; k < g.coefficients().size(); ++k) CHECK(prod.coefficients()[k] == g.coefficients()[k]);
  const Jet q = f / f;
  CHECK(q.value() == doctest::Approx(1.0));
  for (int k = 1; k <= 3; ++k) {
    std::vector<int> e{k};
    CHECK(std::abs(q.partial(e)) < 1e-14);
  }
}

TEST_CASE("domain errors for division and sqrt") {
  const auto layout = JetLayout::get(1);
  const Jet x = Jet::variable(layout, 2, 0, 0.0);
  CHECK_THROWS_AS(reciprocal(x), Error);
  CHECK_THROWS_AS(sqrt(x), Error);
  CHECK_THROWS_AS(sqrt(x - 1.0), Error);
}

TEST_CASE("elementary functions match closed-form derivatives") {
  const auto layout = JetLayout::get(1);
  const double a = 0.7;
  const Jet x = Jet::variable(layout, 6, 0, a);
  const Jet e = exp(x);
  const Jet l = log(x);
  const Jet s = sqrt(x);
  const Jet p = pow(x, -3);
  double fall_sqrt = 1.0, fall_pow = 1.0;
  for (int k = 0; k <= 6; ++k) {
    std::vector<int> ex{k};
    CHECK(e.partial(ex) == doctest::Approx(std::exp(a)).epsilon(1e-13));
    if (k >= 1) {
      const double lk = std::pow(-1.0, k - 1) * std::tgamma(k) / std::pow(a, k);
      CHECK(l.partial(ex) == doctest::Approx(lk).epsilon(1e-12));
    }
    CHECK(s.partial(ex) == doctest::Approx(fall_sqrt * std::pow(a, 0.5 - k)).epsilon(1e-12));
    CHECK(p.partial(ex) == doctest::Approx(fall_pow * std::pow(a, -3.0 - k)).epsilon(1e-12));
    fall_sqrt *= (0.5 - k);
    fall_pow *= (-3.0 - k);
  }
}

TEST_CASE("mixed partials are symmetric under seed permutation") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5);
  // Random cubic in (x, u, y): compare partials with seeds in two orders.
  std::vector<std::array<int, 4>> terms;
  for (int t = 0; t < 12; ++t) {
    terms.push_back({coef(rng), std::abs(coef(rng)) % 3, std::abs(coef(rng)) % 3, std::abs(coef(rng)) % 3});
  }
  const ScalarField f = [&](std::span<const Jet> c) {
    Jet s(0.0);
    for (const auto& t : terms) s += static_cast<double>(t[0]) * pow(c[0], t[1]) * pow(c[1], t[2]) * pow(c[2], t[3]);
    return s;
  };
  const auto p = sample_1d(0.4, -0.3, 0.8, 1.0);
  const std::vector<CoordIndex> s1{kX, kU, kY};
  const std::vector<CoordIndex> s2{kY, kX, kU};
  const auto j1 = jet_lift(f, p, s1, 4);
  const auto j2 = jet_lift(f, p, s2, 4);
  for (int a = 0; a <= 2; ++a) {
    for (int b = 0; b <= 2; ++b) {
      for (int c = 0; a + b + c <= 4 && c <= 2; ++c) {
        MultiIndex m;
        if (a) m.add(kX, a);
        if (b) m.add(kU, b);
        if (c) m.add(kY, c);
        CHECK(j1.partial(m) == j2.partial(m));
      }
    }
  }
}

TEST_CASE("jet product equals product of jets") {
  const auto p = sample_1d(0.5, 0.2, 1.3, -0.7);
  const std::vector<CoordIndex> seeds{kX, kU, kY, kV};
  const ScalarField f = [](std::span<const Jet> c) { return 1.0 + c[0] * c[2] * c[2] - 2.0 * c[1] * c[3]; };
  const ScalarField g = [](std::span<const Jet> c) { return c[0] * c[0] * c[1] + 3.0 * c[3] * c[2]; };
  const ScalarField fg = [&](std::span<const Jet> c) { return f(c) * g(c); };
  const auto jf = jet_lift(f, p, seeds, 4);
  const auto jg = jet_lift(g, p, seeds, 4);
  const auto jfg = jet_lift(fg, p, seeds, 4);
  const Jet prod = jf.jet * jg.jet;
  for (std::size_t k = 0; k < prod.coefficients().size(); ++k) {
    CHECK(prod.coefficients()[k] == doctest::Approx(jfg.jet.coefficients()[k]).epsilon(1e-12));
  }
}

TEST_CASE("fd oracle") {
  const auto p = sample_1d(1.0, 0.0, 2.0, 1.0);
  const ScalarField cube = [](std::span<const Jet> c) { return c[0] * c[0] * c[0]; };
  CHECK(std::abs(fd_partial(cube, p, MultiIndex{{kX, 2}}, 1e-3) - 6.0) < 1e-6);
  const ScalarField constant = [](std::span<const Jet>) { return Jet(4.0); };
  CHECK(std::abs(fd_partial(constant, p, MultiIndex{{kX, 1}, {kY, 1}})) < 1e-10);
  const ScalarField sq = [](std::span<const Jet> c) { return c[2] * c[2]; };
  CHECK(std::abs(fd_partial(sq, p, MultiIndex{{kY, 1}}) - 4.0) < 1e-8);
  CHECK_THROWS_AS(fd_partial(sq, p, MultiIndex{{kY, 2}, {kX, 2}}), Error);
}

TEST_CASE("multi-index validation") {
  MultiIndex m;
  m.add(kX, 3);
  CHECK_THROWS_AS(m.add(kX, 1), Error);
  m.add(kY, 3);
  CHECK_THROWS_AS(m.add(kU, 1), Error);
}
