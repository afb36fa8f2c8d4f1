#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <random>

#include "dwf/connection.hpp"
#include "dwf/curvature.hpp"
#include "dwf/error.hpp"
#include "dwf/finsler_core.hpp"
#include "dwf/lab.hpp"
#include "dwf/lifted.hpp"

namespace dwf {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json point_json(const TangentSample& p) { return {{"x", p.x}, {"u", p.u}, {"y", p.y}, {"v", p.v}}; }

std::vector<double> combined_y(const TangentSample& p) {
  std::vector<double> y = p.y;
  y.insert(y.end(), p.v.begin(), p.v.end());
  return y;
}

double rel(double diff, double scale) { return std::abs(diff) / std::max(1.0, std::abs(scale)); }

// Running max of one check over the sample points.
struct Acc {
  std::string name;
  double tol = 0.0;
  bool recorded = false;
  double residual = 0.0;
  int point = -1;
  json detail;
  std::string note;
  json extra;

  void record(int k, double r, json d = json::object()) {
    if (std::isnan(r)) r = kInf;
    if (!recorded || r > residual) {
      residual = r;
      point = k;
      detail = std::move(d);
    }
    recorded = true;
  }
  void skip(const std::string& why) {
    if (note.empty()) note = why;
  }
};

// Portable string hash (std::hash is implementation-defined).
std::uint32_t fnv1a(const std::string& s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char ch : s) h = (h ^ ch) * 16777619u;
  return h;
}

class Ctx {
 public:
  Ctx(const RunSpec& spec, const std::vector<TangentSample>& pts) : spec_(spec), pts_(pts), cache_(pts.size()) {}

  const ProductConfig& cfg() const { return spec_.config; }
  const RunSpec& spec() const { return spec_; }
  int count() const { return static_cast<int>(pts_.size()); }
  const TangentSample& sample(int k) const { return pts_[static_cast<std::size_t>(k)]; }
  const ProductGeometry& pg(int k) {
    auto& slot = cache_[static_cast<std::size_t>(k)];
    if (!slot) slot = std::make_unique<ProductGeometry>(spec_.config, sample(k));
    return *slot;
  }
  // Per-suite, per-point stream so suites do not depend on each other.
  std::mt19937_64 rng(const std::string& suite, int k) const {
    std::seed_seq seq{static_cast<std::uint32_t>(spec_.sampling.seed), static_cast<std::uint32_t>(spec_.sampling.seed >> 32),
                      fnv1a(suite),
                      static_cast<std::uint32_t>(k)};
    return std::mt19937_64(seq);
  }

 private:
  const RunSpec& spec_;
  const std::vector<TangentSample>& pts_;
  std::vector<std::unique_ptr<ProductGeometry>> cache_;
};

using Checks = std::map<std::string, Acc>;
using PointBody = std::function<void(Ctx&, Checks&, int)>;
using SuiteBody = std::function<void(Ctx&, Checks&)>;

struct SuiteDef {
  std::string name;
  std::vector<CheckInfo> checks;
  SuiteBody body;
};

double uniform_pm1(std::mt19937_64& rng) { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; }

FrameVector random_frame(std::mt19937_64& rng, int n1, int n2, bool horizontal, bool vertical) {
  FrameVector X(n1, n2);
  for (int a = 0; a < n1 + n2; ++a) {
    if (horizontal) X.h(a) = uniform_pm1(rng);
    if (vertical) X.v(a) = uniform_pm1(rng);
  }
  return X;
}

json frame_json(const FrameVector& X) { return X.components(); }

// Runs body at each point; a Precondition error skips the suite, other
// engine errors count as an infinite residual at that point.
SuiteBody per_point(PointBody body) {
  return [body = std::move(body)](Ctx& ctx, Checks& checks) {
    for (int k = 0; k < ctx.count(); ++k) {
      try {
        body(ctx, checks, k);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Precondition) {
          for (auto& [_, acc] : checks) acc.skip(e.what());
          return;
        }
        for (auto& [_, acc] : checks) {
          acc.record(k, kInf, {{"error", std::string(to_string(e.kind())) + ": " + e.what()}});
        }
      }
    }
  };
}

double max_block(const std::vector<BlockDiscrepancy>& v, json& where) {
  double m = -1.0;
  for (const auto& b : v) {
    if (b.max_abs > m) {
      m = b.max_abs;
      where = {{"block", b.block}, {"indices", b.witness}};
    }
  }
  return std::max(m, 0.0);
}

// ---- homogeneity ------------------------------------------------------------

void homogeneity(Ctx& ctx, Checks& c, int k) {
  const auto& pg = ctx.pg(k);
  const auto& p = pg.sample();
  const int n = pg.n();
  const auto y = combined_y(p);
  constexpr double lam = 1.7;
  const ProductGeometry scaled(ctx.cfg(), p.scaled(lam), 4);
  const ProductGeometry doubled(ctx.cfg(), p.scaled(2.0), 2);

  const auto g = fundamental_tensor(pg).g;
  const auto gs = fundamental_tensor(scaled).g;
  c["homogeneity/g-scaling"].record(k, gs.max_abs_diff(g) / std::max(1.0, g.max_abs()));

  const auto G = spray(pg).G;
  const auto G2 = spray(doubled).G;
  double r = 0.0;
  for (int a = 0; a < n; ++a) r = std::max(r, rel(G2(a) - 4.0 * G(a), 4.0 * G.max_abs()));
  c["homogeneity/spray"].record(k, r);

  const auto N = nonlinear_connection(pg);
  r = 0.0;
  for (int a = 0; a < n; ++a) {
    double s = 0.0;
    for (int b = 0; b < n; ++b) s += N(a, b) * y[static_cast<std::size_t>(b)];
    r = std::max(r, rel(s - 2.0 * G(a), G.max_abs()));
  }
  c["homogeneity/euler-N"].record(k, r);

  const auto Gc = frame_brackets(pg).Gc;
  r = 0.0;
  json where;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int d = 0; d < n; ++d) s += Gc(a, b, d) * y[static_cast<std::size_t>(d)];
      const double e = rel(s - N(a, b), N.max_abs());
      if (e >= r) {
        r = e;
        where = {{"a", a}, {"b", b}, {"block", std::string(pg.latin(a) ? "L" : "G") + (pg.latin(b) ? "L" : "G")}};
      }
    }
  }
  c["homogeneity/euler-Gc"].record(k, r, where);

  const auto C = cartan_tensor(pg);
  const auto h = angular_metric(pg);
  double rc = 0.0;
  double rh = 0.0;
  for (int a = 0; a < n; ++a) {
    double sh = 0.0;
    for (int b = 0; b < n; ++b) {
      double sc = 0.0;
      for (int d = 0; d < n; ++d) sc += C(a, b, d) * y[static_cast<std::size_t>(d)];
      rc = std::max(rc, std::abs(sc));
      sh += h(a, b) * y[static_cast<std::size_t>(b)];
    }
    rh = std::max(rh, std::abs(sh));
  }
  c["homogeneity/cartan-y"].record(k, rc);
  c["homogeneity/angular-y"].record(k, rh);

  const auto R = riemann_map(pg);
  const auto Rs = riemann_map(scaled);
  r = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) r = std::max(r, rel(Rs(a, b) - lam * lam * R(a, b), lam * lam * R.max_abs()));
  }
  c["homogeneity/riemann-scaling"].record(k, r);
}

// ---- block structure --------------------------------------------------------

void block_structure(Ctx& ctx, Checks& c, int k) {
  const auto& pg = ctx.pg(k);
  const int n1 = pg.n1();
  const int n2 = pg.n2();
  const double W1 = pg.w1().value();
  const double W2 = pg.w2().value();
  const auto& A = pg.factor1();
  const auto& B = pg.factor2();

  const auto g = fundamental_tensor(pg).g;
  c["block-structure/g-mixed"].record(k, g.max_abs_mixed());
  double r = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) r = std::max(r, std::abs(g(i, j) - W2 * A.g().val(i, j)));
  for (int a = 0; a < n2; ++a)
    for (int b = 0; b < n2; ++b) r = std::max(r, std::abs(g(n1 + a, n1 + b) - W1 * B.g().val(a, b)));
  c["block-structure/g-blocks"].record(k, r);

  const auto C = cartan_tensor(pg);
  c["block-structure/cartan-mixed"].record(k, C.max_abs_mixed());
  r = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j)
      for (int l = 0; l < n1; ++l) r = std::max(r, std::abs(C(i, j, l) - W2 * A.cartan().val(i, j, l)));
  for (int a = 0; a < n2; ++a)
    for (int b = 0; b < n2; ++b)
      for (int d = 0; d < n2; ++d)
        r = std::max(r, std::abs(C(n1 + a, n1 + b, n1 + d) - W1 * B.cartan().val(a, b, d)));
  c["block-structure/cartan-blocks"].record(k, r);

  const auto I = mean_cartan(pg);
  r = 0.0;
  for (int i = 0; i < n1; ++i) r = std::max(r, std::abs(I(i) - A.mean_cartan().val(i)));
  for (int a = 0; a < n2; ++a) r = std::max(r, std::abs(I(n1 + a) - B.mean_cartan().val(a)));
  c["block-structure/mean-cartan"].record(k, r);

  const auto G = spray(pg).G;
  const auto Gd = spray(pg, SprayPath::ProductDecomposed).G;
  c["block-structure/spray-decomposition"].record(k, Gd.max_abs_diff(G) / std::max(1.0, G.max_abs()));

  auto closed = [&](const char* name, const BlockTensor& gen, const BlockTensor& cl) {
    json where;
    const double m = max_block(block_discrepancies(gen, cl), where);
    c[name].record(k, m / std::max(1.0, gen.max_abs()), where);
  };
  closed("block-structure/N-closed", nonlinear_connection(pg), nonlinear_connection_closed(pg));
  closed("block-structure/Gc-closed", frame_brackets(pg).Gc, berwald_connection_closed(pg));
  closed("block-structure/F-closed", horizontal_coefficients(pg), horizontal_coefficients_closed(pg));

  auto rng = ctx.rng("block-structure", k);
  const auto X = random_frame(rng, n1, n2, true, true);
  double pr = 0.0;
  for (const auto& D : {horizontal_projector(X) + vertical_projector(X) - X, almost_tangent(almost_tangent(X)),
                        almost_tangent(horizontal_projector(X)) - almost_tangent(X)}) {
    for (double e : D.components()) pr = std::max(pr, std::abs(e));
  }
  pr = std::max(pr, horizontal_projector(X).is_horizontal() && vertical_projector(X).is_vertical() ? 0.0 : 1.0);
  c["block-structure/projectors"].record(k, pr, {{"X", frame_json(X)}});
}

// ---- yF = G -------------------------------------------------------------------

void yf_equals_g(Ctx& ctx, Checks& c, int k) {
  const auto& pg = ctx.pg(k);
  const int n = pg.n();
  const auto y = combined_y(pg.sample());
  const auto F = horizontal_coefficients(pg);
  const auto N = nonlinear_connection(pg);
  double r = 0.0;
  json where;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int d = 0; d < n; ++d) s += y[static_cast<std::size_t>(d)] * F(a, b, d);
      const double e = rel(s - N(a, b), N.max_abs());
      if (e >= r) {
        r = e;
        where = {{"a", a}, {"b", b}, {"yF", s}, {"N", N(a, b)}};
      }
    }
  }
  c["yF=G/identity"].record(k, r, where);
}

// ---- Matsumoto contraction ---------------------------------------------------

void matsumoto(Ctx& ctx, Checks& c, int k) {
  const auto& pg = ctx.pg(k);
  const auto& p = pg.sample();
  const int n1 = pg.n1();
  const int n2 = pg.n2();
  const int n = pg.n();
  const auto M = matsumoto_torsion(pg);
  const auto I = mean_cartan(pg);
  const double W1 = pg.w1().value();
  const double W2 = pg.w2().value();
  const double F1 = pg.F1sq().value();
  const double F2 = pg.F2sq().value();
  const double Fsq = pg.product().F2().value();
  auto& acc = c["matsumoto-contraction/mat2"];
  double r = 0.0;
  json where;
  for (int a = 0; a < n2; ++a) {
    double lhs = 0.0;
    for (int j = 0; j < n1; ++j)
      for (int l = 0; l < n1; ++l) lhs += p.y[static_cast<std::size_t>(j)] * p.y[static_cast<std::size_t>(l)] * M(n1 + a, j, l);
    const double rhs = -W1 * W2 * F1 * F2 / ((n + 1) * Fsq) * I(n1 + a);
    const double e = rel(lhs - rhs, rhs);
    if (e >= r) {
      r = e;
      where = {{"alpha", a}, {"lhs", lhs}, {"rhs", rhs}};
    }
    const double mag = std::min(std::abs(lhs), std::abs(rhs));
    if (acc.extra.is_null() || mag > acc.extra["magnitude"].get<double>()) {
      acc.extra = {{"magnitude", mag}, {"point", k}, {"alpha", a}, {"lhs", lhs}, {"rhs", rhs}};
    }
  }
  acc.record(k, r, where);

  const auto y = combined_y(p);
  double ry = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int d = 0; d < n; ++d) s += M(a, b, d) * y[static_cast<std::size_t>(d)];
      ry = std::max(ry, std::abs(s));
    }
  c["matsumoto-contraction/M-y"].record(k, ry);
}

// ---- Berwald blocks ----------------------------------------------------------

const std::vector<std::string>& berwald_block_names() {
  static const std::vector<std::string> names{"B^k_ijl", "B^k_ibl", "B^k_abl", "B^k_abc", "B^k_ibc",
                                              "B^g_abc", "B^g_ibc", "B^g_ijc", "B^g_ijk", "B^g_ibk"};
  return names;
}

void berwald_blocks(Ctx& ctx, Checks& c, int k) {
  const auto& pg = ctx.pg(k);
  const auto B = berwald_curvature(pg);
  for (const auto& blk : berwald_closed_blocks(pg)) {
    c["berwald-blocks/" + blk.name].record(k, blk.max_abs / std::max(1.0, B.max_abs()), {{"indices", blk.witness}});
  }
  const int n = pg.n();
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < n; ++e) {
          r = std::max(r, std::abs(B(a, b, d, e) - B(a, d, b, e)));
          r = std::max(r, std::abs(B(a, b, d, e) - B(a, b, e, d)));
        }
  c["berwald-blocks/symmetry"].record(k, r);
  auto& acc = c["berwald-blocks/symmetry"];
  if (acc.extra.is_null() || B.max_abs() > acc.extra["max_B"].get<double>()) acc.extra = {{"max_B", B.max_abs()}, {"point", k}};
}

// ---- y^b R_b^a_cd = R^a_cd ----------------------------------------------------

void lemma41(Ctx& ctx, Checks& c, int k) {
  const auto& pg = ctx.pg(k);
  const int n = pg.n();
  const auto y = combined_y(pg.sample());
  const auto Rhh = hh_curvature(pg);
  const auto Rb = frame_brackets(pg).R;
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d)
      for (int e = 0; e < n; ++e) {
        double s = 0.0;
        for (int b = 0; b < n; ++b) s += y[static_cast<std::size_t>(b)] * Rhh(b, a, d, e);
        r = std::max(r, rel(s - Rb(a, d, e), Rb.max_abs()));
      }
  c["lemma41/identity"].record(k, r);

  const auto Rm = riemann_map(pg);
  c["lemma41/riemann-map"].record(k, Rm.max_abs_diff(riemann_map_from_hh(pg)) / std::max(1.0, Rm.max_abs()));

  const auto g = fundamental_tensor(pg).g;
  double ro = 0.0;
  for (int b = 0; b < n; ++b) {
    double left = 0.0;
    double right = 0.0;
    for (int a = 0; a < n; ++a) {
      double ya = 0.0;
      for (int d = 0; d < n; ++d) ya += g(a, d) * y[static_cast<std::size_t>(d)];
      left += ya * Rm(a, b);
      right += Rm(b, a) * y[static_cast<std::size_t>(a)];
    }
    ro = std::max({ro, rel(left, Rm.max_abs()), rel(right, Rm.max_abs())});
  }
  c["lemma41/g-orthogonality"].record(k, ro);
}

// ---- con1 ----------------------------------------------------------------------

void con1(Ctx& ctx, Checks& c, int k) {
  const auto ff = flat_factor_residual(ctx.pg(k));
  c["con1/latin"].record(k, ff.latin, {{"lambda1", ff.lambda1}});
  if (ff.greek_checked) {
    c["con1/greek"].record(k, ff.greek, {{"lambda2", ff.lambda2}});
  } else {
    c["con1/greek"].skip("second factor is not Riemannian");
  }
}

// ---- scalar flag -------------------------------------------------------------

void scalar_flag(Ctx& ctx, Checks& c, int k) {
  const auto& pg = ctx.pg(k);
  const auto fit = scalar_flag_residual(pg);
  const auto ff = flat_factor_residual(pg);
  // Same isotropy fit for factor 1 alone.
  const int n1 = pg.n1();
  const auto& A = pg.factor1();
  const auto& R1 = A.hh_curvature();
  double rt = 0.0;
  double tt = 0.0;
  auto T = [&](int i, int j, int l, int m) {
    return (i == m ? A.g().val(j, l) : 0.0) - (i == l ? A.g().val(j, m) : 0.0);
  };
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i < n1; ++i)
      for (int l = 0; l < n1; ++l)
        for (int m = 0; m < n1; ++m) {
          rt += R1.val(j, i, l, m) * T(i, j, l, m);
          tt += T(i, j, l, m) * T(i, j, l, m);
        }
  const double K1 = rt / tt;
  double d1 = 0.0;
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i < n1; ++i)
      for (int l = 0; l < n1; ++l)
        for (int m = 0; m < n1; ++m) d1 = std::max(d1, std::abs(R1.val(j, i, l, m) - K1 * T(i, j, l, m)));
  const json where{{"lambda_hat", fit.lambda}, {"K1", K1}, {"lambda1", ff.lambda1}, {"factor_defect", d1}};
  auto& iso = c["scalar-flag/isotropy"];
  if (d1 <= iso.tol) {
    iso.record(k, fit.defect, where);
  } else {
    iso.skip("first factor is not isotropic at some points");
  }
  c["scalar-flag/relation"].record(k, rel(fit.lambda - (K1 - ff.lambda1), fit.lambda), where);
}

// ---- Koszul vs closed forms ---------------------------------------------------

void koszul_vs_closed(Ctx& ctx, Checks& c, int k) {
  const auto& pg = ctx.pg(k);
  const int n = pg.n();
  const auto K = koszul_levi_civita(pg);
  c["koszul-vs-closed/compatibility"].record(k, K.compatibility);
  c["koszul-vs-closed/torsion"].record(k, K.torsion);
  const auto L = levi_civita_closed_forms(pg, K.table);
  double m = 0.0;
  json blocks = json::object();
  for (const auto& b : L.blocks) {
    m = std::max(m, b.max_abs);
    blocks[b.name] = b.max_abs;
  }
  c["koszul-vs-closed/levi-blocks"].record(k, m, {{"blocks", blocks}});

  const auto I = induced_vertical_connection(K.table);
  const auto F = horizontal_coefficients(pg);
  const auto& Cu = pg.product().cartan_upper();
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        r = std::max(r, std::abs(I.at(a, n + b).v(d) - F(d, a, b)));
        r = std::max(r, std::abs(I.at(n + a, n + b).v(d) - Cu.val(d, a, b)));
      }
  c["koszul-vs-closed/induced-vertical"].record(k, r);
}

// ---- Vaisman axioms ------------------------------------------------------------

void vaisman_axioms(Ctx& ctx, Checks& c, int k) {
  const auto& pg = ctx.pg(k);
  const int n = pg.n();
  const auto V = vaisman_connection(pg);
  c["vaisman-axioms/preservation"].record(k, V.preservation);
  c["vaisman-axioms/metricity"].record(k, V.metricity);
  c["vaisman-axioms/torsion"].record(k, V.torsion);

  const auto Fc = horizontal_coefficients_closed(pg);
  const auto Gc = berwald_connection_closed(pg);
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        r = std::max(r, std::abs(V.table.at(a, b).h(d) - Fc(d, a, b)));
        r = std::max(r, std::abs(V.table.at(a, n + b).v(d) - Gc(d, a, b)));
      }
  c["vaisman-axioms/closed-components"].record(k, r);

  auto& same = c["vaisman-axioms/same-connection"];
  const auto K = koszul_levi_civita(pg);
  const double gap = same_connection_gap(induced_vertical_connection(K.table), V.table);
  const double fg = horizontal_coefficients(pg).max_abs_diff(frame_brackets(pg).Gc);
  const bool agree = (gap <= kIdentityTol) == (fg <= kIdentityTol);
  same.record(k, agree ? 0.0 : 1.0, {{"gap", gap}, {"max_F_minus_G", fg}});
}

// ---- Reinhart ------------------------------------------------------------------

void reinhart(Ctx& ctx, Checks& c, int k) {
  const auto& pg = ctx.pg(k);
  const auto V = vaisman_connection(pg);
  auto rng = ctx.rng("reinhart", k);
  const auto X = random_frame(rng, pg.n1(), pg.n2(), false, true);
  const auto Y = random_frame(rng, pg.n1(), pg.n2(), true, false);
  const auto Z = random_frame(rng, pg.n1(), pg.n2(), true, false);
  const auto r = reinhart_defect(pg, V, X, Y, Z);
  const json triple{{"X", frame_json(X)}, {"Y", frame_json(Y)}, {"Z", frame_json(Z)}, {"defect", r.defect},
                    {"identity", r.identity}};
  c["reinhart/defect"].record(k, std::abs(r.defect), triple);
  c["reinhart/identity"].record(k, rel(r.defect - r.identity, r.identity), triple);
}

// ---- Hermitian structure -----------------------------------------------------

void hermitian(Ctx& ctx, Checks& c, int k) {
  const auto& pg = ctx.pg(k);
  const int n1 = pg.n1();
  const int n2 = pg.n2();
  const int n = pg.n();
  const auto G = lifted_metric(pg);
  auto rng = ctx.rng("hermitian", k);
  const auto X = random_frame(rng, n1, n2, true, true);
  const auto Y = random_frame(rng, n1, n2, true, true);
  double j2 = 0.0;
  const auto JJX = apply_J(apply_J(X)) + X;
  for (double e : JJX.components()) j2 = std::max(j2, std::abs(e));
  c["hermitian/J-squared"].record(k, j2);
  c["hermitian/compatibility"].record(k, rel(G(apply_J(X), apply_J(Y)) - G(X, Y), G(X, Y)));

  const double W1 = pg.w1().value();
  const double W2 = pg.w2().value();
  const auto& A = pg.factor1();
  const auto& B = pg.factor2();
  double rt = 0.0;
  double ra = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto ha = FrameVector::horizontal_basis(n1, n2, a);
      const auto vb = FrameVector::vertical_basis(n1, n2, b);
      double expect = 0.0;
      if (a < n1 && b < n1) expect = W2 * A.g().val(a, b);
      if (a >= n1 && b >= n1) expect = W1 * B.g().val(a - n1, b - n1);
      rt = std::max(rt, std::abs(symplectic_form(G, ha, vb) - expect));
      rt = std::max(rt, std::abs(symplectic_form(G, ha, FrameVector::horizontal_basis(n1, n2, b))));
      rt = std::max(rt, std::abs(symplectic_form(G, FrameVector::vertical_basis(n1, n2, a), vb)));
    }
  ra = std::abs(symplectic_form(G, X, Y) + symplectic_form(G, Y, X));
  c["hermitian/omega-table"].record(k, rt);
  c["hermitian/antisymmetry"].record(k, ra);

  const auto cl = closedness_check(ctx.cfg(), pg.sample());
  c["hermitian/d-omega"].record(k, cl.d_omega);
  c["hermitian/omega-plus-dw"].record(k, cl.omega_plus_dw);
}

// ---- Nijenhuis ------------------------------------------------------------------

void nijenhuis_suite(Ctx& ctx, Checks& c, int k) {
  const auto N = nijenhuis(ctx.pg(k));
  c["nijenhuis/agreement"].record(k, N.agreement, {{"max_norm", N.max_norm}});
  c["nijenhuis/skew"].record(k, N.skew);
}

// ---- region-level suites ---------------------------------------------------------

void kahler(Ctx& ctx, Checks& c) {
  std::vector<TangentSample> region;
  for (int k = 0; k < ctx.count(); ++k) region.push_back(ctx.sample(k));
  try {
    const auto v = kahler_verdict(ctx.cfg(), region);
    c["kahler/biconditional"].record(-1, v.consistent ? 0.0 : 1.0,
                                     {{"kahler", v.kahler}, {"max_R", v.max_R}, {"max_N", v.max_N}});
  } catch (const Error& e) {
    c["kahler/biconditional"].record(-1, kInf, {{"error", e.what()}});
  }
}

void totally_geodesic(Ctx& ctx, Checks& c) {
  auto& acc = c["totally-geodesic/consistency"];
  if (ctx.count() < 20) {
    acc.skip("needs at least 20 sample points");
    return;
  }
  std::vector<TangentSample> region;
  for (int k = 0; k < ctx.count(); ++k) region.push_back(ctx.sample(k));
  try {
    const auto t = totally_geodesic_verdicts(ctx.cfg(), region);
    acc.record(-1, t.consistent ? 0.0 : 1.0,
               {{"vertical", t.vertical},
                {"horizontal", t.horizontal},
                {"max_F_minus_G", t.max_F_minus_G},
                {"max_C", t.max_C},
                {"max_R", t.max_R},
                {"koszul_vertical", t.koszul_vertical},
                {"koszul_horizontal", t.koszul_horizontal}});
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Precondition) {
      acc.skip(e.what());
    } else {
      acc.record(-1, kInf, {{"error", e.what()}});
    }
  }
}

// ---- finite-difference cross-check -----------------------------------------------

// Caches vector-valued evaluations so fd over many components reuses them.
template <typename T>
class Memo {
 public:
  explicit Memo(std::function<T(const std::vector<double>&)> f) : f_(std::move(f)) {}
  const T& operator()(const std::vector<double>& flat) {
    auto it = cache_.find(flat);
    if (it == cache_.end()) it = cache_.emplace(flat, f_(flat)).first;
    return it->second;
  }

 private:
  std::function<T(const std::vector<double>&)> f_;
  std::map<std::vector<double>, T> cache_;
};

void fd_crosscheck(Ctx& ctx, Checks& c, int k) {
  const auto& cfg = ctx.cfg();
  const auto& pg = ctx.pg(k);
  const auto& p = pg.sample();
  const int n1 = pg.n1();
  const int n2 = pg.n2();
  const int n = pg.n();
  const int nv = 2 * n;
  const auto flat = p.flat();

  std::vector<CoordIndex> seeds;
  for (int f = 0; f < nv; ++f) seeds.push_back(coord_of_flat(f, n1, n2));
  const auto jet = eval_F2(cfg, p, seeds, 3);
  const ScalarField F2 = [&cfg](std::span<const Jet> x) { return cfg.eval_F2(x); };
  double r = 0.0;
  json where;
  auto compare = [&](const std::vector<int>& vars) {
    std::vector<int> mult(static_cast<std::size_t>(nv), 0);
    for (int v : vars) ++mult[static_cast<std::size_t>(v)];
    MultiIndex m;
    for (int f = 0; f < nv; ++f) {
      if (mult[static_cast<std::size_t>(f)] > 0) m.add(seeds[static_cast<std::size_t>(f)], mult[static_cast<std::size_t>(f)]);
    }
    const double a = jet.partial(m);
    const double b = fd_partial(F2, p, m);
    const double e = rel(a - b, b);
    if (e >= r) {
      r = e;
      where = {{"flat_vars", vars}, {"jet", a}, {"fd", b}};
    }
  };
  for (int i = 0; i < nv; ++i) {
    compare({i});
    for (int j = i; j < nv; ++j) {
      compare({i, j});
      for (int l = j; l < nv; ++l) compare({i, j, l});
    }
  }
  c["fd-crosscheck/F2-partials"].record(k, r, where);

  const double h = default_fd_step(1);
  Memo<BlockTensor> spray_at([&](const std::vector<double>& q) {
    return spray(cfg, TangentSample::from_flat(q, n1, n2)).G;
  });
  const auto N = nonlinear_connection(pg);
  r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const std::vector<int> var{n + b};
      const RealField Ga = [&, a](const std::vector<double>& q) { return spray_at(q)(a); };
      r = std::max(r, rel(fd_partial(Ga, flat, var, h) - N(a, b), N.max_abs()));
    }
  c["fd-crosscheck/N-from-spray"].record(k, r);

  Memo<BlockTensor> n_at([&](const std::vector<double>& q) {
    return nonlinear_connection(cfg, TangentSample::from_flat(q, n1, n2));
  });
  // dN[var](c, a) by finite differences.
  std::vector<BlockTensor> dN;
  for (int f = 0; f < nv; ++f) {
    BlockTensor t(n1, n2, {Variance::Upper, Variance::Lower});
    const std::vector<int> var{f};
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a) {
        const RealField Nda = [&, d, a](const std::vector<double>& q) { return n_at(q)(d, a); };
        t(d, a) = fd_partial(Nda, flat, var, h);
      }
    dN.push_back(std::move(t));
  }
  auto delta = [&](int d, int a, int b) {
    double s = dN[static_cast<std::size_t>(b)](d, a);
    for (int e = 0; e < n; ++e) s -= N(e, b) * dN[static_cast<std::size_t>(n + e)](d, a);
    return s;
  };
  const auto R = frame_brackets(pg).R;
  r = 0.0;
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) r = std::max(r, rel(delta(d, a, b) - delta(d, b, a) - R(d, a, b), R.max_abs()));
  c["fd-crosscheck/R-from-N"].record(k, r);
}

const std::vector<SuiteDef>& registry() {
  static const std::vector<SuiteDef> defs = [] {
    std::vector<SuiteDef> d;
    auto add = [&d](std::string name, std::vector<std::pair<std::string, double>> checks, SuiteBody body) {
      SuiteDef s{name, {}, std::move(body)};
      for (auto& [c, t] : checks) s.checks.push_back({name + "/" + c, t});
      d.push_back(std::move(s));
    };
    add("homogeneity",
        {{"g-scaling", 1e-10},
         {"spray", 1e-9},
         {"euler-N", 1e-9},
         {"euler-Gc", 1e-8},
         {"cartan-y", 1e-10},
         {"angular-y", 1e-10},
         {"riemann-scaling", 1e-8}},
        per_point(homogeneity));
    add("block-structure",
        {{"g-mixed", 1e-12},
         {"g-blocks", 1e-9},
         {"cartan-mixed", 1e-12},
         {"cartan-blocks", 1e-9},
         {"mean-cartan", 1e-9},
         {"spray-decomposition", 1e-9},
         {"N-closed", 1e-8},
         {"Gc-closed", 1e-8},
         {"F-closed", 1e-8},
         {"projectors", 1e-12}},
        per_point(block_structure));
    add("yF=G", {{"identity", 1e-8}}, per_point(yf_equals_g));
    add("matsumoto-contraction", {{"mat2", 1e-8}, {"M-y", 1e-10}}, per_point(matsumoto));
    std::vector<std::pair<std::string, double>> bw;
    for (const auto& b : berwald_block_names()) bw.emplace_back(b, 1e-7);
    bw.emplace_back("symmetry", 1e-10);
    add("berwald-blocks", bw, per_point(berwald_blocks));
    add("lemma41", {{"identity", 1e-7}, {"riemann-map", 1e-6}, {"g-orthogonality", 1e-7}}, per_point(lemma41));
    add("con1", {{"latin", 1e-6}, {"greek", 1e-6}}, per_point(con1));
    add("scalar-flag", {{"isotropy", 1e-6}, {"relation", 1e-6}}, per_point(scalar_flag));
    add("koszul-vs-closed",
        {{"compatibility", 1e-7}, {"torsion", 1e-7}, {"levi-blocks", 1e-7}, {"induced-vertical", 1e-7}},
        per_point(koszul_vs_closed));
    add("vaisman-axioms",
        {{"preservation", 1e-8},
         {"metricity", 1e-8},
         {"torsion", 1e-8},
         {"closed-components", 1e-8},
         {"same-connection", 0.0}},
        per_point(vaisman_axioms));
    add("reinhart", {{"defect", 1e-10}, {"identity", 1e-8}}, per_point(reinhart));
    add("hermitian",
        {{"J-squared", 0.0},
         {"compatibility", 1e-10},
         {"omega-table", 1e-10},
         {"antisymmetry", 1e-12},
         {"d-omega", 1e-5},
         {"omega-plus-dw", 1e-5}},
        per_point(hermitian));
    add("nijenhuis", {{"agreement", 1e-7}, {"skew", 1e-10}}, per_point(nijenhuis_suite));
    add("kahler", {{"biconditional", 0.0}}, kahler);
    add("totally-geodesic", {{"consistency", 0.0}}, totally_geodesic);
    add("fd-crosscheck", {{"F2-partials", 1e-5}, {"N-from-spray", 1e-6}, {"R-from-N", 1e-6}}, per_point(fd_crosscheck));
    return d;
  }();
  return defs;
}

const SuiteDef& find_suite(const std::string& name) {
  for (const auto& s : registry()) {
    if (s.name == name) return s;
  }
  fail(ErrorKind::Semantic, "unknown suite '" + name + "'");
}

bool listed(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : registry()) out.push_back(s.name);
    return out;
  }();
  return names;
}

std::vector<CheckInfo> suite_checks(const std::string& suite) { return find_suite(suite).checks; }

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Skipped:
      return "skipped";
  }
  return "?";
}

DiagnosticsReport run_suites(const RunSpec& spec) {
  std::vector<const SuiteDef*> defs;
  for (const auto& name : spec.suites) defs.push_back(&find_suite(name));

  const auto pts = sample_points(spec);
  Ctx ctx(spec, pts);
  DiagnosticsReport rep;
  rep.id = spec.id;
  rep.fixture = spec.fixture;
  rep.classification = spec.config.classification();
  rep.n1 = spec.config.n1();
  rep.n2 = spec.config.n2();
  rep.jet_order = kDefaultGeometryOrder;
  rep.seed = spec.sampling.seed;
  rep.count = spec.sampling.count;
  rep.timestamp = utc_timestamp();

  for (const auto* def : defs) {
    Checks checks;
    for (const auto& info : def->checks) {
      auto& acc = checks[info.name];
      acc.name = info.name;
      acc.tol = info.tolerance;
      if (auto it = spec.tolerances.find(def->name); it != spec.tolerances.end()) acc.tol = it->second;
      if (auto it = spec.tolerances.find(info.name); it != spec.tolerances.end()) acc.tol = it->second;
    }
    def->body(ctx, checks);

    SuiteReport sr;
    sr.name = def->name;
    const bool suite_listed = listed(spec.expected_failures, def->name);
    sr.expected_failure = suite_listed;
    bool any_fail = false;
    bool any_pass = false;
    for (const auto& info : def->checks) {
      const Acc& acc = checks.at(info.name);
      CheckEntry e;
      e.name = info.name;
      e.tolerance = acc.tol;
      e.note = acc.note;
      e.expected_failure = suite_listed || listed(spec.expected_failures, info.name);
      sr.expected_failure = sr.expected_failure || e.expected_failure;
      if (!acc.recorded) {
        e.verdict = Verdict::Skipped;
        if (e.note.empty()) e.note = "no sample points";
      } else {
        e.residual = acc.residual;
        e.point = acc.point;
        e.verdict = acc.residual <= acc.tol ? Verdict::Pass : Verdict::Fail;
        json w = acc.detail.is_object() ? acc.detail : json::object();
        if (acc.point >= 0) w["point"] = point_json(pts[static_cast<std::size_t>(acc.point)]);
        if (!acc.extra.is_null()) w["extra"] = acc.extra;
        e.witness = std::move(w);
      }
      e.as_expected = e.expected_failure ? e.verdict == Verdict::Fail : e.verdict != Verdict::Fail;
      any_fail = any_fail || e.verdict == Verdict::Fail;
      any_pass = any_pass || e.verdict == Verdict::Pass;
      if (e.verdict != Verdict::Skipped) sr.max_residual = std::max(sr.max_residual, e.residual);
      sr.as_expected = sr.as_expected && e.as_expected;
      switch (e.verdict) {
        case Verdict::Pass:
          ++rep.pass;
          break;
        case Verdict::Fail:
          ++rep.fail;
          break;
        case Verdict::Skipped:
          ++rep.skipped;
          break;
      }
      if (!e.as_expected) ++rep.unexpected;
      sr.checks.push_back(std::move(e));
    }
    sr.verdict = any_fail ? Verdict::Fail : any_pass ? Verdict::Pass : Verdict::Skipped;
    rep.suites.push_back(std::move(sr));
  }
  return rep;
}

}  // namespace dwf
