// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "dwf/connection.hpp"
#include "dwf/curvature.hpp"
#include "dwf/error.hpp"
#include "dwf/finsler_core.hpp"
#include "dwf/lab.hpp"
#include "dwf/lifted.hpp"

using namespace dwf;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr int kPoints = 25;

int failures = 0;

void criterion(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("[%s] C%02d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// Full default runs, one per fixture.
const std::map<std::string, DiagnosticsReport>& reports() {
  static const auto table = [] {
    std::map<std::string, DiagnosticsReport> out;
    for (const auto& f : fixture_names()) out.emplace(f, run_suites(fixture_spec(f, kSeed, kPoints)));
    return out;
  }();
  return table;
}

const CheckEntry& entry(const std::string& fixture, const std::string& check) {
  for (const auto& s : reports().at(fixture).suites) {
    for (const auto& c : s.checks) {
      if (c.name == check) return c;
    }
  }
  throw std::runtime_error("missing check " + check);
}

// Max residual of a check over fixtures; skipped entries do not count as passes.
double worst(const std::vector<std::string>& fixtures, const std::string& check, bool* all_ran = nullptr) {
  double m = 0.0;
  for (const auto& f : fixtures) {
    const auto& c = entry(f, check);
    if (c.verdict == Verdict::Skipped) {
      if (all_ran) *all_ran = false;
      continue;
    }
    m = std::max(m, c.residual);
  }
  return m;
}

std::vector<TangentSample> samples(const std::string& fixture) { return sample_points(fixture_spec(fixture, kSeed, kPoints)); }

const std::vector<std::string> kAll = fixture_names();
const std::vector<std::string> kRiemannian{"FIX-1D", "FIX-E", "FIX-P", "FIX-Q"};

void c01() {
  bool ran = true;
  const double m = worst(kAll, "block-structure/g-mixed", &ran);
  criterion(1, "mixed blocks of g vanish", ran && m <= 1e-12, "max mixed |g| over all fixtures " + sci(m));
}

void c02() {
  bool ran = true;
  const double m = worst(kAll, "block-structure/spray-decomposition", &ran);
  const auto G = spray(fixture("FIX-1D"), TangentSample{{0.0}, {1.0}, {1.0}, {1.0}}).G;
  const double hand = std::max(std::abs(G(0) - 0.5), std::abs(G(1) + 0.5));
  criterion(2, "spray decomposition and FIX-1D hand values", ran && m <= 1e-9 && hand <= 1e-9,
            "generic vs decomposed " + sci(m) + ", |G - (0.5, -0.5)| " + sci(hand));
}

void c03() {
  // y^c G^a_bc = G^a_b split into its four Latin/Greek blocks.
  std::map<std::string, double> block{{"LL", 0.0}, {"LG", 0.0}, {"GL", 0.0}, {"GG", 0.0}};
  for (const auto& f : kAll) {
    const auto cfg = fixture(f);
    for (const auto& p : samples(f)) {
      const ProductGeometry pg(cfg, p, 4);
      const auto N = nonlinear_connection(pg);
      const auto Gc = frame_brackets(pg).Gc;
      std::vector<double> y = p.y;
      y.insert(y.end(), p.v.begin(), p.v.end());
      for (int a = 0; a < pg.n(); ++a)
        for (int b = 0; b < pg.n(); ++b) {
          double s = 0.0;
          for (int c = 0; c < pg.n(); ++c) s += y[static_cast<std::size_t>(c)] * Gc(a, b, c);
          auto& m = block[std::string(pg.latin(a) ? "L" : "G") + (pg.latin(b) ? "L" : "G")];
          m = std::max(m, std::abs(s - N(a, b)) / std::max(1.0, N.max_abs()));
        }
    }
  }
  bool ok = true;
  std::string detail;
  for (const auto& [k, v] : block) {
    ok = ok && v <= 1e-8;
    detail += k + " " + sci(v) + " ";
  }
  criterion(3, "Euler identities for the nonlinear connection", ok, detail + "(25 points per fixture)");
}

void c04() {
  const double m = worst({"FIX-E", "FIX-R"}, "yF=G/identity");
  criterion(4, "y^c F^a_bc = G^a_b", m <= 1e-8, "FIX-E/FIX-R max " + sci(m));
}

void c05() {
  bool ran = true;
  const double mixed = worst(kAll, "block-structure/cartan-mixed", &ran);
  const double blocks = worst(kAll, "block-structure/cartan-blocks", &ran);
  // Independent oracle: finite third fiber derivatives of each factor F^2.
  double fd = 0.0;
  for (const auto& f : kAll) {
    const auto cfg = fixture(f);
    const auto p = samples(f)[0];
    const ProductGeometry pg(cfg, p, 3);
    const auto C = cartan_tensor(pg);
    const int n1 = pg.n1();
    const ScalarField F1 = [&cfg](std::span<const Jet> x) { return cfg.factor1_F2(x); };
    const ScalarField F2 = [&cfg](std::span<const Jet> x) { return cfg.factor2_F2(x); };
    for (int a = 0; a < pg.n(); ++a)
      for (int b = a; b < pg.n(); ++b)
        for (int c = b; c < pg.n(); ++c) {
          const bool latin = pg.latin(a);
          if (pg.latin(b) != latin || pg.latin(c) != latin) continue;
          const Block blk = latin ? Block::Fiber1 : Block::Fiber2;
          const int off = latin ? 0 : n1;
          std::map<int, int> mult;
          ++mult[a - off];
          ++mult[b - off];
          ++mult[c - off];
          MultiIndex m;
          for (const auto& [o, k] : mult) m.add({blk, o}, k);
          const double d3 = fd_partial(latin ? F1 : F2, p, m);
          const double w = latin ? pg.w2().value() : pg.w1().value();
          fd = std::max(fd, std::abs(C(a, b, c) - 0.25 * w * d3) / std::max(1.0, std::abs(C(a, b, c))));
        }
  }
  criterion(5, "Cartan tensor blocks", ran && mixed <= 1e-12 && blocks <= 1e-9 && fd <= 1e-5,
            "mixed " + sci(mixed) + ", blocks vs factor jets " + sci(blocks) + ", blocks vs fd oracle " + sci(fd));
}

void c06() {
  const auto& c = entry("FIX-R", "matsumoto-contraction/mat2");
  const auto& x = c.witness.at("extra");
  const double lhs = x.at("lhs").get<double>();
  const double rhs = x.at("rhs").get<double>();
  const bool nonzero = std::abs(lhs) > 1e-4 && std::abs(rhs) > 1e-4;
  criterion(6, "Matsumoto contraction on FIX-R", c.verdict == Verdict::Pass && c.residual <= 1e-8 && nonzero,
            "max residual " + sci(c.residual) + "; witness point " + std::to_string(x.at("point").get<int>()) +
                " lhs " + sci(lhs) + " rhs " + sci(rhs));
}

void c07() {
  double m = 0.0;
  for (const auto& s : reports().at("FIX-R").suites) {
    if (s.name != "berwald-blocks") continue;
    for (const auto& c : s.checks) {
      if (c.name != "berwald-blocks/symmetry") m = std::max(m, c.residual);
    }
  }
  double maxB = 0.0;
  for (const auto& p : samples("FIX-R")) maxB = std::max(maxB, berwald_curvature(fixture("FIX-R"), p).max_abs());
  criterion(7, "Berwald blocks on FIX-R", m <= 1e-7 && maxB > 1e-3,
            "ten blocks max " + sci(m) + ", max|B| " + sci(maxB) + " (not Berwald)");
}

void c08() {
  const double m = worst(kAll, "lemma41/identity");
  criterion(8, "y^b R_b^a_cd = R^a_cd", m <= 1e-7, "all fixtures max " + sci(m));
}

void c09() {
  const double m = worst({"FIX-E"}, "con1/latin");
  const double mg = worst({"FIX-E"}, "con1/greek");
  const auto R = hh_curvature(fixture("FIX-E"), TangentSample{{0.0, 0.0}, {1.0, 0.0}, {0.4, -0.9}, {0.7, 0.2}});
  const double hand = std::abs(R(1, 0, 0, 1) - 0.5);
  criterion(9, "flat-factor curvature identity on FIX-E", m <= 1e-6 && mg <= 1e-6 && hand <= 1e-6,
            "latin " + sci(m) + ", greek " + sci(mg) + ", |R_2^1_12 - 0.5| " + sci(hand));
}

void c10() {
  const auto fit = scalar_flag_residual(fixture("FIX-E"), TangentSample{{0.0, 0.0}, {1.0, 0.0}, {0.4, -0.9}, {0.7, 0.2}});
  const double err = std::abs(fit.lambda + 0.5);
  criterion(10, "scalar-flag relation on FIX-E", err <= 1e-6 && fit.defect <= 1e-6,
            "lambda " + std::to_string(fit.lambda) + " (|+0.5| " + sci(err) + "), defect " + sci(fit.defect));
}

void c11() {
  const double comp = worst(kAll, "koszul-vs-closed/compatibility");
  const double tors = worst(kAll, "koszul-vs-closed/torsion");
  const double levi_p = worst({"FIX-P"}, "koszul-vs-closed/levi-blocks");
  std::string blocks;
  for (const std::string f : {"FIX-E", "FIX-R"}) {
    const ProductGeometry pg(fixture(f), samples(f)[0]);
    const auto L = levi_civita_closed_forms(pg, koszul_levi_civita(pg).table);
    blocks += " " + f + ":";
    for (const auto& b : L.blocks) blocks += " " + b.name + "=" + sci(b.max_abs);
  }
  std::cout << "      per-block closed-form discrepancy" << blocks << "\n";
  criterion(11, "Koszul Levi-Civita connection", comp <= 1e-7 && tors <= 1e-7 && levi_p <= 1e-7,
            "compatibility " + sci(comp) + ", torsion " + sci(tors) + ", FIX-P closed forms " + sci(levi_p));
}

void c12() {
  double m = 0.0;
  for (const auto* c : {"vaisman-axioms/preservation", "vaisman-axioms/metricity", "vaisman-axioms/torsion"}) {
    m = std::max(m, worst(kAll, c));
  }
  const double closed = worst(kAll, "vaisman-axioms/closed-components");
  criterion(12, "Vaisman axioms", m <= 1e-8 && closed <= 1e-8,
            "axioms max " + sci(m) + ", closed components " + sci(closed));
}

void c13() {
  const double riem = worst(kRiemannian, "reinhart/defect");
  const auto& r = entry("FIX-R", "reinhart/defect");
  const double ident = worst(kAll, "reinhart/identity");
  const bool witness = r.witness.contains("X") && r.witness.contains("Y") && r.witness.contains("Z");
  criterion(13, "Reinhart biconditional", riem <= 1e-10 && r.residual > 1e-3 && witness && r.as_expected && ident <= 1e-8,
            "Riemannian fixtures " + sci(riem) + ", FIX-R defect " + sci(r.residual) + " at point " +
                std::to_string(r.point) + ", identity " + sci(ident));
}

void c14() {
  const double j2 = worst(kAll, "hermitian/J-squared");
  const double herm = worst(kAll, "hermitian/compatibility");
  const double table = worst(kAll, "hermitian/omega-table");
  const double dO = worst(kAll, "hermitian/d-omega");
  const double nij = worst(kAll, "nijenhuis/agreement");
  const auto kp = kahler_verdict(fixture("FIX-P"), samples("FIX-P"));
  const auto ke = kahler_verdict(fixture("FIX-E"), samples("FIX-E"));
  const bool ok = j2 == 0.0 && herm <= 1e-10 && table <= 1e-10 && dO <= 1e-5 && nij <= 1e-7 && kp.kahler &&
                  kp.consistent && !ke.kahler && ke.consistent;
  criterion(14, "almost complex structure", ok,
            "J^2+1 " + sci(j2) + ", hermitian " + sci(herm) + ", omega table " + sci(table) + ", dOmega " + sci(dO) +
                ", nijenhuis " + sci(nij) + ", kahler FIX-P " + (kp.kahler ? "yes" : "no") + " FIX-E " +
                (ke.kahler ? "yes" : "no") + " (max|R| " + sci(ke.max_R) + ")");
}

void c15() {
  const double m = worst(kAll, "fd-crosscheck/F2-partials");
  const double n = worst(kAll, "fd-crosscheck/N-from-spray");
  const double r = worst(kAll, "fd-crosscheck/R-from-N");
  criterion(15, "jet partials against finite differences", m <= 1e-5 && n <= 1e-6 && r <= 1e-6,
            "F^2 order <= 3 relative " + sci(m) + ", N " + sci(n) + ", R " + sci(r));
}

std::string diffable_of(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return json::parse(ss.str()).at("diffable").dump();
}

void c16() {
  const std::string base = "dwf_acceptance_run";
  int codes[2];
  for (int k = 0; k < 2; ++k) {
    const std::string cmd = std::string(DWF_CLI_PATH) + " verify --fixture FIX-R --seed 42 --json " + base +
                            std::to_string(k) + ".json > /dev/null";
    const int status = std::system(cmd.c_str());
    codes[k] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  bool same = false;
  try {
    same = diffable_of(base + "0.json") == diffable_of(base + "1.json");
  } catch (const std::exception&) {
  }
  std::remove((base + "0.json").c_str());
  std::remove((base + "1.json").c_str());
  criterion(16, "determinism of verify --fixture FIX-R --seed 42", same && codes[0] == 0 && codes[1] == 0,
            std::string("diffable sections ") + (same ? "identical" : "differ") + ", exit codes " +
                std::to_string(codes[0]) + "/" + std::to_string(codes[1]));
}

}  // namespace

int main() {
  for (auto* f : {c01, c02, c03, c04, c05, c06, c07, c08, c09, c10, c11, c12, c13, c14, c15, c16}) {
    try {
      f();
    } catch (const std::exception& e) {
      std::printf("[FAIL] criterion raised: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
