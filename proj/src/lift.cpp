#include "dwf/lift.hpp"

#include <cmath>
#include <string>

#include "dwf/error.hpp"

namespace dwf {

std::vector<Jet> seed_coordinates(const TangentSample& p, std::span<const CoordIndex> seeds, int order) {
  p.validate();
  if (order < 0 || order > kMaxJetOrder) {
    fail(ErrorKind::Capability, "jet order " + std::to_string(order) + " exceeds the supported maximum " +
                                    std::to_string(kMaxJetOrder));
  }
  const auto flat = p.flat();
  std::vector<Jet> coords(flat.begin(), flat.end());
  if (seeds.empty()) return coords;
  const auto layout = JetLayout::get(static_cast<int>(seeds.size()));
  std::vector<bool> used(flat.size(), false);
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const int k = flat_index(seeds[s], p.n1(), p.n2());
    if (used[static_cast<std::size_t>(k)]) fail(ErrorKind::Argument, "coordinate seeded twice");
    used[static_cast<std::size_t>(k)] = true;
    coords[static_cast<std::size_t>(k)] = Jet::variable(layout, order, static_cast<int>(s), flat[static_cast<std::size_t>(k)]);
  }
  return coords;
}

std::vector<Jet> seed_all(const std::vector<double>& flat, int order) {
  const auto layout = JetLayout::get(static_cast<int>(flat.size()));
  std::vector<Jet> coords;
  coords.reserve(flat.size());
  for (std::size_t k = 0; k < flat.size(); ++k) coords.push_back(Jet::variable(layout, order, static_cast<int>(k), flat[k]));
  return coords;
}

double SeededJet::partial(const MultiIndex& m) const {
  if (m.total_order() == 0) return jet.value();
  std::vector<int> exps(seeds.size(), 0);
  for (const auto& [c, k] : m.parts()) {
    bool found = false;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      if (seeds[s] == c) {
        exps[s] += k;
        found = true;
      }
    }
    if (!found) fail(ErrorKind::Argument, "partial requested along a coordinate that was not seeded");
  }
  if (jet.is_constant()) return 0.0;
  return jet.partial(exps);
}

SeededJet jet_lift(const ScalarField& f, const TangentSample& p, std::span<const CoordIndex> seeds, int order) {
  const auto coords = seed_coordinates(p, seeds, order);
  SeededJet out{std::vector<CoordIndex>(seeds.begin(), seeds.end()), f(coords)};
  if (!out.jet.is_constant() && out.jet.order() > order) out.jet = out.jet.truncated(order);
  return out;
}

double default_fd_step(int total_order) {
  switch (total_order) {
    case 0:
    case 1: return 1e-4;
    case 2: return 1e-3;
    default: return 1e-2;
  }
}

namespace {

struct Stencil {
  std::vector<int> offsets;  // multiples of h
  std::vector<double> weights;
  int power;  // divide by h^power
};

Stencil central(int order) {
  switch (order) {
    case 1: return {{1, -1}, {0.5, -0.5}, 1};
    case 2: return {{1, 0, -1}, {1.0, -2.0, 1.0}, 2};
    case 3: return {{2, 1, -1, -2}, {0.5, -1.0, 1.0, -0.5}, 3};
    default: fail(ErrorKind::Capability, "fd oracle supports total order <= 3");
  }
}

double fd_once(const RealField& f, const std::vector<double>& base, const std::vector<std::pair<int, int>>& parts,
               const std::vector<double>& h) {
  std::vector<Stencil> st;
  for (const auto& [var, k] : parts) st.push_back(central(k));
  std::vector<std::size_t> pos(st.size(), 0);
  double sum = 0.0;
  while (true) {
    auto pt = base;
    double w = 1.0;
    for (std::size_t s = 0; s < st.size(); ++s) {
      pt[static_cast<std::size_t>(parts[s].first)] += st[s].offsets[pos[s]] * h[s];
      w *= st[s].weights[pos[s]];
    }
    sum += w * f(pt);
    std::size_t s = 0;
    while (s < st.size() && ++pos[s] == st[s].offsets.size()) pos[s++] = 0;
    if (s == st.size()) break;
  }
  for (std::size_t s = 0; s < st.size(); ++s) sum /= std::pow(h[s], st[s].power);
  return sum;
}

}  // namespace

double fd_partial(const RealField& f, const std::vector<double>& flat, std::span<const int> flat_vars, double step) {
  if (!(step > 0.0)) fail(ErrorKind::Argument, "fd step must be positive");
  if (flat_vars.size() > 3) fail(ErrorKind::Capability, "fd oracle supports total order <= 3");
  if (flat_vars.empty()) return f(flat);
  std::vector<std::pair<int, int>> parts;
  for (int v : flat_vars) {
    if (v < 0 || v >= static_cast<int>(flat.size())) fail(ErrorKind::Argument, "fd variable out of range");
    bool merged = false;
    for (auto& p : parts) {
      if (p.first == v) {
        ++p.second;
        merged = true;
      }
    }
    if (!merged) parts.emplace_back(v, 1);
  }
  std::vector<double> h;
  for (const auto& p : parts) h.push_back(step * (1.0 + std::abs(flat[static_cast<std::size_t>(p.first)])));
  const double coarse = fd_once(f, flat, parts, h);
  for (auto& e : h) e *= 0.5;
  const double fine = fd_once(f, flat, parts, h);
  return (4.0 * fine - coarse) / 3.0;
}

double fd_partial(const ScalarField& f, const TangentSample& p, const MultiIndex& m, double step) {
  p.validate();
  if (m.total_order() > 3) fail(ErrorKind::Capability, "fd oracle supports total order <= 3");
  std::vector<int> vars;
  for (const auto& [c, k] : m.parts()) {
    for (int r = 0; r < k; ++r) vars.push_back(flat_index(c, p.n1(), p.n2()));
  }
  const RealField real = [&f](const std::vector<double>& flat) {
    std::vector<Jet> coords(flat.begin(), flat.end());
    return f(coords).value();
  };
  return fd_partial(real, p.flat(), vars, step);
}

double fd_partial(const ScalarField& f, const TangentSample& p, const MultiIndex& m) {
  return fd_partial(f, p, m, default_fd_step(m.total_order()));
}

}  // namespace dwf
