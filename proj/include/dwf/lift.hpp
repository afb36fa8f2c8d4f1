#pragma once

// Lifting scalar fields on the slit tangent bundle to jets, plus the
// finite-difference oracle used to cross-check every jet result.

#include <functional>
#include <span>
#include <vector>

#include "dwf/coords.hpp"
#include "dwf/jet.hpp"

namespace dwf {

// A scalar field evaluated on the flat coordinates [x, u, y, v].
using ScalarField = std::function<Jet(std::span<const Jet> flat)>;

// Coordinate jets for a point: seeded coordinates become jet variables (in
// seed order), the rest are constants.
std::vector<Jet> seed_coordinates(const TangentSample& p, std::span<const CoordIndex> seeds, int order);
// Every flat coordinate seeded, in flat order.
std::vector<Jet> seed_all(const std::vector<double>& flat, int order);

struct SeededJet {
  std::vector<CoordIndex> seeds;
  Jet jet;

  double value() const noexcept { return jet.value(); }
  // Partial over seeded coordinates; Argument error if a coordinate is not a seed.
  double partial(const MultiIndex& m) const;
};

SeededJet jet_lift(const ScalarField& f, const TangentSample& p, std::span<const CoordIndex> seeds, int order);

// Base step for an fd derivative of the given total order (scaled per
// coordinate by 1 + |coordinate|).
double default_fd_step(int total_order);

// Central differences with Richardson extrapolation over h and h/2.
double fd_partial(const ScalarField& f, const TangentSample& p, const MultiIndex& m, double step);
double fd_partial(const ScalarField& f, const TangentSample& p, const MultiIndex& m);

// Same oracle for plain real functions of the flat coordinates.
using RealField = std::function<double(const std::vector<double>& flat)>;
double fd_partial(const RealField& f, const std::vector<double>& flat, std::span<const int> flat_vars, double step);

}  // namespace dwf
