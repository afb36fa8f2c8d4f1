#pragma once

// Coordinates on the slit tangent bundle of M1 x M2.
//
// The flat ordering used everywhere is [x (n1), u (n2), y (n1), v (n2)].
// Combined indices a in [0, n1+n2) run over Latin (a < n1) then Greek.

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

namespace dwf {

enum class Block { Base1, Base2, Fiber1, Fiber2 };

struct CoordIndex {
  Block block = Block::Base1;
  int offset = 0;

  friend bool operator==(const CoordIndex&, const CoordIndex&) = default;
};

// Flat position of a coordinate; validates the offset.
int flat_index(CoordIndex c, int n1, int n2);
CoordIndex coord_of_flat(int flat, int n1, int n2);

// Ordered list of (coordinate, multiplicity); total order <= 6 and no repeats.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<std::pair<CoordIndex, int>> parts);

  void add(CoordIndex c, int order);
  int total_order() const noexcept;
  const std::vector<std::pair<CoordIndex, int>>& parts() const noexcept { return parts_; }

 private:
  std::vector<std::pair<CoordIndex, int>> parts_;
};

inline constexpr double kSlitFloor = 1e-12;

struct TangentSample {
  std::vector<double> x, u, y, v;

  int n1() const noexcept { return static_cast<int>(x.size()); }
  int n2() const noexcept { return static_cast<int>(u.size()); }
  // Throws Argument on inconsistent sizes and Domain if |y| or |v| < kSlitFloor.
  void validate() const;
  std::vector<double> flat() const;
  static TangentSample from_flat(const std::vector<double>& flat, int n1, int n2);
  // Same base point with both fiber vectors scaled by lambda.
  TangentSample scaled(double lambda) const;
};

}  // namespace dwf
