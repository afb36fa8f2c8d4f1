#pragma once

// Spray, nonlinear connection, adapted frame brackets and the connection
// coefficient families G^c_ab and F^c_ab. Every object has a generic path
// (jets of F^2) and, where available, a closed-form path assembled from
// factor quantities and warp derivatives; the generic path is ground truth.

#include <array>
#include <string>
#include <vector>

#include "dwf/lift.hpp"
#include "dwf/product.hpp"
#include "dwf/tensor.hpp"

namespace dwf {

enum class SprayPath { Generic, ProductDecomposed };

struct SprayField {
  BlockTensor G;  // G^a
  SprayPath provenance = SprayPath::Generic;
};

SprayField spray(const ProductGeometry& pg, SprayPath path = SprayPath::Generic);
SprayField spray(const ProductConfig& cfg, const TangentSample& p, SprayPath path = SprayPath::Generic);

// N(a, b) = G^a_b.
BlockTensor nonlinear_connection(const ProductGeometry& pg);
BlockTensor nonlinear_connection_closed(const ProductGeometry& pg);
BlockTensor nonlinear_connection(const ProductConfig& cfg, const TangentSample& p);

// delta f / delta x^b for a flat-coordinate scalar field; direction must be a base coordinate.
double adapted_derivative(const ProductGeometry& pg, const ScalarField& f, CoordIndex direction);
double adapted_derivative(const ProductConfig& cfg, const TangentSample& p, const ScalarField& f, CoordIndex direction);

struct FrameBrackets {
  BlockTensor R;   // R(c, a, b): [delta_a, delta_b] = R^c_ab d/dy^c
  BlockTensor Gc;  // Gc(c, a, b): [delta_a, d/dy^b] = G^c_ab d/dy^c
};

FrameBrackets frame_brackets(const ProductGeometry& pg);
FrameBrackets frame_brackets(const ProductConfig& cfg, const TangentSample& p);
// G^c_ab assembled block by block from factor data.
BlockTensor berwald_connection_closed(const ProductGeometry& pg);

// F(c, a, b) = F^c_ab.
BlockTensor horizontal_coefficients(const ProductGeometry& pg);
BlockTensor horizontal_coefficients_closed(const ProductGeometry& pg);
BlockTensor horizontal_coefficients(const ProductConfig& cfg, const TangentSample& p);

// Per-block comparison of a closed-form path against the generic one.
struct BlockDiscrepancy {
  std::string block;
  double max_abs = 0.0;
  std::vector<int> witness;  // combined indices of the worst entry
};

// Splits a rank-r tensor comparison by Latin/Greek pattern of its slots.
std::vector<BlockDiscrepancy> block_discrepancies(const BlockTensor& generic, const BlockTensor& closed);

// Components in the adapted basis (delta/dx, delta/du, d/dy, d/dv).
class FrameVector {
 public:
  FrameVector(int n1, int n2) : n1_(n1), n2_(n2), c_(static_cast<std::size_t>(2 * (n1 + n2)), 0.0) {}
  static FrameVector horizontal_basis(int n1, int n2, int a);
  static FrameVector vertical_basis(int n1, int n2, int a);

  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  int n() const noexcept { return n1_ + n2_; }
  double& h(int a) { return c_[static_cast<std::size_t>(a)]; }
  double h(int a) const { return c_[static_cast<std::size_t>(a)]; }
  double& v(int a) { return c_[static_cast<std::size_t>(n() + a)]; }
  double v(int a) const { return c_[static_cast<std::size_t>(n() + a)]; }
  std::vector<double>& components() noexcept { return c_; }
  const std::vector<double>& components() const noexcept { return c_; }

  bool is_vertical(double tol = 0.0) const;
  bool is_horizontal(double tol = 0.0) const;

  FrameVector& operator+=(const FrameVector& o);
  FrameVector& operator-=(const FrameVector& o);
  FrameVector& operator*=(double s);
  friend FrameVector operator+(FrameVector a, const FrameVector& b) { return a += b; }
  friend FrameVector operator-(FrameVector a, const FrameVector& b) { return a -= b; }
  friend FrameVector operator*(double s, FrameVector a) { return a *= s; }
  friend bool operator==(const FrameVector&, const FrameVector&) = default;

 private:
  int n1_;
  int n2_;
  std::vector<double> c_;
};

FrameVector vertical_projector(const FrameVector& X);    // v^d
FrameVector horizontal_projector(const FrameVector& X);  // h^d
FrameVector almost_tangent(const FrameVector& X);        // J^d: delta_a -> d/dy^a, d/dy^a -> 0

}  // namespace dwf
