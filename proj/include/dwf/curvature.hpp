#pragma once

// Curvature objects of the doubly warped product and the flat-factor /
// scalar-flag diagnostics.

#include <string>
#include <vector>

#include "dwf/product.hpp"
#include "dwf/tensor.hpp"

namespace dwf {

struct CurvatureBundle {
  BlockTensor R_bracket;  // R^c_ab
  BlockTensor B;          // B^a_bcd
  BlockTensor R_hh;       // R_b^a_cd stored as (b, a, c, d)
  BlockTensor R_map;      // R^a_b
};

CurvatureBundle curvature_bundle(const ProductGeometry& pg);

BlockTensor berwald_curvature(const ProductGeometry& pg);
BlockTensor berwald_curvature(const ProductConfig& cfg, const TangentSample& p);

struct BlockCheck {
  std::string name;
  double max_abs = 0.0;
  std::vector<int> witness;
};

// The ten closed-form Berwald blocks, each compared with the generic B.
std::vector<BlockCheck> berwald_closed_blocks(const ProductGeometry& pg);

BlockTensor hh_curvature(const ProductGeometry& pg);
BlockTensor hh_curvature(const ProductConfig& cfg, const TangentSample& p);

// R^a_b directly from the spray.
BlockTensor riemann_map(const ProductGeometry& pg);
BlockTensor riemann_map(const ProductConfig& cfg, const TangentSample& p);
// y^c y^d R_c^a_db, for cross-checking.
BlockTensor riemann_map_from_hh(const ProductGeometry& pg);

// Flag edge u in combined indices; Precondition error for a degenerate flag.
inline constexpr double kFlagDegeneracy = 1e-10;
double flag_curvature(const ProductGeometry& pg, const std::vector<double>& u);
double flag_curvature(const ProductConfig& cfg, const TangentSample& p, const std::vector<double>& u);

struct FlatFactorResidual {
  double latin = 0.0;
  bool greek_checked = false;  // requires factor 2 Riemannian
  double greek = 0.0;
  double lambda1 = 0.0;  // |grad f2|^2 / f1^2
  double lambda2 = 0.0;  // |grad f1|^2 / f2^2
};

// Precondition error unless factor 1 is Riemannian.
FlatFactorResidual flat_factor_residual(const ProductGeometry& pg);
FlatFactorResidual flat_factor_residual(const ProductConfig& cfg, const TangentSample& p);

struct ScalarFlagFit {
  double lambda = 0.0;
  double defect = 0.0;  // max |R - lambda T| over the Latin block; infinity if degenerate
};

// Precondition error unless factor 1 is Riemannian and n1 >= 2.
ScalarFlagFit scalar_flag_residual(const ProductGeometry& pg);
ScalarFlagFit scalar_flag_residual(const ProductConfig& cfg, const TangentSample& p);

}  // namespace dwf
