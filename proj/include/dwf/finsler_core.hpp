#pragma once

// Zeroth-level tensors of the doubly warped product: F^2, the fundamental
// tensor, angular metric and the Cartan / mean Cartan / Matsumoto torsions.

#include <span>

#include "dwf/lift.hpp"
#include "dwf/product.hpp"
#include "dwf/tensor.hpp"

namespace dwf {

// Values of a product-level jet tensor as a block tensor.
BlockTensor to_block(const JetTensor& t, int n1, std::vector<Variance> variance);

SeededJet eval_F2(const ProductConfig& cfg, const TangentSample& p, std::span<const CoordIndex> seeds, int order);

struct MetricPair {
  BlockTensor g;     // lower
  BlockTensor ginv;  // upper
};

MetricPair fundamental_tensor(const ProductGeometry& pg);
BlockTensor angular_metric(const ProductGeometry& pg);
BlockTensor cartan_tensor(const ProductGeometry& pg);  // C_abc
BlockTensor mean_cartan(const ProductGeometry& pg);    // I_a
// M_abc with n = n1 + n2 in the 1/(n+1) factor.
BlockTensor matsumoto_torsion(const ProductGeometry& pg);

// Convenience forms evaluated at the minimal jet order they need.
MetricPair fundamental_tensor(const ProductConfig& cfg, const TangentSample& p);
BlockTensor angular_metric(const ProductConfig& cfg, const TangentSample& p);
BlockTensor cartan_tensor(const ProductConfig& cfg, const TangentSample& p);
BlockTensor mean_cartan(const ProductConfig& cfg, const TangentSample& p);
BlockTensor matsumoto_torsion(const ProductConfig& cfg, const TangentSample& p);

}  // namespace dwf
