#pragma once

// Geometry of the slit tangent bundle with the warped Sasaki-type lift.
//
// Frame index convention: E_A for A < n is delta_a (horizontal), for
// A >= n it is d/dy^(A-n) (vertical), with n = n1 + n2.

#include <optional>
#include <string>
#include <vector>

#include "dwf/connection.hpp"
#include "dwf/product.hpp"
#include "dwf/tensor.hpp"

namespace dwf {

class LiftedMetric {
 public:
  explicit LiftedMetric(const ProductGeometry& pg);

  int n1() const noexcept { return g_.n1(); }
  int n2() const noexcept { return g_.n2(); }
  int n() const noexcept { return g_.dim(); }
  // Frame component G(E_A, E_B).
  double component(int A, int B) const;
  double operator()(const FrameVector& X, const FrameVector& Y) const;
  const BlockTensor& block() const noexcept { return g_; }

 private:
  BlockTensor g_;
};

LiftedMetric lifted_metric(const ProductGeometry& pg);

// Constant-coefficient frame bracket [X, Y] from the structure functions.
FrameVector frame_bracket(const FrameBrackets& fb, const FrameVector& X, const FrameVector& Y);

enum class ConnectionKind { LeviCivitaKoszul, LeviCivitaClosedForm, InducedVertical, Vaisman };

class ConnectionTable {
 public:
  ConnectionTable(ConnectionKind kind, int n1, int n2);

  ConnectionKind kind() const noexcept { return kind_; }
  int n() const noexcept { return n1_ + n2_; }
  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  bool defined(int A, int B) const;
  // nabla_{E_A} E_B.
  const FrameVector& at(int A, int B) const;
  void set(int A, int B, FrameVector value);
  // nabla_X Y for constant-coefficient fields; requires every involved row.
  FrameVector apply(const FrameVector& X, const FrameVector& Y) const;

 private:
  std::size_t slot(int A, int B) const;

  ConnectionKind kind_;
  int n1_, n2_;
  std::vector<std::optional<FrameVector>> rows_;
};

struct KoszulResult {
  ConnectionTable table;
  double compatibility = 0.0;  // max |E_A G_BC - G(nabla_A E_B, E_C) - G(E_B, nabla_A E_C)|
  double torsion = 0.0;        // max |nabla_A E_B - nabla_B E_A - [E_A, E_B]|
};

KoszulResult koszul_levi_civita(const ProductGeometry& pg);

struct LeviBlock {
  std::string name;
  double max_abs = 0.0;  // discrepancy against Koszul
  std::vector<int> witness;  // frame indices (A, B, component)
};

struct LeviClosedForms {
  ConnectionTable table;
  std::vector<LeviBlock> blocks;
};

LeviClosedForms levi_civita_closed_forms(const ProductGeometry& pg, const ConnectionTable& koszul);

// Rows nabla_{E_A} d/dy^b, vertical outputs only, read off the Levi-Civita table.
ConnectionTable induced_vertical_connection(const ConnectionTable& koszul);

struct VaismanResult {
  ConnectionTable table;
  double preservation = 0.0;  // (i) leakage across distributions
  double metricity = 0.0;     // (ii) all-vertical and all-horizontal triples
  double torsion = 0.0;       // (iii) torsion projections
};

VaismanResult vaisman_connection(const ProductGeometry& pg);

// Max over structural rows (delta_a d/dy^b, d/dy^a d/dy^b) of |induced - Vaisman|.
double same_connection_gap(const ConnectionTable& induced, const ConnectionTable& vaisman);

struct ReinhartValue {
  double defect = 0.0;   // (nabla^v_X G)(Y, Z)
  double identity = 0.0;  // 2 X Y Z f2^2 C_ijk + 2 X Y Z f1^2 C_abc from factor tensors
};

// Precondition error unless X is vertical and Y, Z horizontal.
ReinhartValue reinhart_defect(const ProductGeometry& pg, const VaismanResult& vaisman, const FrameVector& X,
                              const FrameVector& Y, const FrameVector& Z);

FrameVector apply_J(const FrameVector& X);
// Omega(X, Y) = G(X, J Y).
double symplectic_form(const LiftedMetric& G, const FrameVector& X, const FrameVector& Y);

// Omega in the coordinate basis [dx, du, dy, dv] of the flat ordering.
std::vector<std::vector<double>> omega_coordinates(const ProductGeometry& pg);

struct ClosednessResult {
  double d_omega = 0.0;       // max |dOmega| over coordinate triples
  double omega_plus_dw = 0.0;  // max |Omega + d omega|
};

ClosednessResult closedness_check(const ProductConfig& cfg, const TangentSample& p);

struct NijenhuisResult {
  std::vector<FrameVector> closed;  // (A, B) row-major
  std::vector<FrameVector> direct;
  double agreement = 0.0;
  double max_norm = 0.0;
  double skew = 0.0;
};

NijenhuisResult nijenhuis(const ProductGeometry& pg);

struct KahlerVerdict {
  bool kahler = false;
  double max_R = 0.0;
  double max_N = 0.0;
  bool consistent = false;  // (max_N <= tol_n) == (max_R <= tol)
};

inline constexpr double kIdentityTol = 1e-7;
inline constexpr double kDerivedTol = 1e-6;

KahlerVerdict kahler_verdict(const ProductConfig& cfg, const std::vector<TangentSample>& region,
                             double tol = kIdentityTol, double tol_n = kIdentityTol);

struct TotallyGeodesic {
  bool vertical = false;
  bool horizontal = false;
  double max_F_minus_G = 0.0;
  double max_C = 0.0;
  double max_R = 0.0;
  double koszul_vertical = 0.0;    // max |h nabla_{d/dy^a} d/dy^b|
  double koszul_horizontal = 0.0;  // max |v nabla_{delta_a} delta_b|
  bool consistent = false;          // Koszul cross-check agrees with both verdicts
};

TotallyGeodesic totally_geodesic_verdicts(const ProductConfig& cfg, const std::vector<TangentSample>& region,
                                          double tol = kIdentityTol);

}  // namespace dwf
