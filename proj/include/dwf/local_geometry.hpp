#pragma once

// Finsler geometry of one F^2 jet at a point.
//
// The F^2 jet is expanded over every flat coordinate of the product bundle.
// base_vars / fiber_vars pick which jet variables play the roles of x^a and
// y^a, so the same engine serves the product metric and each factor metric
// embedded in the product coordinates. All derived objects are jets in the
// same variables (orders drop by one per differentiation) and are computed
// lazily; a LocalGeometry must not be shared mutably across threads.

#include <optional>
#include <vector>

#include "dwf/jet.hpp"

namespace dwf {

class JetTensor {
 public:
  JetTensor() = default;
  JetTensor(int dim, int rank);

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return rank_; }
  template <typename... I>
  Jet& operator()(I... idx) {
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <typename... I>
  const Jet& operator()(I... idx) const {
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <typename... I>
  double val(I... idx) const {
    return data_[offset({static_cast<int>(idx)...})].value();
  }

 private:
  std::size_t offset(std::initializer_list<int> idx) const;

  int dim_ = 0;
  int rank_ = 0;
  std::vector<Jet> data_;
};

class LocalGeometry {
 public:
  LocalGeometry(Jet F2, std::vector<int> base_vars, std::vector<int> fiber_vars, std::vector<double> fiber_values);

  int dim() const noexcept { return static_cast<int>(base_.size()); }
  int order() const noexcept { return order_; }
  const Jet& F2() const noexcept { return F2_; }
  const Jet& fiber(int a) const { return y_[static_cast<std::size_t>(a)]; }
  int base_var(int a) const { return base_[static_cast<std::size_t>(a)]; }
  int fiber_var(int a) const { return fiber_[static_cast<std::size_t>(a)]; }

  // g_ab = 1/2 d^2 F^2 / dy^a dy^b.
  const JetTensor& g() const;
  const JetTensor& ginv() const;
  // C_abc = 1/2 dg_ab/dy^c.
  const JetTensor& cartan() const;
  // C^a_bc = g^{ae} C_ebc.
  const JetTensor& cartan_upper() const;
  // I_a = g^{bc} C_abc.
  const JetTensor& mean_cartan() const;
  // G^a from the spray formula.
  const JetTensor& spray() const;
  // N(a, b) = G^a_b = dG^a/dy^b.
  const JetTensor& nonlinear() const;
  // Gc(c, a, b) = G^c_ab = dG^c_a/dy^b.
  const JetTensor& berwald_connection() const;
  // B(a, b, c, d) = d^3 G^a / dy^b dy^c dy^d.
  const JetTensor& berwald_curvature() const;
  // dg(e, a, b) = delta_b g_ea.
  const JetTensor& delta_g() const;
  // F(c, a, b) = F^c_ab.
  const JetTensor& horizontal() const;
  // R(c, a, b) = R^c_ab = delta_b G^c_a - delta_a G^c_b.
  const JetTensor& bracket_curvature() const;
  // Rhh(b, a, c, d) = R_b^a_cd from the Berwald-type connection F.
  const JetTensor& hh_curvature() const;
  // R^a_b of the y-contracted Riemann curvature (values).
  const std::vector<std::vector<double>>& riemann_map() const;

  // delta_b f = df/dx^b - G^c_b df/dy^c.
  Jet delta(const Jet& f, int b) const;
  Jet dy(const Jet& f, int a) const { return f.derivative(fiber_var(a)); }
  Jet dx(const Jet& f, int a) const { return f.derivative(base_var(a)); }

 private:
  void require_order(int needed, const char* what) const;

  Jet F2_;
  std::vector<int> base_;
  std::vector<int> fiber_;
  std::vector<Jet> y_;
  int order_ = 0;

  mutable std::optional<JetTensor> g_, ginv_, cartan_, cartan_upper_, mean_cartan_, spray_, nonlinear_, gc_, b_,
      dg_, f_, rb_, rhh_;
  mutable std::optional<std::vector<std::vector<double>>> riemann_map_;
};

}  // namespace dwf
