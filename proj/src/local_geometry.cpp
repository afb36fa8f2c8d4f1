#include "dwf/local_geometry.hpp"

#include <string>

#include "dwf/error.hpp"
#include "dwf/linalg.hpp"

namespace dwf {

JetTensor::JetTensor(int dim, int rank) : dim_(dim), rank_(rank) {
  std::size_t size = 1;
  for (int r = 0; r < rank; ++r) size *= static_cast<std::size_t>(dim);
  data_.assign(size, Jet(0.0));
}

std::size_t JetTensor::offset(std::initializer_list<int> idx) const {
  if (static_cast<int>(idx.size()) != rank_) fail(ErrorKind::Argument, "wrong number of tensor indices");
  std::size_t pos = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) fail(ErrorKind::Argument, "tensor index out of range");
    pos = pos * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return pos;
}

LocalGeometry::LocalGeometry(Jet F2, std::vector<int> base_vars, std::vector<int> fiber_vars,
                             std::vector<double> fiber_values)
    : F2_(std::move(F2)), base_(std::move(base_vars)), fiber_(std::move(fiber_vars)) {
  if (base_.size() != fiber_.size() || fiber_values.size() != fiber_.size() || base_.empty()) {
    fail(ErrorKind::Argument, "local geometry needs matching base/fiber variable lists");
  }
  if (F2_.is_constant()) fail(ErrorKind::Argument, "local geometry needs a seeded F^2 jet");
  order_ = F2_.order();
  const auto& layout = F2_.layout();
  for (std::size_t a = 0; a < fiber_.size(); ++a) {
    y_.push_back(Jet::variable(layout, order_, fiber_[a], fiber_values[a]));
  }
}

void LocalGeometry::require_order(int needed, const char* what) const {
  if (order_ < needed) {
    fail(ErrorKind::Capability, std::string(what) + " needs an F^2 jet of order " + std::to_string(needed) +
                                    ", have " + std::to_string(order_));
  }
}

Jet LocalGeometry::delta(const Jet& f, int b) const {
  const auto& n = nonlinear();
  Jet out = dx(f, b);
  for (int c = 0; c < dim(); ++c) out -= n(c, b) * dy(f, c);
  return out;
}

const JetTensor& LocalGeometry::g() const {
  if (!g_) {
    require_order(2, "fundamental tensor");
    const int m = dim();
    JetTensor t(m, 2);
    for (int a = 0; a < m; ++a) {
      const Jet da = dy(F2_, a);
      for (int b = a; b < m; ++b) {
        t(a, b) = 0.5 * dy(da, b);
        t(b, a) = t(a, b);
      }
    }
    g_ = std::move(t);
  }
  return *g_;
}

const JetTensor& LocalGeometry::ginv() const {
  if (!ginv_) {
    const auto& gt = g();
    const auto m = static_cast<std::size_t>(dim());
    Matrix<Jet> a(m, std::vector<Jet>(m));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) a[i][j] = gt(i, j);
    }
    const auto inv = invert(a);
    JetTensor t(dim(), 2);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) t(i, j) = inv[i][j];
    }
    ginv_ = std::move(t);
  }
  return *ginv_;
}

const JetTensor& LocalGeometry::cartan() const {
  if (!cartan_) {
    require_order(3, "Cartan tensor");
    const auto& gt = g();
    const int m = dim();
    JetTensor t(m, 3);
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) {
        for (int c = 0; c < m; ++c) {
          t(a, b, c) = 0.5 * dy(gt(a, b), c);
          t(b, a, c) = t(a, b, c);
        }
      }
    }
    cartan_ = std::move(t);
  }
  return *cartan_;
}

const JetTensor& LocalGeometry::cartan_upper() const {
  if (!cartan_upper_) {
    const auto& c = cartan();
    const auto& gi = ginv();
    const int m = dim();
    JetTensor t(m, 3);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        for (int d = 0; d < m; ++d) {
          Jet s(0.0);
          for (int e = 0; e < m; ++e) s += gi(a, e) * c(e, b, d);
          t(a, b, d) = s;
        }
      }
    }
    cartan_upper_ = std::move(t);
  }
  return *cartan_upper_;
}

const JetTensor& LocalGeometry::mean_cartan() const {
  if (!mean_cartan_) {
    const auto& c = cartan();
    const auto& gi = ginv();
    const int m = dim();
    JetTensor t(m, 1);
    for (int a = 0; a < m; ++a) {
      Jet s(0.0);
      for (int b = 0; b < m; ++b) {
        for (int d = 0; d < m; ++d) s += gi(b, d) * c(a, b, d);
      }
      t(a) = s;
    }
    mean_cartan_ = std::move(t);
  }
  return *mean_cartan_;
}

const JetTensor& LocalGeometry::spray() const {
  if (!spray_) {
    require_order(2, "spray");
    const int m = dim();
    std::vector<Jet> term(static_cast<std::size_t>(m));
    for (int b = 0; b < m; ++b) {
      const Jet dyb = dy(F2_, b);
      Jet s = -dx(F2_, b);
      for (int c = 0; c < m; ++c) s += dx(dyb, c) * y_[static_cast<std::size_t>(c)];
      term[static_cast<std::size_t>(b)] = s;
    }
    const auto& gi = ginv();
    JetTensor t(m, 1);
    for (int a = 0; a < m; ++a) {
      Jet s(0.0);
      for (int b = 0; b < m; ++b) s += gi(a, b) * term[static_cast<std::size_t>(b)];
      t(a) = 0.25 * s;
    }
    spray_ = std::move(t);
  }
  return *spray_;
}

const JetTensor& LocalGeometry::nonlinear() const {
  if (!nonlinear_) {
    require_order(3, "nonlinear connection");
    const auto& G = spray();
    const int m = dim();
    JetTensor t(m, 2);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) t(a, b) = dy(G(a), b);
    }
    nonlinear_ = std::move(t);
  }
  return *nonlinear_;
}

const JetTensor& LocalGeometry::berwald_connection() const {
  if (!gc_) {
    require_order(4, "Berwald connection coefficients");
    const auto& n = nonlinear();
    const int m = dim();
    JetTensor t(m, 3);
    for (int c = 0; c < m; ++c) {
      for (int a = 0; a < m; ++a) {
        for (int b = a; b < m; ++b) {
          t(c, a, b) = dy(n(c, a), b);
          t(c, b, a) = t(c, a, b);
        }
      }
    }
    gc_ = std::move(t);
  }
  return *gc_;
}

const JetTensor& LocalGeometry::berwald_curvature() const {
  if (!b_) {
    require_order(5, "Berwald curvature");
    const auto& gc = berwald_connection();
    const int m = dim();
    JetTensor t(m, 4);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        for (int c = 0; c < m; ++c) {
          for (int d = 0; d < m; ++d) t(a, b, c, d) = dy(gc(a, b, c), d);
        }
      }
    }
    b_ = std::move(t);
  }
  return *b_;
}

const JetTensor& LocalGeometry::delta_g() const {
  if (!dg_) {
    require_order(3, "adapted derivatives of g");
    const auto& gt = g();
    const int m = dim();
    JetTensor t(m, 3);
    for (int e = 0; e < m; ++e) {
      for (int a = e; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
          t(e, a, b) = delta(gt(e, a), b);
          t(a, e, b) = t(e, a, b);
        }
      }
    }
    dg_ = std::move(t);
  }
  return *dg_;
}

const JetTensor& LocalGeometry::horizontal() const {
  if (!f_) {
    const auto& dg = delta_g();
    const auto& gi = ginv();
    const int m = dim();
    JetTensor t(m, 3);
    for (int c = 0; c < m; ++c) {
      for (int a = 0; a < m; ++a) {
        for (int b = a; b < m; ++b) {
          Jet s(0.0);
          for (int e = 0; e < m; ++e) s += gi(c, e) * (dg(e, a, b) + dg(e, b, a) - dg(a, b, e));
          t(c, a, b) = 0.5 * s;
          t(c, b, a) = t(c, a, b);
        }
      }
    }
    f_ = std::move(t);
  }
  return *f_;
}

const JetTensor& LocalGeometry::bracket_curvature() const {
  if (!rb_) {
    require_order(4, "bracket curvature");
    const auto& n = nonlinear();
    const int m = dim();
    JetTensor t(m, 3);
    for (int c = 0; c < m; ++c) {
      for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
          t(c, a, b) = delta(n(c, a), b) - delta(n(c, b), a);
          t(c, b, a) = -t(c, a, b);
        }
      }
    }
    rb_ = std::move(t);
  }
  return *rb_;
}

const JetTensor& LocalGeometry::hh_curvature() const {
  if (!rhh_) {
    require_order(4, "hh-curvature");
    const auto& f = horizontal();
    const int m = dim();
    JetTensor t(m, 4);
    for (int b = 0; b < m; ++b) {
      for (int a = 0; a < m; ++a) {
        for (int c = 0; c < m; ++c) {
          for (int d = c + 1; d < m; ++d) {
            Jet s = delta(f(a, b, c), d) - delta(f(a, b, d), c);
            for (int e = 0; e < m; ++e) s += f(a, d, e) * f(e, b, c) - f(a, c, e) * f(e, b, d);
            t(b, a, c, d) = s;
            t(b, a, d, c) = -s;
          }
        }
      }
    }
    rhh_ = std::move(t);
  }
  return *rhh_;
}

const std::vector<std::vector<double>>& LocalGeometry::riemann_map() const {
  if (!riemann_map_) {
    require_order(4, "Riemann curvature map");
    const auto& G = spray();
    const int m = dim();
    std::vector<std::vector<double>> r(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m)));
    for (int a = 0; a < m; ++a) {
      for (int k = 0; k < m; ++k) {
        double s = 2.0 * G(a).d(base_var(k));
        for (int j = 0; j < m; ++j) {
          s -= y_[static_cast<std::size_t>(j)].value() * G(a).dd(base_var(j), fiber_var(k));
          s += 2.0 * G(j).value() * G(a).dd(fiber_var(j), fiber_var(k));
          s -= G(a).d(fiber_var(j)) * G(j).d(fiber_var(k));
        }
        r[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] = s;
      }
    }
    riemann_map_ = std::move(r);
  }
  return *riemann_map_;
}

}  // namespace dwf
