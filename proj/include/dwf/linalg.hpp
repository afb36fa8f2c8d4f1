#pragma once

// Small dense inverse by Gauss-Jordan elimination with partial pivoting.
// Works for double and Jet entries; pivoting and the condition estimate use
// point values only.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "dwf/error.hpp"
#include "dwf/jet.hpp"

namespace dwf {

inline constexpr double kConditionLimit = 1e12;

template <typename T>
using Matrix = std::vector<std::vector<T>>;

namespace detail {
inline double reciprocal_of(double x) { return 1.0 / x; }
inline Jet reciprocal_of(const Jet& x) { return reciprocal(x); }
inline bool is_exact_zero(double x) { return x == 0.0; }
inline bool is_exact_zero(const Jet& x) {
  for (double c : x.coefficients()) {
    if (c != 0.0) return false;
  }
  return true;
}

template <typename T>
double norm1(const Matrix<T>& m) {
  double best = 0.0;
  for (std::size_t c = 0; c < m.size(); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < m.size(); ++r) s += std::abs(value(m[r][c]));
    best = std::max(best, s);
  }
  return best;
}
}  // namespace detail

template <typename T>
Matrix<T> invert(const Matrix<T>& a) {
  const std::size_t n = a.size();
  Matrix<T> work = a;
  Matrix<T> inv(n, std::vector<T>(n, T(0.0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (work[i].size() != n) fail(ErrorKind::Argument, "matrix is not square");
    inv[i][i] = T(1.0);
  }
  const double scale = detail::norm1(a);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(value(work[r][col])) > std::abs(value(work[pivot][col]))) pivot = r;
    }
    if (std::abs(value(work[pivot][col])) <= 1e-300 || std::abs(value(work[pivot][col])) < scale * 1e-15) {
      fail(ErrorKind::Singular, "matrix is singular");
    }
    std::swap(work[col], work[pivot]);
    std::swap(inv[col], inv[pivot]);
    const T p = detail::reciprocal_of(work[col][col]);
    for (std::size_t c = 0; c < n; ++c) {
      work[col][c] = work[col][c] * p;
      inv[col][c] = inv[col][c] * p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const T factor = work[r][col];
      if (value(factor) == 0.0 && detail::is_exact_zero(factor)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        work[r][c] = work[r][c] - factor * work[col][c];
        inv[r][c] = inv[r][c] - factor * inv[col][c];
      }
    }
  }
  const double cond = scale * detail::norm1(inv);
  if (!(cond <= kConditionLimit)) {
    fail(ErrorKind::Singular, "matrix is ill-conditioned (condition estimate " + std::to_string(cond) + ")");
  }
  return inv;
}

}  // namespace dwf
