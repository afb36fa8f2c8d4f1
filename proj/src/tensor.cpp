#include "dwf/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "dwf/error.hpp"

namespace dwf {

BlockTensor::BlockTensor(int n1, int n2, std::vector<Variance> variance)
    : n1_(n1), n2_(n2), variance_(std::move(variance)) {
  if (n1 < 1 || n2 < 1) fail(ErrorKind::Argument, "block tensor needs n1, n2 >= 1");
  if (variance_.empty() || variance_.size() > 4) fail(ErrorKind::Argument, "block tensor rank must be 1..4");
  std::size_t size = 1;
  for (std::size_t r = 0; r < variance_.size(); ++r) size *= static_cast<std::size_t>(dim());
  data_.assign(size, 0.0);
}

std::size_t BlockTensor::offset(std::span<const int> idx) const {
  if (idx.size() != variance_.size()) fail(ErrorKind::Argument, "wrong number of tensor indices");
  std::size_t pos = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim()) fail(ErrorKind::Argument, "tensor index out of range");
    pos = pos * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(i);
  }
  return pos;
}

std::vector<int> BlockTensor::unflatten(std::size_t pos) const {
  std::vector<int> idx(variance_.size());
  for (std::size_t r = idx.size(); r-- > 0;) {
    idx[r] = static_cast<int>(pos % static_cast<std::size_t>(dim()));
    pos /= static_cast<std::size_t>(dim());
  }
  return idx;
}

bool BlockTensor::is_mixed(std::span<const int> idx) const noexcept {
  bool latin = false;
  bool greek = false;
  for (int i : idx) (is_latin(i) ? latin : greek) = true;
  return latin && greek;
}

double BlockTensor::max_abs() const noexcept {
  double m = 0.0;
  for (double e : data_) m = std::max(m, std::abs(e));
  return m;
}

double BlockTensor::max_abs_mixed() const {
  double m = 0.0;
  for (std::size_t p = 0; p < data_.size(); ++p) {
    if (is_mixed(unflatten(p))) m = std::max(m, std::abs(data_[p]));
  }
  return m;
}

double BlockTensor::max_abs_diff(const BlockTensor& other) const {
  if (other.n1_ != n1_ || other.n2_ != n2_ || other.rank() != rank()) {
    fail(ErrorKind::Argument, "tensor shapes differ");
  }
  double m = 0.0;
  for (std::size_t p = 0; p < data_.size(); ++p) m = std::max(m, std::abs(data_[p] - other.data_[p]));
  return m;
}

}  // namespace dwf
