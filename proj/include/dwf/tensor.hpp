#pragma once

// Dense tensors over the combined index range with a Latin/Greek block split.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dwf {

enum class Variance { Upper, Lower };

class BlockTensor {
 public:
  BlockTensor() = default;
  BlockTensor(int n1, int n2, std::vector<Variance> variance);

  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  int dim() const noexcept { return n1_ + n2_; }
  int rank() const noexcept { return static_cast<int>(variance_.size()); }
  const std::vector<Variance>& variance() const noexcept { return variance_; }

  template <typename... I>
  double& operator()(I... idx) {
    const std::array<int, sizeof...(I)> i{static_cast<int>(idx)...};
    return data_[offset(i)];
  }
  template <typename... I>
  double operator()(I... idx) const {
    const std::array<int, sizeof...(I)> i{static_cast<int>(idx)...};
    return data_[offset(i)];
  }
  double& at(std::span<const int> idx) { return data_[offset(idx)]; }
  double at(std::span<const int> idx) const { return data_[offset(idx)]; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  // Multi-index of the flat position.
  std::vector<int> unflatten(std::size_t pos) const;
  bool is_latin(int a) const noexcept { return a < n1_; }
  // True when the index tuple mixes Latin and Greek entries.
  bool is_mixed(std::span<const int> idx) const noexcept;

  double max_abs() const noexcept;
  double max_abs_mixed() const;
  // Max |this - other|; shapes must match.
  double max_abs_diff(const BlockTensor& other) const;

 private:
  std::size_t offset(std::span<const int> idx) const;

  int n1_ = 0;
  int n2_ = 0;
  std::vector<Variance> variance_;
  std::vector<double> data_;
};

}  // namespace dwf
