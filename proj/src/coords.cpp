#include "dwf/coords.hpp"

#include <cmath>
#include <string>

#include "dwf/error.hpp"
#include "dwf/jet.hpp"

namespace dwf {

int flat_index(CoordIndex c, int n1, int n2) {
  const int limit = (c.block == Block::Base1 || c.block == Block::Fiber1) ? n1 : n2;
  if (c.offset < 0 || c.offset >= limit) {
    fail(ErrorKind::Argument, "coordinate offset " + std::to_string(c.offset) + " out of range");
  }
  const int n = n1 + n2;
  switch (c.block) {
    case Block::Base1: return c.offset;
    case Block::Base2: return n1 + c.offset;
    case Block::Fiber1: return n + c.offset;
    case Block::Fiber2: return n + n1 + c.offset;
  }
  return -1;
}

CoordIndex coord_of_flat(int flat, int n1, int n2) {
  const int n = n1 + n2;
  if (flat < 0 || flat >= 2 * n) fail(ErrorKind::Argument, "flat coordinate index out of range");
  if (flat < n1) return {Block::Base1, flat};
  if (flat < n) return {Block::Base2, flat - n1};
  if (flat < n + n1) return {Block::Fiber1, flat - n};
  return {Block::Fiber2, flat - n - n1};
}

MultiIndex::MultiIndex(std::initializer_list<std::pair<CoordIndex, int>> parts) {
  for (const auto& [c, k] : parts) add(c, k);
}

void MultiIndex::add(CoordIndex c, int order) {
  if (order < 1) fail(ErrorKind::Argument, "multi-index orders must be positive");
  for (const auto& p : parts_) {
    if (p.first == c) fail(ErrorKind::Argument, "coordinate repeated in multi-index");
  }
  if (total_order() + order > kMaxJetOrder) {
    fail(ErrorKind::Capability, "multi-index total order exceeds " + std::to_string(kMaxJetOrder));
  }
  parts_.emplace_back(c, order);
}

int MultiIndex::total_order() const noexcept {
  int t = 0;
  for (const auto& p : parts_) t += p.second;
  return t;
}

namespace {
double norm(const std::vector<double>& a) {
  double s = 0.0;
  for (double e : a) s += e * e;
  return std::sqrt(s);
}
}  // namespace

void TangentSample::validate() const {
  if (x.empty() || u.empty()) fail(ErrorKind::Argument, "both factors need dimension >= 1");
  if (y.size() != x.size() || v.size() != u.size()) {
    fail(ErrorKind::Argument, "fiber vector sizes must match base dimensions");
  }
  if (norm(y) < kSlitFloor || norm(v) < kSlitFloor) {
    fail(ErrorKind::Domain, "sample lies outside the slit tangent bundle (|y| or |v| below 1e-12)");
  }
}

std::vector<double> TangentSample::flat() const {
  std::vector<double> out;
  out.reserve(2 * (x.size() + u.size()));
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), u.begin(), u.end());
  out.insert(out.end(), y.begin(), y.end());
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

TangentSample TangentSample::from_flat(const std::vector<double>& flat, int n1, int n2) {
  if (static_cast<int>(flat.size()) != 2 * (n1 + n2)) fail(ErrorKind::Argument, "flat point has wrong length");
  TangentSample s;
  auto it = flat.begin();
  s.x.assign(it, it + n1);
  it += n1;
  s.u.assign(it, it + n2);
  it += n2;
  s.y.assign(it, it + n1);
  it += n1;
  s.v.assign(it, it + n2);
  return s;
}

TangentSample TangentSample::scaled(double lambda) const {
  TangentSample s = *this;
  for (auto& e : s.y) e *= lambda;
  for (auto& e : s.v) e *= lambda;
  return s;
}

}  // namespace dwf
