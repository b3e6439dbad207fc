#pragma once

#include <compare>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace gradedjets {

/// Symmetric multi-index over the base directions, stored in exponent-vector
/// form: entry k counts how often direction k (0-based) occurs. The exponent
/// vector is the canonical representative of the multiset, so two multi-indices
/// are equal iff their vectors are.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(int base_dim) : exp_(static_cast<size_t>(base_dim), 0) {}
  MultiIndex(int base_dim, std::vector<int> exponents) : exp_(std::move(exponents)) {
    if (static_cast<int>(exp_.size()) != base_dim)
      throw std::invalid_argument("multi-index length does not match base dimension");
  }

  static MultiIndex unit(int base_dim, int direction) {
    MultiIndex m(base_dim);
    m.exp_.at(static_cast<size_t>(direction)) = 1;
    return m;
  }

  int base_dim() const { return static_cast<int>(exp_.size()); }
  int order() const { return std::accumulate(exp_.begin(), exp_.end(), 0); }
  int operator[](int direction) const { return exp_.at(static_cast<size_t>(direction)); }
  const std::vector<int>& exponents() const { return exp_; }
  bool empty() const { return order() == 0; }

  /// lambda + Lambda: bump one direction, raising the order by one.
  MultiIndex plus(int direction) const {
    MultiIndex m(*this);
    m.exp_.at(static_cast<size_t>(direction)) += 1;
    return m;
  }

  /// Inverse of plus(); throws if the direction is absent.
  MultiIndex minus(int direction) const {
    MultiIndex m(*this);
    int& e = m.exp_.at(static_cast<size_t>(direction));
    if (e == 0) throw std::invalid_argument("multi-index does not contain direction");
    e -= 1;
    return m;
  }

  /// Lowest direction present, or -1 for the empty multi-index.
  int first_direction() const {
    for (size_t k = 0; k < exp_.size(); ++k)
      if (exp_[k] > 0) return static_cast<int>(k);
    return -1;
  }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) = default;

  /// Graded-lexicographic: by total order, then lexicographically on exponents.
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    if (auto c = a.order() <=> b.order(); c != 0) return c;
    return a.exp_ <=> b.exp_;
  }

private:
  std::vector<int> exp_;
};

} // namespace gradedjets
