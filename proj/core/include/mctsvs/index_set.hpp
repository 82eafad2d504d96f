#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mctsvs {

/// Sorted, duplicate-free set of 0-based variable indices.
///
/// Indices are 0-based throughout the library; index i refers to x[i].
/// An empty set is representable (it is the natural result of some set
/// algebra) but most operations that consume a set reject it.
class VariableIndexSet {
 public:
  VariableIndexSet() = default;
  VariableIndexSet(std::initializer_list<int> indices);
  explicit VariableIndexSet(std::vector<int> indices);

  /// {0, 1, ..., dimension-1}
  static VariableIndexSet all(int dimension);
  static VariableIndexSet range(int first, int last_exclusive);

  [[nodiscard]] bool empty() const { return indices_.empty(); }
  [[nodiscard]] std::size_t size() const { return indices_.size(); }
  [[nodiscard]] bool contains(int index) const;
  [[nodiscard]] std::span<const int> indices() const { return indices_; }
  [[nodiscard]] int operator[](std::size_t i) const { return indices_[i]; }
  [[nodiscard]] auto begin() const { return indices_.begin(); }
  [[nodiscard]] auto end() const { return indices_.end(); }

  [[nodiscard]] VariableIndexSet set_union(const VariableIndexSet& other) const;
  [[nodiscard]] VariableIndexSet intersection(const VariableIndexSet& other) const;
  [[nodiscard]] VariableIndexSet difference(const VariableIndexSet& other) const;
  [[nodiscard]] bool is_subset_of(const VariableIndexSet& other) const;

  /// Largest index + 1, or 0 for the empty set.
  [[nodiscard]] int bound() const { return indices_.empty() ? 0 : indices_.back() + 1; }

  /// '1'/'0' string of length `dimension`, position i set iff i is in the set.
  [[nodiscard]] std::string to_mask_string(int dimension) const;
  static VariableIndexSet from_mask_string(const std::string& mask);

  friend bool operator==(const VariableIndexSet&, const VariableIndexSet&) = default;

 private:
  std::vector<int> indices_;
};

/// g(M): indicator vector of M in R^D. Throws ArgumentError when an index
/// lies outside [0, D).
Eigen::VectorXd boolean_mask(const VariableIndexSet& set, int dimension);

}  // namespace mctsvs
