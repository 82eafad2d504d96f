#include "mctsvs/index_set.hpp"

#include <algorithm>
#include <iterator>

#include "mctsvs/errors.hpp"

namespace mctsvs {

VariableIndexSet::VariableIndexSet(std::initializer_list<int> indices)
    : VariableIndexSet(std::vector<int>(indices)) {}

VariableIndexSet::VariableIndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (!indices_.empty() && indices_.front() < 0) {
    throw ArgumentError("variable index must be non-negative");
  }
}

VariableIndexSet VariableIndexSet::all(int dimension) { return range(0, dimension); }

VariableIndexSet VariableIndexSet::range(int first, int last_exclusive) {
  VariableIndexSet s;
  for (int i = first; i < last_exclusive; ++i) s.indices_.push_back(i);
  return s;
}

bool VariableIndexSet::contains(int index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

VariableIndexSet VariableIndexSet::set_union(const VariableIndexSet& other) const {
  VariableIndexSet out;
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out.indices_));
  return out;
}

VariableIndexSet VariableIndexSet::intersection(const VariableIndexSet& other) const {
  VariableIndexSet out;
  std::set_intersection(indices_.begin(), indices_.end(), other.indices_.begin(),
                        other.indices_.end(), std::back_inserter(out.indices_));
  return out;
}

VariableIndexSet VariableIndexSet::difference(const VariableIndexSet& other) const {
  VariableIndexSet out;
  std::set_difference(indices_.begin(), indices_.end(), other.indices_.begin(),
                      other.indices_.end(), std::back_inserter(out.indices_));
  return out;
}

bool VariableIndexSet::is_subset_of(const VariableIndexSet& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                       indices_.end());
}

std::string VariableIndexSet::to_mask_string(int dimension) const {
  std::string mask(static_cast<std::size_t>(dimension), '0');
  for (int i : indices_) {
    if (i >= dimension) throw ArgumentError("index outside mask dimension");
    mask[static_cast<std::size_t>(i)] = '1';
  }
  return mask;
}

VariableIndexSet VariableIndexSet::from_mask_string(const std::string& mask) {
  VariableIndexSet out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] == '1') {
      out.indices_.push_back(static_cast<int>(i));
    } else if (mask[i] != '0') {
      throw ArgumentError("mask string may only contain '0' and '1'");
    }
  }
  return out;
}

Eigen::VectorXd boolean_mask(const VariableIndexSet& set, int dimension) {
  if (dimension <= 0) throw ArgumentError("dimension must be positive");
  Eigen::VectorXd mask = Eigen::VectorXd::Zero(dimension);
  for (int i : set) {
    if (i >= dimension) {
      throw ArgumentError("index " + std::to_string(i) + " outside [0, " +
                          std::to_string(dimension) + ")");
    }
    mask[i] = 1.0;
  }
  return mask;
}

}  // namespace mctsvs
