#include "mctsvs/lhs.hpp"

#include <numeric>
#include <vector>

#include "mctsvs/errors.hpp"

namespace mctsvs {

Eigen::MatrixXd lhs_sample(int n, int d, Rng& rng) {
  if (n < 1) throw ArgumentError("lhs_sample requires n >= 1");
  if (d < 1) throw ArgumentError("lhs_sample requires d >= 1");
  Eigen::MatrixXd design(d, n);
  std::vector<int> strata(static_cast<std::size_t>(n));
  for (int i = 0; i < d; ++i) {
    std::iota(strata.begin(), strata.end(), 0);
    shuffle(strata, rng);
    for (int j = 0; j < n; ++j) {
      design(i, j) = (strata[static_cast<std::size_t>(j)] + uniform01(rng)) / n;
    }
  }
  return design;
}

}  // namespace mctsvs
