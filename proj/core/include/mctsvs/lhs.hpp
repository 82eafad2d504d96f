#pragma once

#include <Eigen/Core>

#include "mctsvs/random.hpp"

namespace mctsvs {

/// Latin hypercube design of n points in [0,1)^d, returned as a d x n
/// matrix. In every dimension the n coordinates occupy the strata
/// [j/n, (j+1)/n) exactly once, with uniform jitter inside each stratum.
Eigen::MatrixXd lhs_sample(int n, int d, Rng& rng);

}  // namespace mctsvs
