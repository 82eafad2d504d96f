#pragma once

#include <cstdint>

#include "mctsvs/inner_opt.hpp"
#include "mctsvs/objective.hpp"
#include "mctsvs/trace.hpp"

namespace mctsvs {

struct VanillaBoConfig {
  std::int64_t budget = 600;
  int batch = 3;
  int initial_points = 12;
  std::uint64_t seed = 0;
  ProposeOptions propose;
  HistoryCap history_cap;
};

/// GP-EI over all D variables after a Latin hypercube initial design.
RunTrace vanilla_bo_run(const ObjectiveSpec& spec, const VanillaBoConfig& config);

/// Uniform sampling of the whole box.
RunTrace random_search_run(const ObjectiveSpec& spec, std::int64_t budget, std::uint64_t seed);

}  // namespace mctsvs
