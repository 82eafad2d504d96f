#include <benchmark/benchmark.h>

#include "mctsvs/mcts.hpp"
#include "mctsvs/objective.hpp"
#include "mctsvs/vs_core.hpp"

namespace {

using namespace mctsvs;

InformationSet random_information_set(int dim, int entries, std::uint64_t seed) {
  Rng rng(seed);
  InformationSet info(dim);
  for (int e = 0; e < entries; ++e) {
    const auto m = random_subset_of_size(dim, 1 + static_cast<int>(uniform_index(rng, dim)), rng);
    std::vector<EvaluatedPoint> batch;
    for (int s = 0; s < 3; ++s) batch.push_back({Eigen::VectorXd::Zero(dim), uniform01(rng)});
    info.add(m, std::move(batch));
    info.add(VariableIndexSet::all(dim).difference(m).empty() ? m
                                                              : VariableIndexSet::all(dim).difference(m),
             {{Eigen::VectorXd::Zero(dim), uniform01(rng)}});
  }
  return info;
}

void BM_VariableScore(benchmark::State& state) {
  const auto info = random_information_set(static_cast<int>(state.range(0)), 200, 1);
  for (auto _ : state) benchmark::DoNotOptimize(variable_score(info));
}
BENCHMARK(BM_VariableScore)->Arg(100)->Arg(300)->Arg(500);

// A short MCTS-VS run with the random-search inner optimizer isolates the
// tree and bookkeeping overhead from GP fitting.
void BM_MctsVsRandomSearch(benchmark::State& state) {
  const ObjectiveSpec spec = make_problem("hartmann6_300");
  for (auto _ : state) {
    mcts::MctsVsConfig c;
    c.n_e = state.range(0);
    c.optimizer = OptimizerKind::random_search;
    c.seed = 7;
    benchmark::DoNotOptimize(mcts::mcts_vs_run(spec, c));
  }
}
BENCHMARK(BM_MctsVsRandomSearch)->Arg(120)->Arg(600)->Unit(benchmark::kMillisecond);

}  // namespace
