#include <benchmark/benchmark.h>

#include "mctsvs/acquisition.hpp"
#include "mctsvs/gp.hpp"
#include "mctsvs/objective.hpp"

namespace {

using namespace mctsvs;

struct Data {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

Data hartmann_data(int n, std::uint64_t seed) {
  Rng rng(seed);
  Data d{Eigen::MatrixXd(6, n), Eigen::VectorXd(n)};
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < 6; ++i) d.x(i, j) = uniform01(rng);
    d.y[j] = hartmann6({d.x.col(j).data(), 6});
  }
  return d;
}

void BM_LmlGradient(benchmark::State& state) {
  const Data d = hartmann_data(static_cast<int>(state.range(0)), 1);
  const gp::KernelParams p{1.0, 0.3, 1e-3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(gp::log_marginal_likelihood_with_gradient(d.x, d.y, p));
  }
}
BENCHMARK(BM_LmlGradient)->Arg(100)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State& state) {
  const Data d = hartmann_data(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) {
    Rng rng(3);
    gp::FitReport report;
    benchmark::DoNotOptimize(gp::GPModel::fit(d.x, d.y, rng, {}, gp::KernelParams{}, &report));
    state.counters["lml_evals"] = report.lml_evaluations;
  }
}
BENCHMARK(BM_Fit)->Arg(100)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_ProposeBatch(benchmark::State& state) {
  const Data d = hartmann_data(static_cast<int>(state.range(0)), 4);
  const auto model = gp::GPModel::condition(d.x, d.y, {1.0, 0.3, 1e-3});
  Rng rng(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(acquisition::propose_batch(model, 6, 3, 5000, d.y.maxCoeff(),
                                                        acquisition::ExpectedImprovement{}, rng));
  }
}
BENCHMARK(BM_ProposeBatch)->Arg(100)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

}  // namespace
