#include <benchmark/benchmark.h>

#include "oas/lasso.hpp"
#include "oas/priors.hpp"

namespace {

struct Instance {
  oas::Matrix a;
  oas::Vector x;
  oas::Vector y;
};

Instance make_instance(std::size_t k) {
  oas::Rng rng(4);
  Instance inst;
  inst.a = oas::iid_gaussian(k, 200, rng);
  const auto xs = oas::sample_signal(oas::Prior::bernoulli_gaussian(0.1, 1.0), 200, rng);
  inst.x = Eigen::Map<const oas::Vector>(xs.data(), 200);
  inst.y = inst.a * inst.x;
  return inst;
}

void BM_LassoSolve(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(oas::lasso_solve({inst.a, inst.y, 0.01}));
  }
}
BENCHMARK(BM_LassoSolve)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_LassoOracleLambda(benchmark::State& state) {
  const auto inst = make_instance(100);
  const auto grid = oas::default_lambda_grid();
  for (auto _ : state) {
    benchmark::DoNotOptimize(oas::lasso_oracle_lambda(inst.a, inst.y, inst.x, grid));
  }
}
BENCHMARK(BM_LassoOracleLambda)->Unit(benchmark::kMillisecond);

}  // namespace
