#include <benchmark/benchmark.h>

#include "oas/engine.hpp"
#include "oas/sensing.hpp"

namespace {

const oas::Prior kSparse = oas::Prior::bernoulli_gaussian(0.1, 1.0);

void BM_HaarOrthogonal(benchmark::State& state) {
  oas::Rng rng(1);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(oas::haar_orthogonal(k, rng));
  }
}
BENCHMARK(BM_HaarOrthogonal)->Arg(50)->Arg(160)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_Alg1Trajectory(benchmark::State& state) {
  oas::Rng rng(2);
  const auto x = oas::sample_signal(kSparse, 200, rng);
  oas::SensingConfig cfg;
  cfg.n = 200;
  cfg.k = 50;
  cfg.m = static_cast<std::size_t>(state.range(0));
  cfg.sigma2 = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oas::run_alg1(cfg, kSparse, x, rng));
  }
}
BENCHMARK(BM_Alg1Trajectory)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_Alg2Trajectory(benchmark::State& state) {
  oas::Rng rng(3);
  const auto x = oas::sample_signal(kSparse, 200, rng);
  oas::SensingConfig cfg;
  cfg.n = 200;
  cfg.k = 100;
  cfg.m = 12;
  cfg.sigma2 = 0.01;
  cfg.adaptation = oas::Threshold{0.00223872};
  for (auto _ : state) {
    benchmark::DoNotOptimize(oas::run_alg2(cfg, kSparse, x, rng));
  }
}
BENCHMARK(BM_Alg2Trajectory)->Unit(benchmark::kMicrosecond);

}  // namespace
