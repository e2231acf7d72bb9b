#include <benchmark/benchmark.h>

#include "oas/asymptotics.hpp"
#include "oas/priors.hpp"

namespace {

const oas::Prior kSparse = oas::Prior::bernoulli_gaussian(0.1, 1.0);

void BM_PosteriorMoments(benchmark::State& state) {
  double y = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oas::posterior_moments(kSparse, y, {3.0, 0.03}));
    y = y > 5.0 ? -5.0 : y + 0.01;
  }
}
BENCHMARK(BM_PosteriorMoments);

void BM_ScalarMmse(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(oas::scalar_mmse(kSparse, {1.0, 0.01}));
  }
}
BENCHMARK(BM_ScalarMmse);

void BM_FixedPoint(benchmark::State& state) {
  const double rho = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(oas::effective_noise_fixed_point(kSparse, rho, 0.01));
  }
}
BENCHMARK(BM_FixedPoint)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
