#pragma once

#include <cstddef>
#include <vector>

#include "oas/engine.hpp"
#include "oas/priors.hpp"
#include "oas/random.hpp"

namespace oas {

enum class Ensemble { Orthogonal, IidGaussian };

/// Large-system OAS simulated sample by sample over scalar channels.
struct DecoupledConfig {
  double rho = 1.0;  // inverse load N / K
  std::size_t m = 1;
  double sigma2 = 0.01;
  double d_th = 1.0;  // IidGaussian only; Orthogonal uses top-K_eff
  std::size_t n_samples = 10000;
  Ensemble ensemble = Ensemble::IidGaussian;
  DistortionMode distortion_mode = DistortionMode::PaperDerivative;

  void validate() const;
  // Number of virtual sensors n_samples / rho (rounded for Orthogonal).
  double effective_sensors() const;
};

struct EffectiveNoise {
  double variance = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
};

struct FixedPointOptions {
  double rel_tol = 1e-10;
  std::size_t max_iter = 10000;
  double damping = 0.5;  // applied once the plain iteration starts to oscillate
};

/// Effective noise variance v of the decoupled channel for an i.i.d.
/// projection at inverse load rho: v = sigma2 + rho * mmse(prior, gain 1, v).
///
/// Iterates from v0 = sigma2 + rho * E[x^2]. Stops when the step is below
/// rel_tol * v; throws NumericalError with the residual after max_iter.
EffectiveNoise effective_noise_fixed_point(const Prior& prior, double rho, double sigma2,
                                           const FixedPointOptions& opts = {});

/// MMSE of non-adaptive (single subframe) Bayesian recovery at inverse load
/// rho over an i.i.d. projection.
double nonadaptive_mmse(const Prior& prior, double rho, double sigma2);

struct DecoupledResult {
  // Indexed by subframe (0-based).
  std::vector<double> mse;
  std::vector<double> mse_stderr;  // over the sample population
  std::vector<std::size_t> sensed;
  // Variance of the fresh decoupled observation in each subframe.
  std::vector<double> observation_noise;
};

/// Stacked decoupled system: every sensed sample receives x + z with z drawn
/// at the subframe's effective noise, and observations are summed per
/// sample. Orthogonal ensembles sense the top-K_eff population at noise
/// M sigma2; IidGaussian ensembles sense everything above d_th at the fixed
/// point noise for the current subframe load and noise M sigma2.
DecoupledResult decoupled_oas_simulate(const DecoupledConfig& cfg, const Prior& prior, Rng& rng);

}  // namespace oas
