#pragma once

#include <cstddef>
#include <vector>

#include "oas/random.hpp"

namespace oas {

enum class PriorKind { BernoulliGaussian, PureGaussian, DegenerateZero };

/// Spike-and-slab signal law: x = b * t with b ~ Bernoulli(delta) and
/// t ~ N(0, slab_variance).
///
/// PureGaussian and DegenerateZero are the delta = 1 and delta = 0 members of
/// the same family and go through the same closed forms.
class Prior {
 public:
  static Prior bernoulli_gaussian(double delta, double slab_variance);
  static Prior pure_gaussian(double variance);
  static Prior degenerate_zero();

  PriorKind kind() const { return kind_; }
  double delta() const { return delta_; }
  double slab_variance() const { return slab_variance_; }
  double second_moment() const { return delta_ * slab_variance_; }

  // True when every draw is exactly zero.
  bool is_degenerate() const { return delta_ == 0.0 || slab_variance_ == 0.0; }

 private:
  Prior(PriorKind kind, double delta, double slab_variance)
      : kind_(kind), delta_(delta), slab_variance_(slab_variance) {}

  PriorKind kind_;
  double delta_;
  double slab_variance_;
};

/// Stacked scalar observation ybar = gain * x + z, z ~ N(0, noise_var).
///
/// gain is the number of times the sample has been sensed. gain == 0 means
/// "never observed" and yields the prior moments. noise_var == 0 with a
/// positive gain is the noiseless limit.
struct ScalarChannel {
  double gain = 0.0;
  double noise_var = 1.0;
};

struct PosteriorMoments {
  double mean = 0.0;
  double variance = 0.0;
  // d mean / d ybar, computed from its own closed form.
  double derivative = 0.0;
};

std::vector<double> sample_signal(const Prior& prior, std::size_t n, Rng& rng);

/// All three posterior quantities from one evaluation of the slab weight.
PosteriorMoments posterior_moments(const Prior& prior, double ybar, ScalarChannel ch);

double posterior_mean(const Prior& prior, double ybar, ScalarChannel ch);
double posterior_mean_derivative(const Prior& prior, double ybar, ScalarChannel ch);
double posterior_variance(const Prior& prior, double ybar, ScalarChannel ch);

/// E[(x - E[x | ybar])^2] over the joint law of (x, ybar). Requires gain > 0.
///
/// Integrates Var[x | ybar] against the two-component Gaussian mixture
/// density of ybar with adaptive Gauss-Kronrod; throws NumericalError if the
/// error estimate exceeds the internal tolerance.
double scalar_mmse(const Prior& prior, ScalarChannel ch);

}  // namespace oas
