#include "oas/priors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oas/errors.hpp"

namespace oas {

Prior Prior::bernoulli_gaussian(double delta, double slab_variance) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw InputError("Prior: delta must lie in [0, 1]");
  }
  if (!(slab_variance >= 0.0) || !std::isfinite(slab_variance)) {
    throw InputError("Prior: slab variance must be finite and nonnegative");
  }
  return Prior(PriorKind::BernoulliGaussian, delta, slab_variance);
}

Prior Prior::pure_gaussian(double variance) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw InputError("Prior: variance must be finite and nonnegative");
  }
  return Prior(PriorKind::PureGaussian, 1.0, variance);
}

Prior Prior::degenerate_zero() { return Prior(PriorKind::DegenerateZero, 0.0, 0.0); }

std::vector<double> sample_signal(const Prior& prior, std::size_t n, Rng& rng) {
  std::vector<double> x(n, 0.0);
  if (prior.is_degenerate()) {
    return x;
  }
  std::bernoulli_distribution active(prior.delta());
  std::normal_distribution<double> slab(0.0, std::sqrt(prior.slab_variance()));
  for (auto& v : x) {
    // Both draws are consumed per entry so the stream position does not
    // depend on the realized support.
    const bool on = active(rng);
    const double t = slab(rng);
    v = on ? t : 0.0;
  }
  return x;
}

namespace {

void check_inputs(double ybar, ScalarChannel ch) {
  if (!std::isfinite(ybar)) {
    throw InputError("posterior: observation is not finite");
  }
  if (!(ch.gain >= 0.0) || !std::isfinite(ch.gain)) {
    throw InputError("posterior: channel gain must be finite and nonnegative");
  }
  if (!(ch.noise_var >= 0.0) || !std::isfinite(ch.noise_var)) {
    throw InputError("posterior: channel noise variance must be finite and nonnegative");
  }
}

// logistic(t) = 1 / (1 + exp(-t)) without overflow for either sign.
double logistic(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

PosteriorMoments posterior_moments(const Prior& prior, double ybar, ScalarChannel ch) {
  check_inputs(ybar, ch);
  PosteriorMoments out;
  if (prior.is_degenerate()) {
    return out;
  }
  const double delta = prior.delta();
  const double st2 = prior.slab_variance();
  const double c = ch.gain;
  const double v = ch.noise_var;

  if (c == 0.0) {
    out.variance = prior.second_moment();
    return out;
  }
  if (v == 0.0) {
    // Noiseless limit: x = ybar / c exactly. The slope vanishes only at the
    // spike, where the posterior puts all of its mass on zero.
    out.mean = ybar / c;
    out.derivative = (delta < 1.0 && ybar == 0.0) ? 0.0 : 1.0 / c;
    return out;
  }

  const double s2 = c * c * st2 + v;      // slab evidence variance
  const double m1 = c * st2 * ybar / s2;  // slab posterior mean
  const double v1 = v * st2 / s2;         // slab posterior variance
  const double m1_slope = c * st2 / s2;

  double pi = 1.0;
  double pi_q = 0.0;  // pi * (1 - pi)
  double log_odds_slope = 0.0;
  if (delta < 1.0) {
    // log p_slab(ybar) - log p_spike(ybar), both Gaussian evidences, with the
    // quadratic terms combined before exponentiation.
    const double log_odds = std::log(delta) - std::log1p(-delta) + 0.5 * std::log(v / s2) +
                            0.5 * ybar * ybar * (c * c * st2) / (v * s2);
    pi = logistic(log_odds);
    pi_q = pi * logistic(-log_odds);
    log_odds_slope = ybar * (c * c * st2) / (v * s2);
  }

  out.mean = pi * m1;
  out.variance = pi * v1 + pi_q * m1 * m1;
  out.derivative = pi_q * log_odds_slope * m1 + pi * m1_slope;
  return out;
}

double posterior_mean(const Prior& prior, double ybar, ScalarChannel ch) {
  return posterior_moments(prior, ybar, ch).mean;
}

double posterior_mean_derivative(const Prior& prior, double ybar, ScalarChannel ch) {
  return posterior_moments(prior, ybar, ch).derivative;
}

double posterior_variance(const Prior& prior, double ybar, ScalarChannel ch) {
  return posterior_moments(prior, ybar, ch).variance;
}

double scalar_mmse(const Prior& prior, ScalarChannel ch) {
  check_inputs(0.0, ch);
  if (!(ch.gain > 0.0)) {
    throw InputError("scalar_mmse: channel gain must be positive");
  }
  if (prior.is_degenerate() || ch.noise_var == 0.0) {
    return 0.0;
  }

  using boost::math::quadrature::gauss_kronrod;
  constexpr double kTail = 12.0;  // standard deviations per branch
  constexpr unsigned kMaxDepth = 12;
  constexpr double kRelTol = 1e-12;

  const double c = ch.gain;
  const double st2 = prior.slab_variance();
  const double delta = prior.delta();
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

  struct Branch {
    double weight;
    double variance;
  };
  const Branch branches[] = {{1.0 - delta, ch.noise_var}, {delta, c * c * st2 + ch.noise_var}};

  double total = 0.0;
  double total_err = 0.0;
  for (const auto& b : branches) {
    if (b.weight == 0.0) {
      continue;
    }
    const double scale = std::sqrt(b.variance);
    auto integrand = [&](double t) {
      const double var = posterior_moments(prior, scale * t, ch).variance;
      return var * inv_sqrt_2pi * std::exp(-0.5 * t * t);
    };
    // Var[x | ybar] is even in ybar; integrate the half line piecewise so
    // the detection transition of the spike branch is always resolved.
    for (double lo = 0.0; lo < kTail; lo += 1.0) {
      double err = 0.0;
      const double part =
          gauss_kronrod<double, 31>::integrate(integrand, lo, lo + 1.0, kMaxDepth, kRelTol, &err);
      total += 2.0 * b.weight * part;
      total_err += 2.0 * b.weight * err;
    }
  }
  if (!(total_err <= 1e-9 * total + 1e-15)) {
    std::ostringstream msg;
    msg << "scalar_mmse: quadrature did not converge (estimate " << total << ", error "
        << total_err << ", delta " << delta << ", slab variance " << st2 << ", gain " << c
        << ", noise variance " << ch.noise_var << ")";
    throw NumericalError(msg.str());
  }
  return total;
}

}  // namespace oas
