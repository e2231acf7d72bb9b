#pragma once

// Posterior moments of the spike-and-slab prior computed by integrating over
// the signal value x, independently of the closed forms in oas/priors.
//
// The slab part is integrated piecewise with a 61-point Gauss-Kronrod rule
// over +-8 slab posterior standard deviations around the integrand's peak,
// one standard deviation per piece (no subdivision needed); the spike at
// x = 0 contributes a point mass. Everything is scaled by the peak of the
// slab exponent so neither term overflows.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace oas::testing {

struct OracleMoments {
  double mean = 0.0;
  double variance = 0.0;
  double derivative = 0.0;  // (c / v) * variance
};

inline double integrate_slab(auto&& f, double center, double width) {
  using boost::math::quadrature::gauss_kronrod;
  constexpr int kPieces = 16;
  const double lo = center - 8.0 * width;
  const double step = 16.0 * width / kPieces;
  double total = 0.0;
  for (int i = 0; i < kPieces; ++i) {
    const double a = lo + i * step;
    total += gauss_kronrod<double, 61>::integrate(f, a, a + step, 0);
  }
  return total;
}

inline OracleMoments oracle_moments(double delta, double slab_var, double ybar, double gain,
                                    double noise_var) {
  OracleMoments out;
  if (delta == 0.0 || slab_var == 0.0) {
    return out;
  }
  if (gain == 0.0) {
    out.variance = delta * slab_var;
    return out;
  }
  const double c = gain;
  const double v = noise_var;
  const auto exponent = [&](double x) {
    return -(ybar - c * x) * (ybar - c * x) / (2.0 * v) - x * x / (2.0 * slab_var);
  };
  // Peak and curvature of the (concave quadratic) slab exponent.
  const double precision = c * c / v + 1.0 / slab_var;
  const double peak = (c * ybar / v) / precision;
  const double width = 1.0 / std::sqrt(precision);
  const double shift = exponent(peak);

  // Common factor sqrt(2 pi v) removed from both terms; the slab carries
  // the 1 / sqrt(2 pi slab_var) of its density.
  const double slab_norm = delta / std::sqrt(2.0 * std::numbers::pi * slab_var);
  const double spike = (1.0 - delta) * std::exp(exponent(0.0) - shift);

  const auto weight = [&](double x) { return std::exp(exponent(x) - shift); };
  const double z_slab = slab_norm * integrate_slab(weight, peak, width);
  const double z = spike + z_slab;
  const double m1 =
      slab_norm * integrate_slab([&](double x) { return x * weight(x); }, peak, width);
  out.mean = m1 / z;

  const double mean = out.mean;
  const double central = slab_norm * integrate_slab(
                                         [&](double x) { return (x - mean) * (x - mean) * weight(x); },
                                         peak, width);
  out.variance = (central + spike * mean * mean) / z;
  out.derivative = (c / v) * out.variance;
  return out;
}

}  // namespace oas::testing
