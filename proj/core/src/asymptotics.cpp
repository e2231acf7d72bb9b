#include "oas/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "oas/errors.hpp"
#include "oas/sensing.hpp"

namespace oas {

void DecoupledConfig::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw InputError("DecoupledConfig: rho must be positive and finite");
  }
  if (m == 0 || n_samples == 0) {
    throw InputError("DecoupledConfig: m and n_samples must be positive");
  }
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw InputError("DecoupledConfig: sigma2 must be finite and nonnegative");
  }
  if (ensemble == Ensemble::IidGaussian) {
    if (!(sigma2 > 0.0)) {
      throw InputError("DecoupledConfig: the i.i.d. ensemble needs sigma2 > 0");
    }
    if (!(d_th > 0.0)) {
      throw InputError("DecoupledConfig: threshold must be positive");
    }
  }
  const double k_eff = effective_sensors();
  if (!(k_eff >= 1.0)) {
    throw InputError("DecoupledConfig: n_samples / rho must be at least 1");
  }
  if (ensemble == Ensemble::Orthogonal && k_eff > static_cast<double>(n_samples)) {
    throw InputError("DecoupledConfig: orthogonal ensemble needs rho >= 1");
  }
}

double DecoupledConfig::effective_sensors() const {
  const double k = static_cast<double>(n_samples) / rho;
  return ensemble == Ensemble::Orthogonal ? std::round(k) : k;
}

EffectiveNoise effective_noise_fixed_point(const Prior& prior, double rho, double sigma2,
                                           const FixedPointOptions& opts) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw InputError("effective_noise_fixed_point: rho must be finite and nonnegative");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InputError("effective_noise_fixed_point: sigma2 must be positive and finite");
  }
  EffectiveNoise out{sigma2, 0, 0.0};
  if (rho == 0.0 || prior.is_degenerate()) {
    return out;
  }

  double v = sigma2 + rho * prior.second_moment();
  double relax = 1.0;
  double prev_step = 0.0;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    const double step = sigma2 + rho * scalar_mmse(prior, {1.0, v}) - v;
    if (std::abs(step) <= opts.rel_tol * v) {
      return {v, it, std::abs(step)};
    }
    if (prev_step != 0.0 && (step > 0.0) != (prev_step > 0.0)) {
      relax = opts.damping;
    }
    prev_step = step;
    v += relax * step;
    out.residual = std::abs(step);
  }
  std::ostringstream msg;
  msg << "effective_noise_fixed_point: no convergence after " << opts.max_iter
      << " iterations (rho " << rho << ", sigma2 " << sigma2 << ", last v " << v
      << ", residual " << out.residual << ")";
  throw NumericalError(msg.str());
}

double nonadaptive_mmse(const Prior& prior, double rho, double sigma2) {
  const auto noise = effective_noise_fixed_point(prior, rho, sigma2);
  return scalar_mmse(prior, {1.0, noise.variance});
}

DecoupledResult decoupled_oas_simulate(const DecoupledConfig& cfg, const Prior& prior, Rng& rng) {
  cfg.validate();
  const std::size_t n = cfg.n_samples;
  const double k_eff = cfg.effective_sensors();
  const double sub_noise = static_cast<double>(cfg.m) * cfg.sigma2;

  const auto x = sample_signal(prior, n, rng);
  std::vector<double> ybar(n, 0.0);
  std::vector<double> noise_var(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  std::vector<double> r(n, 0.0);
  std::vector<double> d(n, std::numeric_limits<double>::infinity());

  DecoupledResult out;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t frame = 0; frame < cfg.m; ++frame) {
    const SelectionSet sel = cfg.ensemble == Ensemble::Orthogonal
                                 ? adapt_topk(d, static_cast<std::size_t>(k_eff))
                                 : adapt_threshold(d, cfg.d_th);

    double obs_var = sub_noise;
    if (cfg.ensemble == Ensemble::IidGaussian && !sel.empty()) {
      const double load = static_cast<double>(sel.size()) / k_eff;
      obs_var = effective_noise_fixed_point(prior, load, sub_noise).variance;
    }
    const double obs_sd = std::sqrt(obs_var);

    for (const auto i : sel) {
      ybar[i] += x[i] + obs_sd * normal(rng);
      count[i] += 1;
      noise_var[i] += obs_var;
      const auto post =
          posterior_moments(prior, ybar[i], {static_cast<double>(count[i]), noise_var[i]});
      r[i] = post.mean;
      d[i] = cfg.distortion_mode == DistortionMode::PaperDerivative ? post.derivative
                                                                     : post.variance;
    }

    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = (x[i] - r[i]) * (x[i] - r[i]);
      sum += e;
      sum_sq += e * e;
    }
    const double nd = static_cast<double>(n);
    const double mean = sum / nd;
    const double var = n > 1 ? std::max(0.0, (sum_sq - nd * mean * mean) / (nd - 1.0)) : 0.0;
    out.mse.push_back(mean);
    out.mse_stderr.push_back(std::sqrt(var / nd));
    out.sensed.push_back(sel.size());
    out.observation_noise.push_back(sel.empty() ? 0.0 : obs_var);
  }
  return out;
}

}  // namespace oas
