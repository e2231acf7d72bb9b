#include "oas/engine.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "oas/errors.hpp"

namespace oas {

void SensingConfig::validate(Algorithm algorithm) const {
  if (n == 0 || k == 0 || m == 0) {
    throw InputError("SensingConfig: n, k and m must be positive");
  }
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw InputError("SensingConfig: sigma2 must be finite and nonnegative");
  }
  if (algorithm == Algorithm::Orthogonal && k > n) {
    std::ostringstream msg;
    msg << "SensingConfig: orthogonal sensing needs k <= n (k = " << k << ", n = " << n << ")";
    throw InputError(msg.str());
  }
  if (const auto* th = std::get_if<Threshold>(&adaptation); th && !(th->d_th > 0.0)) {
    throw InputError("SensingConfig: threshold must be positive");
  }
}

double mean_squared_error(std::span<const double> x, std::span<const double> r) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = x[i] - r[i];
    acc += e * e;
  }
  return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

std::vector<double> Trajectory::mse_curve() const {
  std::vector<double> out;
  out.reserve(subframes.size());
  for (const auto& s : subframes) {
    out.push_back(s.mse);
  }
  return out;
}

double Trajectory::final_mse() const { return subframes.empty() ? 0.0 : subframes.back().mse; }

namespace {

constexpr double kUnsensed = std::numeric_limits<double>::infinity();

SelectionSet select_samples(const SensingConfig& cfg, std::span<const double> distortions,
                            std::size_t capacity) {
  if (std::holds_alternative<TopK>(cfg.adaptation)) {
    return adapt_topk(distortions, std::min(cfg.k, distortions.size()));
  }
  auto picked = adapt_threshold(distortions, std::get<Threshold>(cfg.adaptation).d_th);
  if (picked.size() <= capacity) {
    return picked;
  }
  // More candidates than columns: keep the worst `capacity` of them.
  std::vector<double> masked(distortions.size(), -kUnsensed);
  for (const auto i : picked) {
    masked[i] = distortions[i];
  }
  return adapt_topk(masked, capacity);
}

// Shared bookkeeping for both algorithms: the running estimates and the loop
// that records subframes and handles the empty-selection stop.
class Recorder {
 public:
  Recorder(const SensingConfig& cfg, const Prior& prior, std::span<const double> x)
      : cfg_(cfg),
        prior_(prior),
        state_(cfg.n),
        recoveries_(cfg.n, 0.0),
        distortions_(cfg.n, kUnsensed) {
    traj_.signal.assign(x.begin(), x.end());
    traj_.subframes.reserve(cfg.m);
  }

  StackedState& state() { return state_; }
  std::span<const double> distortions() const { return distortions_; }

  void refresh(std::size_t index) {
    const ScalarChannel ch{static_cast<double>(state_.count[index]), state_.noise_var[index]};
    const auto post = posterior_moments(prior_, state_.ybar[index], ch);
    recoveries_[index] = post.mean;
    distortions_[index] = cfg_.distortion_mode == DistortionMode::PaperDerivative
                              ? post.derivative
                              : post.variance;
  }

  void record(SelectionSet selection, double load = 0.0, std::vector<double> column_norm2 = {}) {
    SubframeRecord rec;
    rec.selection = std::move(selection);
    rec.recoveries = recoveries_;
    rec.distortions = distortions_;
    rec.mse = mean_squared_error(traj_.signal, recoveries_);
    rec.state = state_;
    rec.load = load;
    rec.column_norm2 = std::move(column_norm2);
    traj_.subframes.push_back(std::move(rec));
  }

  // Fills the remaining subframes with the frozen estimates.
  void stop_early() {
    traj_.early_stop = traj_.subframes.size() + 1;
    while (traj_.subframes.size() < cfg_.m) {
      record(SelectionSet{});
    }
  }

  Trajectory finish() {
    traj_.final_recoveries = recoveries_;
    return std::move(traj_);
  }

 private:
  const SensingConfig& cfg_;
  const Prior& prior_;
  StackedState state_;
  std::vector<double> recoveries_;
  std::vector<double> distortions_;
  Trajectory traj_;
};

void check_signal(const SensingConfig& cfg, std::span<const double> x) {
  if (x.size() != cfg.n) {
    throw InputError("OAS: signal length does not match cfg.n");
  }
  for (const double v : x) {
    if (!std::isfinite(v)) {
      throw InputError("OAS: signal contains a non-finite entry");
    }
  }
}

Vector noise_vector(std::size_t k, double variance, Rng& rng) {
  Vector z(static_cast<Eigen::Index>(k));
  std::normal_distribution<double> normal(0.0, std::sqrt(variance));
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z(i) = normal(rng);
  }
  return z;
}

}  // namespace

Trajectory run_alg1(const SensingConfig& cfg, const Prior& prior, std::span<const double> x,
                    Rng& rng) {
  cfg.validate(Algorithm::Orthogonal);
  check_signal(cfg, x);
  Recorder rec(cfg, prior, x);
  const double sub_noise = cfg.subframe_noise_var();
  const Eigen::Map<const Vector> signal(x.data(), static_cast<Eigen::Index>(x.size()));

  for (std::size_t frame = 0; frame < cfg.m; ++frame) {
    auto sel = select_samples(cfg, rec.distortions(), cfg.k);
    if (sel.empty()) {
      rec.stop_early();
      break;
    }
    const Matrix u = haar_orthogonal(cfg.k, rng);
    const auto used = static_cast<Eigen::Index>(sel.size());
    const Matrix a = embed_columns(u.leftCols(used), sel, cfg.n);
    const Vector y = a * signal + noise_vector(cfg.k, sub_noise, rng);
    const Vector decoupled = u.leftCols(used).transpose() * y;

    auto& st = rec.state();
    Eigen::Index j = 0;
    for (const auto i : sel) {
      st.ybar[i] += decoupled(j++);
      st.count[i] += 1;
      st.noise_var[i] = static_cast<double>(st.count[i]) * sub_noise;
      rec.refresh(i);
    }
    rec.record(std::move(sel));
  }
  return rec.finish();
}

Trajectory run_alg2(const SensingConfig& cfg, const Prior& prior, std::span<const double> x,
                    Rng& rng) {
  cfg.validate(Algorithm::MatchedFilter);
  check_signal(cfg, x);
  Recorder rec(cfg, prior, x);
  const double sub_noise = cfg.subframe_noise_var();
  const double interference_power = cfg.interference == InterferenceVariance::SignalSecondMoment
                                        ? prior.second_moment()
                                        : prior.slab_variance();

  for (std::size_t frame = 0; frame < cfg.m; ++frame) {
    auto sel = select_samples(cfg, rec.distortions(), cfg.n);
    if (sel.empty()) {
      rec.stop_early();
      break;
    }
    const Matrix a = iid_gaussian(cfg.k, cfg.n, rng);
    Vector y = noise_vector(cfg.k, sub_noise, rng);
    for (const auto i : sel) {
      y.noalias() += x[i] * a.col(static_cast<Eigen::Index>(i));
    }

    const double load = static_cast<double>(sel.size()) / static_cast<double>(cfg.k);
    const double mf_var = load * interference_power + sub_noise;
    std::vector<double> norms;
    norms.reserve(sel.size());
    auto& st = rec.state();
    for (const auto i : sel) {
      const auto col = a.col(static_cast<Eigen::Index>(i));
      const double norm2 = col.squaredNorm();
      norms.push_back(norm2);
      st.ybar[i] += col.dot(y) / norm2;
      st.count[i] += 1;
      st.noise_var[i] += mf_var / norm2;
      rec.refresh(i);
    }
    rec.record(std::move(sel), load, std::move(norms));
  }
  return rec.finish();
}

Trajectory run_nonadaptive(const SensingConfig& cfg, const Prior& prior,
                           std::span<const double> x, Rng& rng, Algorithm algorithm) {
  if (cfg.m != 1) {
    throw InputError("run_nonadaptive: configuration must have a single subframe");
  }
  return algorithm == Algorithm::Orthogonal ? run_alg1(cfg, prior, x, rng)
                                            : run_alg2(cfg, prior, x, rng);
}

}  // namespace oas
