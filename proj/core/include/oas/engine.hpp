#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "oas/priors.hpp"
#include "oas/random.hpp"
#include "oas/sensing.hpp"

namespace oas {

// Worst-case hard adaptation: sense the K samples with the largest distortion.
struct TopK {};

// Sense every sample whose distortion is at least d_th.
struct Threshold {
  double d_th = 0.0;
};

using Adaptation = std::variant<TopK, Threshold>;

enum class DistortionMode {
  // d = d r / d ybar, the slope of the posterior mean.
  PaperDerivative,
  // d = Var[x | ybar].
  ExactVariance,
};

// Which signal power the matched filter charges for interference from the
// other sensed samples.
enum class InterferenceVariance {
  SignalSecondMoment,  // delta * slab variance
  SlabVariance,        // slab variance alone
};

enum class Algorithm {
  Orthogonal,     // Haar projections, exact decoupling
  MatchedFilter,  // i.i.d. projections, Gaussian-interference decoupling
};

struct SensingConfig {
  std::size_t n = 0;  // samples
  std::size_t k = 0;  // sensors
  std::size_t m = 1;  // subframes
  double sigma2 = 0.0;  // noise variance over the whole sensing duration
  Adaptation adaptation = TopK{};
  DistortionMode distortion_mode = DistortionMode::PaperDerivative;
  InterferenceVariance interference = InterferenceVariance::SignalSecondMoment;

  double subframe_noise_var() const { return static_cast<double>(m) * sigma2; }
  double inverse_load() const { return static_cast<double>(n) / static_cast<double>(k); }

  /// Throws InputError if the configuration cannot drive `algorithm`.
  void validate(Algorithm algorithm) const;
};

/// Per-sample stacked decoupled observation.
struct StackedState {
  std::vector<double> ybar;
  std::vector<std::size_t> count;
  // Total noise variance on ybar.
  std::vector<double> noise_var;

  explicit StackedState(std::size_t n = 0) : ybar(n, 0.0), count(n, 0), noise_var(n, 0.0) {}
};

struct SubframeRecord {
  SelectionSet selection;
  std::vector<double> recoveries;
  std::vector<double> distortions;
  double mse = 0.0;
  StackedState state;
  // Matched filter only: the subframe load |selection| / K and the squared
  // column norms of the sensed columns, aligned with selection.indices().
  double load = 0.0;
  std::vector<double> column_norm2;
};

struct Trajectory {
  std::vector<double> signal;
  std::vector<SubframeRecord> subframes;
  std::vector<double> final_recoveries;
  // 1-based subframe at which the selection came up empty; every later
  // subframe repeats the frozen estimates.
  std::optional<std::size_t> early_stop;

  std::vector<double> mse_curve() const;
  double final_mse() const;
};

/// Orthogonal-observation OAS. Each subframe draws a K x K Haar matrix,
/// places its columns on the selected samples and decouples with U^T.
Trajectory run_alg1(const SensingConfig& cfg, const Prior& prior, std::span<const double> x,
                    Rng& rng);

/// Matched-filter OAS over i.i.d. N(0, 1/K) projections.
Trajectory run_alg2(const SensingConfig& cfg, const Prior& prior, std::span<const double> x,
                    Rng& rng);

/// Single-subframe run of either algorithm. cfg.m must be 1.
Trajectory run_nonadaptive(const SensingConfig& cfg, const Prior& prior,
                           std::span<const double> x, Rng& rng,
                           Algorithm algorithm = Algorithm::Orthogonal);

double mean_squared_error(std::span<const double> x, std::span<const double> r);

}  // namespace oas
