#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "oas/engine.hpp"

namespace oas {

enum class Scenario { Fig1Decoupled, Fig2Alg1, Fig3Alg2, Custom };

// Engine driven by a Custom scenario. The named scenarios fix their own.
enum class EngineKind { Alg1, Alg2, DecoupledIid, DecoupledOrthogonal };

enum class AdaptationChoice { EngineDefault, TopK, Threshold };

struct BaselineFlags {
  bool lasso = false;
  bool mmse_bound = false;
  bool nonadaptive = false;
  friend bool operator==(const BaselineFlags&, const BaselineFlags&) = default;
};

struct ExperimentSpec {
  Scenario scenario = Scenario::Custom;
  EngineKind engine = EngineKind::Alg1;
  double delta = 0.1;
  double sigma_t2 = 1.0;
  double sigma2 = 0.01;
  std::size_t n = 200;  // samples per trial (population size for decoupled runs)
  std::vector<std::size_t> m_list{1};
  std::vector<double> rho_list{1.0};
  double d_th_db = -26.5;
  std::size_t trials = 1;
  std::uint64_t master_seed = 1;
  BaselineFlags baselines;
  DistortionMode distortion_mode = DistortionMode::PaperDerivative;
  InterferenceVariance interference = InterferenceVariance::SignalSecondMoment;
  // Adaptation rule for the Alg1 and Alg2 engines. EngineDefault means
  // top-K for Alg1 and threshold for Alg2; decoupled engines fix their own
  // rule by ensemble.
  AdaptationChoice adaptation = AdaptationChoice::EngineDefault;
  bool record_timing = false;
  std::size_t workers = 0;  // 0: OAS_WORKERS or hardware concurrency

  /// Canonical defaults for a named scenario.
  static ExperimentSpec defaults(Scenario scenario);

  double d_th() const;

  /// Throws ConfigError naming the first offending value. Engine scenarios
  /// reject any rho for which n / rho is not an integer.
  void validate() const;
};

struct ResultRow {
  std::string scenario;
  std::string algorithm;
  double rho = 0.0;
  std::size_t m = 0;
  std::size_t subframe = 0;
  double mse_mean = 0.0;
  double mse_stderr = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Power dB to linear: 10^(db / 10).
double db_to_linear(double db);

std::string to_string(Scenario s);
std::string to_string(EngineKind e);
Scenario scenario_from_string(const std::string& s);
EngineKind engine_from_string(const std::string& s);

/// Stream tag used in place of the m index when deriving the per-trial
/// signal seed, so every engine and baseline at one (rho, trial) sees the
/// same signal.
inline constexpr std::uint64_t kSignalStream = 0xFFFF'FFFF'0000'0001ULL;
inline constexpr std::uint64_t kBaselineStream = 0xFFFF'FFFF'0000'0002ULL;

/// Runs the sweep. Trials execute on a bounded worker pool; output rows are
/// sorted canonically and reductions run in trial order, so the result does
/// not depend on the number of workers.
///
/// Seeds: the engine stream of trial t at (rho index i, m index j) is
/// derive_seed(master, i, j, t); the signal is drawn from
/// derive_seed(master, i, kSignalStream, t) and baseline projections from
/// derive_seed(master, i, kBaselineStream, t).
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

std::size_t resolve_worker_count(std::size_t requested);

}  // namespace oas
