#include "oas/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "oas/asymptotics.hpp"
#include "oas/errors.hpp"
#include "oas/lasso.hpp"
#include "oas/priors.hpp"
#include "oas/random.hpp"

namespace oas {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Fig1Decoupled: return "fig1_decoupled";
    case Scenario::Fig2Alg1: return "fig2_alg1";
    case Scenario::Fig3Alg2: return "fig3_alg2";
    case Scenario::Custom: return "custom";
  }
  return "custom";
}

std::string to_string(EngineKind e) {
  switch (e) {
    case EngineKind::Alg1: return "alg1";
    case EngineKind::Alg2: return "alg2";
    case EngineKind::DecoupledIid: return "decoupled_iid";
    case EngineKind::DecoupledOrthogonal: return "decoupled_orthogonal";
  }
  return "alg1";
}

Scenario scenario_from_string(const std::string& s) {
  for (auto sc : {Scenario::Fig1Decoupled, Scenario::Fig2Alg1, Scenario::Fig3Alg2,
                  Scenario::Custom}) {
    if (to_string(sc) == s) return sc;
  }
  throw ConfigError("unknown scenario '" + s + "'");
}

EngineKind engine_from_string(const std::string& s) {
  for (auto e : {EngineKind::Alg1, EngineKind::Alg2, EngineKind::DecoupledIid,
                 EngineKind::DecoupledOrthogonal}) {
    if (to_string(e) == s) return e;
  }
  throw ConfigError("unknown engine '" + s + "'");
}

ExperimentSpec ExperimentSpec::defaults(Scenario scenario) {
  ExperimentSpec s;
  s.scenario = scenario;
  switch (scenario) {
    case Scenario::Fig1Decoupled:
      s.engine = EngineKind::DecoupledIid;
      s.n = 100000;
      s.m_list = {4, 8, 12};
      s.rho_list = {1, 2, 3, 4, 5, 6};
      s.trials = 4;
      s.baselines.mmse_bound = true;
      break;
    case Scenario::Fig2Alg1:
      s.engine = EngineKind::Alg1;
      s.n = 200;
      s.m_list = {1, 2, 4, 8};
      s.rho_list = {1, 1.25, 2, 2.5, 4, 5, 8};
      s.trials = 100;
      s.baselines.lasso = true;
      break;
    case Scenario::Fig3Alg2:
      s.engine = EngineKind::Alg2;
      s.n = 200;
      s.m_list = {4, 12};
      s.rho_list = {1, 1.25, 2, 2.5, 4, 5};
      s.trials = 100;
      s.baselines.lasso = true;
      s.baselines.mmse_bound = true;
      break;
    case Scenario::Custom:
      break;
  }
  return s;
}

double ExperimentSpec::d_th() const { return db_to_linear(d_th_db); }

namespace {

bool needs_integer_k(EngineKind e) {
  return e == EngineKind::Alg1 || e == EngineKind::Alg2 || e == EngineKind::DecoupledOrthogonal;
}

std::size_t sensors_for(std::size_t n, double rho) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n) / rho));
}

bool divides(std::size_t n, double rho) {
  const double k = static_cast<double>(n) / rho;
  return std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, k) && std::round(k) >= 1.0;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void ExperimentSpec::validate() const {
  if (trials == 0) throw ConfigError("trials must be at least 1");
  if (n == 0) throw ConfigError("n must be at least 1");
  if (!(delta >= 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in [0, 1]");
  if (!(sigma_t2 >= 0.0) || !std::isfinite(sigma_t2)) {
    throw ConfigError("sigma_t2 must be finite and nonnegative");
  }
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw ConfigError("sigma2 must be finite and nonnegative");
  }
  if (!std::isfinite(d_th_db)) throw ConfigError("d_th_db must be finite");
  if (m_list.empty()) throw ConfigError("m_list must not be empty");
  if (rho_list.empty()) throw ConfigError("rho_list must not be empty");
  if (std::set<std::size_t>(m_list.begin(), m_list.end()).size() != m_list.size()) {
    throw ConfigError("m_list contains a repeated value");
  }
  if (std::set<double>(rho_list.begin(), rho_list.end()).size() != rho_list.size()) {
    throw ConfigError("rho_list contains a repeated value");
  }
  for (const auto m : m_list) {
    if (m == 0) throw ConfigError("m_list values must be at least 1");
  }
  if ((engine == EngineKind::DecoupledIid || baselines.mmse_bound) && !(sigma2 > 0.0)) {
    throw ConfigError("sigma2 must be positive for the decoupled i.i.d. engine and mmse_bound");
  }
  for (const double rho : rho_list) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      throw ConfigError("rho " + fmt(rho) + " must be positive and finite");
    }
    if ((needs_integer_k(engine) || baselines.lasso) && !divides(n, rho)) {
      throw ConfigError("rho " + fmt(rho) + " does not give an integer K = n / rho for n = " +
                        std::to_string(n));
    }
    if (engine == EngineKind::DecoupledIid && static_cast<double>(n) / rho < 1.0) {
      throw ConfigError("rho " + fmt(rho) + " leaves fewer than one virtual sensor");
    }
    if ((engine == EngineKind::Alg1 || engine == EngineKind::DecoupledOrthogonal) && rho < 1.0) {
      throw ConfigError("rho " + fmt(rho) + " is below 1; orthogonal sensing needs K <= N");
    }
  }
}

std::size_t resolve_worker_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("OAS_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

enum class TaskKind { Engine, Nonadaptive, Lasso };

struct Task {
  TaskKind kind;
  std::size_t rho_index;
  std::size_t m_index;  // Engine only
  std::size_t trial;
};

struct TaskResult {
  std::vector<double> mse;  // per subframe
  double elapsed_ms = 0.0;
};

Adaptation adaptation_for(const ExperimentSpec& spec) {
  bool threshold = spec.engine == EngineKind::Alg2;
  if (spec.adaptation == AdaptationChoice::TopK) threshold = false;
  if (spec.adaptation == AdaptationChoice::Threshold) threshold = true;
  if (threshold) return Threshold{spec.d_th()};
  return TopK{};
}

std::vector<double> run_engine_trial(const ExperimentSpec& spec, const Prior& prior, double rho,
                                     std::size_t m, std::uint64_t engine_seed,
                                     std::uint64_t signal_seed) {
  if (spec.engine == EngineKind::DecoupledIid || spec.engine == EngineKind::DecoupledOrthogonal) {
    DecoupledConfig cfg;
    cfg.rho = rho;
    cfg.m = m;
    cfg.sigma2 = spec.sigma2;
    cfg.d_th = spec.d_th();
    cfg.n_samples = spec.n;
    cfg.ensemble = spec.engine == EngineKind::DecoupledIid ? Ensemble::IidGaussian
                                                           : Ensemble::Orthogonal;
    cfg.distortion_mode = spec.distortion_mode;
    Rng rng = make_rng(engine_seed);
    return decoupled_oas_simulate(cfg, prior, rng).mse;
  }
  Rng signal_rng = make_rng(signal_seed);
  const auto x = sample_signal(prior, spec.n, signal_rng);
  SensingConfig cfg;
  cfg.n = spec.n;
  cfg.k = sensors_for(spec.n, rho);
  cfg.m = m;
  cfg.sigma2 = spec.sigma2;
  cfg.adaptation = adaptation_for(spec);
  cfg.distortion_mode = spec.distortion_mode;
  cfg.interference = spec.interference;
  Rng rng = make_rng(engine_seed);
  const auto traj = spec.engine == EngineKind::Alg1 ? run_alg1(cfg, prior, x, rng)
                                                     : run_alg2(cfg, prior, x, rng);
  return traj.mse_curve();
}

double run_lasso_trial(const ExperimentSpec& spec, const Prior& prior, double rho,
                       std::uint64_t baseline_seed, std::uint64_t signal_seed) {
  Rng signal_rng = make_rng(signal_seed);
  const auto xs = sample_signal(prior, spec.n, signal_rng);
  const Vector x = Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  Rng rng = make_rng(baseline_seed);
  const std::size_t k = sensors_for(spec.n, rho);
  const Matrix a = iid_gaussian(k, spec.n, rng);
  Vector y = a * x;
  std::normal_distribution<double> noise(0.0, std::sqrt(spec.sigma2));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    y(i) += noise(rng);
  }
  LassoOptions opts;
  opts.tol = 1e-6;
  opts.max_iter = 5000;
  const auto grid = default_lambda_grid();
  return lasso_oracle_lambda(a, y, x, grid, opts).mse;
}

struct Summary {
  double mean = 0.0;
  double stderr_ = 0.0;
};

Summary summarize(const std::vector<double>& values) {
  Summary s;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (const double v : values) sum += v;
  s.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const Prior prior = Prior::bernoulli_gaussian(spec.delta, spec.sigma_t2);
  const std::string scenario = to_string(spec.scenario);
  const std::string engine = to_string(spec.engine);

  std::vector<Task> tasks;
  for (std::size_t ri = 0; ri < spec.rho_list.size(); ++ri) {
    for (std::size_t mi = 0; mi < spec.m_list.size(); ++mi) {
      for (std::size_t t = 0; t < spec.trials; ++t) tasks.push_back({TaskKind::Engine, ri, mi, t});
    }
    if (spec.baselines.nonadaptive) {
      for (std::size_t t = 0; t < spec.trials; ++t) tasks.push_back({TaskKind::Nonadaptive, ri, 0, t});
    }
    if (spec.baselines.lasso) {
      for (std::size_t t = 0; t < spec.trials; ++t) tasks.push_back({TaskKind::Lasso, ri, 0, t});
    }
  }

  std::vector<TaskResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& task = tasks[idx];
      const double rho = spec.rho_list[task.rho_index];
      const auto signal_seed =
          derive_seed(spec.master_seed, task.rho_index, kSignalStream, task.trial);
      const auto start = std::chrono::steady_clock::now();
      try {
        switch (task.kind) {
          case TaskKind::Engine:
            results[idx].mse = run_engine_trial(
                spec, prior, rho, spec.m_list[task.m_index],
                derive_seed(spec.master_seed, task.rho_index, task.m_index, task.trial),
                signal_seed);
            break;
          case TaskKind::Nonadaptive:
            // m index one past m_list keeps this stream disjoint from the
            // adaptive runs.
            results[idx].mse = run_engine_trial(
                spec, prior, rho, 1,
                derive_seed(spec.master_seed, task.rho_index, spec.m_list.size(), task.trial),
                signal_seed);
            break;
          case TaskKind::Lasso:
            results[idx].mse = {run_lasso_trial(
                spec, prior, rho,
                derive_seed(spec.master_seed, task.rho_index, kBaselineStream, task.trial),
                signal_seed)};
            break;
        }
      } catch (...) {
        errors[idx] = std::current_exception();
      }
      results[idx].elapsed_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
              .count();
    }
  };

  const std::size_t workers = std::min(resolve_worker_count(spec.workers), tasks.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Group by (kind, rho, m) in task order so reductions are order-fixed.
  using Key = std::tuple<int, std::size_t, std::size_t>;
  std::map<Key, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    groups[{static_cast<int>(tasks[i].kind), tasks[i].rho_index, tasks[i].m_index}].push_back(i);
  }

  std::vector<ResultRow> rows;
  for (const auto& [key, members] : groups) {
    const auto [kind_i, ri, mi] = key;
    const auto kind = static_cast<TaskKind>(kind_i);
    double elapsed = 0.0;
    for (const auto i : members) elapsed += results[i].elapsed_ms;

    std::string algorithm = engine;
    std::size_t m = 1;
    if (kind == TaskKind::Engine) {
      m = spec.m_list[mi];
    } else if (kind == TaskKind::Nonadaptive) {
      algorithm = engine + "_nonadaptive";
    } else {
      algorithm = "lasso";
    }
    const std::size_t frames = results[members.front()].mse.size();
    for (std::size_t f = 0; f < frames; ++f) {
      std::vector<double> values;
      values.reserve(members.size());
      for (const auto i : members) values.push_back(results[i].mse[f]);
      const auto s = summarize(values);
      rows.push_back({scenario, algorithm, spec.rho_list[ri], m, f + 1, s.mean, s.stderr_,
                      spec.trials, spec.master_seed, spec.record_timing ? elapsed : 0.0});
    }
  }

  if (spec.baselines.mmse_bound) {
    for (const double rho : spec.rho_list) {
      const auto start = std::chrono::steady_clock::now();
      const double bound = nonadaptive_mmse(prior, rho, spec.sigma2);
      const double elapsed =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
              .count();
      // Analytic: no trials, no sampling error.
      rows.push_back({scenario, "mmse_bound", rho, 1, 1, bound, 0.0, 0, spec.master_seed,
                      spec.record_timing ? elapsed : 0.0});
    }
  }

  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.scenario, a.algorithm, a.rho, a.m, a.subframe, a.seed) <
           std::tie(b.scenario, b.algorithm, b.rho, b.m, b.subframe, b.seed);
  });
  return rows;
}

}  // namespace oas
