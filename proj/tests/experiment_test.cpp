#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oas/errors.hpp"
#include "oas/experiment.hpp"
#include "oas/results_io.hpp"
#include "oas/spec_file.hpp"

namespace oas {
namespace {

ExperimentSpec small_spec() {
  return parse_spec_text(
      "scenario = custom\n"
      "engine = alg1\n"
      "n = 40\n"
      "m_list = 1, 2\n"
      "rho_list = 2, 4\n"
      "trials = 4\n"
      "master_seed = 11\n"
      "baselines = nonadaptive\n");
}

std::string csv_of(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  write_csv(rows, os);
  return os.str();
}

TEST(SpecFile, ParsesKeysOverScenarioDefaults) {
  const auto spec = parse_spec_text(
      "# comment\n"
      "scenario = fig3_alg2\n"
      "\n"
      "trials = 7\n"
      "rho_list = 2, 4\n"
      "distortion = variance\n"
      "mf_interference = slab_variance\n");
  EXPECT_EQ(spec.scenario, Scenario::Fig3Alg2);
  EXPECT_EQ(spec.engine, EngineKind::Alg2);
  EXPECT_EQ(spec.trials, 7u);
  EXPECT_EQ(spec.rho_list, (std::vector<double>{2, 4}));
  EXPECT_EQ(spec.m_list, (std::vector<std::size_t>{4, 12}));
  EXPECT_EQ(spec.distortion_mode, DistortionMode::ExactVariance);
  EXPECT_EQ(spec.interference, InterferenceVariance::SlabVariance);
  EXPECT_TRUE(spec.baselines.lasso);
  EXPECT_TRUE(spec.baselines.mmse_bound);
}

TEST(SpecFile, ScenarioKeyAppliesFirstWhereverItAppears) {
  const auto spec = parse_spec_text("trials = 3\nscenario = fig2_alg1\n");
  EXPECT_EQ(spec.trials, 3u);
  EXPECT_EQ(spec.engine, EngineKind::Alg1);
}

TEST(SpecFile, UnknownKeyNamesTheLine) {
  try {
    parse_spec_text("scenario = fig3_alg2\nsigma_2 = 0.01\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("sigma_2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
}

TEST(SpecFile, RejectsRepeatedKeysAndBadValues) {
  EXPECT_THROW(parse_spec_text("trials = 1\ntrials = 2\n"), ConfigError);
  EXPECT_THROW(parse_spec_text("trials = many\n"), ConfigError);
  EXPECT_THROW(parse_spec_text("engine = alg3\n"), ConfigError);
  EXPECT_THROW(parse_spec_text("no equals sign\n"), ConfigError);
  EXPECT_THROW(load_spec_file("/nonexistent/path.spec"), IoError);
}

TEST(SpecValidate, RejectsNonIntegerSensorCount) {
  auto spec = ExperimentSpec::defaults(Scenario::Fig2Alg1);
  spec.rho_list = {1, 3};
  try {
    spec.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("rho 3"), std::string::npos) << e.what();
  }
}

TEST(SpecValidate, RejectsDuplicatesAndSubunitLoadsForOrthogonalSensing) {
  auto spec = ExperimentSpec::defaults(Scenario::Fig2Alg1);
  spec.m_list = {4, 4};
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = ExperimentSpec::defaults(Scenario::Fig2Alg1);
  spec.rho_list = {0.5};
  EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(SpecDefaults, NamedScenarios) {
  const auto fig3 = ExperimentSpec::defaults(Scenario::Fig3Alg2);
  EXPECT_EQ(fig3.n, 200u);
  EXPECT_EQ(fig3.m_list, (std::vector<std::size_t>{4, 12}));
  EXPECT_DOUBLE_EQ(fig3.d_th_db, -26.5);
  EXPECT_NO_THROW(fig3.validate());
  EXPECT_NO_THROW(ExperimentSpec::defaults(Scenario::Fig1Decoupled).validate());
  EXPECT_NO_THROW(ExperimentSpec::defaults(Scenario::Fig2Alg1).validate());
}

TEST(Conversions, DecibelsAndNames) {
  EXPECT_DOUBLE_EQ(db_to_linear(-26.5), std::pow(10.0, -2.65));
  EXPECT_DOUBLE_EQ(db_to_linear(0.0), 1.0);
  for (const auto s : {Scenario::Fig1Decoupled, Scenario::Fig2Alg1, Scenario::Fig3Alg2,
                       Scenario::Custom}) {
    EXPECT_EQ(scenario_from_string(to_string(s)), s);
  }
  EXPECT_THROW(scenario_from_string("fig4"), ConfigError);
}

TEST(WorkerCount, ExplicitThenEnvironment) {
  EXPECT_EQ(resolve_worker_count(3), 3u);
  setenv("OAS_WORKERS", "5", 1);
  EXPECT_EQ(resolve_worker_count(0), 5u);
  unsetenv("OAS_WORKERS");
  EXPECT_GE(resolve_worker_count(0), 1u);
}

TEST(RunExperiment, RowLayout) {
  const auto rows = run_experiment(small_spec());
  // alg1: 2 rho x (1 + 2 subframes); nonadaptive: 2 rho x 1.
  ASSERT_EQ(rows.size(), 8u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.scenario, "custom");
    EXPECT_EQ(r.trials, 4u);
    EXPECT_EQ(r.seed, 11u);
    EXPECT_EQ(r.wall_time_ms, 0.0);
    EXPECT_GT(r.mse_mean, 0.0);
  }
  EXPECT_EQ(rows.front().algorithm, "alg1");
  EXPECT_EQ(rows.back().algorithm, "alg1_nonadaptive");
}

TEST(RunExperiment, NoiselessOrthogonalRecoveryIsExact) {
  auto spec = small_spec();
  spec.sigma2 = 0.0;
  spec.rho_list = {1};
  spec.m_list = {1};
  for (const auto& r : run_experiment(spec)) {
    EXPECT_LE(r.mse_mean, 1e-20) << r.algorithm;
  }
}

TEST(RunExperiment, IndependentOfWorkerCount) {
  auto spec = small_spec();
  spec.baselines.lasso = true;
  spec.workers = 1;
  const auto one = run_experiment(spec);
  spec.workers = 4;
  EXPECT_EQ(run_experiment(spec), one);
}

TEST(RunExperiment, SeedChangesResults) {
  auto spec = small_spec();
  const auto a = run_experiment(spec);
  spec.master_seed = 12;
  EXPECT_NE(csv_of(run_experiment(spec)), csv_of(a));
}

TEST(RunExperiment, TimingOnlyWhenRequested) {
  auto spec = small_spec();
  spec.record_timing = true;
  double total = 0.0;
  for (const auto& r : run_experiment(spec)) total += r.wall_time_ms;
  EXPECT_GT(total, 0.0);
}

TEST(RunExperiment, MmseBoundRowsAreAnalytic) {
  auto spec = ExperimentSpec::defaults(Scenario::Custom);
  spec.engine = EngineKind::DecoupledIid;
  spec.n = 2000;
  spec.rho_list = {2, 4};
  spec.m_list = {2};
  spec.trials = 2;
  spec.baselines.mmse_bound = true;
  int bounds = 0;
  for (const auto& r : run_experiment(spec)) {
    if (r.algorithm == "mmse_bound") {
      ++bounds;
      EXPECT_EQ(r.trials, 0u);
      EXPECT_EQ(r.mse_stderr, 0.0);
    }
  }
  EXPECT_EQ(bounds, 2);
}

TEST(RunExperiment, StderrShrinksWithTrials) {
  auto spec = small_spec();
  spec.baselines = {};
  spec.trials = 8;
  const auto few = run_experiment(spec);
  spec.trials = 128;
  const auto many = run_experiment(spec);
  ASSERT_EQ(few.size(), many.size());
  for (std::size_t i = 0; i < few.size(); ++i) {
    EXPECT_LT(many[i].mse_stderr, few[i].mse_stderr);
  }
}

TEST(ResultsIo, HeaderOnlyForNoRows) {
  EXPECT_EQ(csv_of({}), std::string(kCsvHeader) + "\n");
}

TEST(ResultsIo, CsvRoundTrip) {
  const auto rows = run_experiment(small_spec());
  const auto text = csv_of(rows);
  EXPECT_EQ(text.rfind(kCsvHeader, 0), 0u);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  std::istringstream is(text);
  const auto back = read_csv(is);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].algorithm, rows[i].algorithm);
    EXPECT_EQ(back[i].m, rows[i].m);
    EXPECT_EQ(back[i].subframe, rows[i].subframe);
    EXPECT_NEAR(back[i].mse_mean, rows[i].mse_mean, 1e-9 * rows[i].mse_mean);
  }
  EXPECT_EQ(csv_of(back), text);
}

TEST(ResultsIo, ByteIdenticalFiles) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = (dir / "oas_experiment_test_a.csv").string();
  const auto b = (dir / "oas_experiment_test_b.csv").string();
  write_csv(run_experiment(small_spec()), a);
  write_csv(run_experiment(small_spec()), b);
  std::ifstream fa(a, std::ios::binary);
  std::ifstream fb(b, std::ios::binary);
  std::stringstream sa;
  std::stringstream sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  EXPECT_FALSE(sa.str().empty());
  EXPECT_EQ(sa.str(), sb.str());
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(ResultsIo, PlotdataBlocks) {
  const std::vector<ResultRow> rows{
      {"custom", "alg1", 2.0, 2, 1, 0.5, 0.1, 4, 1, 0.0},
      {"custom", "alg1", 2.0, 2, 2, 0.25, 0.05, 4, 1, 0.0},
      {"custom", "alg1", 4.0, 2, 2, 0.3, 0.02, 4, 1, 0.0},
      {"custom", "lasso", 2.0, 1, 1, 0.7, 0.01, 4, 1, 0.0},
  };
  std::ostringstream os;
  write_plotdata(rows, os);
  const std::string text = os.str();
  EXPECT_NE(text.find("# scenario=custom algorithm=alg1 m=2"), std::string::npos);
  EXPECT_NE(text.find("# scenario=custom algorithm=lasso m=1"), std::string::npos);
  EXPECT_NE(text.find("\n\n\n"), std::string::npos);
  // Only final subframes are plotted.
  EXPECT_EQ(text.find("0.5 "), std::string::npos);
  EXPECT_NE(text.find("0.25"), std::string::npos);
}

}  // namespace
}  // namespace oas
