#include <gtest/gtest.h>

#include <cmath>

#include "oas/errors.hpp"
#include "oas/lasso.hpp"
#include "oas/priors.hpp"

namespace oas {
namespace {

struct Instance {
  Matrix a;
  Vector x;
  Vector y;
};

Instance random_instance(std::size_t k, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Instance inst;
  inst.a = iid_gaussian(k, n, rng);
  const auto x = sample_signal(Prior::bernoulli_gaussian(0.1, 1.0), n, rng);
  inst.x = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(n));
  std::normal_distribution<double> noise(0.0, 0.1);
  inst.y = inst.a * inst.x;
  for (Eigen::Index i = 0; i < inst.y.size(); ++i) inst.y(i) += noise(rng);
  return inst;
}

TEST(Lasso, IdentityIsSoftThreshold) {
  const Matrix a = Matrix::Identity(3, 3);
  Vector y(3);
  y << 3.0, -0.5, -2.0;
  const auto sol = lasso_solve({a, y, 1.0});
  ASSERT_TRUE(sol.converged);
  EXPECT_NEAR(sol.x(0), 2.0, 1e-6);
  EXPECT_NEAR(sol.x(1), 0.0, 1e-6);
  EXPECT_NEAR(sol.x(2), -1.0, 1e-6);
}

TEST(Lasso, ZeroLambdaIsLeastSquares) {
  Rng rng(1);
  const Matrix a = iid_gaussian(30, 10, rng);
  Vector y(30);
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = normal(rng);
  LassoOptions opts;
  opts.tol = 1e-10;
  const auto sol = lasso_solve({a, y, 0.0}, opts);
  const Vector ls = a.colPivHouseholderQr().solve(y);
  EXPECT_LE((sol.x - ls).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Lasso, KktResidualOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = random_instance(50, 200, 100 + seed);
    const LassoProblem p{inst.a, inst.y, 0.01};
    const auto sol = lasso_solve(p);
    EXPECT_TRUE(sol.converged) << "seed " << seed;
    EXPECT_LE(lasso_kkt_residual(p, sol.x), 1e-6) << "seed " << seed;
    EXPECT_NEAR(sol.objective, lasso_objective(p, sol.x), 1e-12);
  }
}

TEST(Lasso, LargeLambdaGivesExactZero) {
  const auto inst = random_instance(50, 200, 7);
  const double lmax = (inst.a.transpose() * inst.y).lpNorm<Eigen::Infinity>();
  for (const double scale : {1.0, 1.5, 10.0}) {
    const auto sol = lasso_solve({inst.a, inst.y, scale * lmax});
    EXPECT_TRUE(sol.converged);
    EXPECT_TRUE((sol.x.array() == 0.0).all());
  }
  // Just below the critical value the solution is no longer zero.
  EXPECT_GT(lasso_solve({inst.a, inst.y, 0.99 * lmax}).x.lpNorm<1>(), 0.0);
}

TEST(Lasso, ObjectiveIsNonincreasing) {
  const auto inst = random_instance(50, 200, 8);
  LassoOptions opts;
  opts.record_objective = true;
  const auto sol = lasso_solve({inst.a, inst.y, 0.05}, opts);
  ASSERT_FALSE(sol.objective_history.empty());
  for (std::size_t i = 1; i < sol.objective_history.size(); ++i) {
    EXPECT_LE(sol.objective_history[i], sol.objective_history[i - 1]);
  }
}

TEST(Lasso, WarmStartConvergesFaster) {
  const auto inst = random_instance(50, 200, 9);
  const auto cold = lasso_solve({inst.a, inst.y, 0.02});
  const auto warm = lasso_solve({inst.a, inst.y, 0.02}, {}, &cold.x);
  EXPECT_LE(warm.iterations, cold.iterations);
  EXPECT_LE((warm.x - cold.x).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Lasso, RejectsBadInput) {
  const Matrix a = Matrix::Identity(2, 2);
  const Vector y = Vector::Ones(3);
  EXPECT_THROW(lasso_solve({a, y, 1.0}), InputError);
  const Vector y2 = Vector::Ones(2);
  EXPECT_THROW(lasso_solve({a, y2, -1.0}), InputError);
}

TEST(LassoOracle, DefaultGrid) {
  const auto grid = default_lambda_grid();
  ASSERT_EQ(grid.size(), 17u);
  EXPECT_DOUBLE_EQ(grid.front(), 1e-4);
  EXPECT_DOUBLE_EQ(grid.back(), 1.0);
}

TEST(LassoOracle, NoiselessIdentityPrefersSmallestLambda) {
  const Matrix a = Matrix::Identity(4, 4);
  Vector x(4);
  x << 1.0, 0.0, -2.0, 0.5;
  const auto grid = default_lambda_grid();
  const auto best = lasso_oracle_lambda(a, x, x, grid);
  EXPECT_DOUBLE_EQ(best.lambda, 1e-4);
  EXPECT_NEAR(best.mse, 3.0 * 1e-8 / 4.0, 1e-12);
}

TEST(LassoOracle, ZeroSignalTiesGoToLargestLambda) {
  const Matrix a = Matrix::Identity(3, 3);
  const Vector zero = Vector::Zero(3);
  const std::vector<double> grid{0.1, 1.0, 0.5};
  const auto best = lasso_oracle_lambda(a, zero, zero, grid);
  EXPECT_EQ(best.lambda, 1.0);
  EXPECT_EQ(best.mse, 0.0);
}

TEST(LassoOracle, BeatsEveryGridPoint) {
  const auto inst = random_instance(50, 200, 10);
  const auto grid = default_lambda_grid();
  const auto best = lasso_oracle_lambda(inst.a, inst.y, inst.x, grid);
  for (const double l : grid) {
    const auto sol = lasso_solve({inst.a, inst.y, l});
    const double mse = (sol.x - inst.x).squaredNorm() / inst.x.size();
    EXPECT_LE(best.mse, mse + 1e-6) << "lambda " << l;
  }
}

}  // namespace
}  // namespace oas
