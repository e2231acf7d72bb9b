#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oas/sensing.hpp"

namespace oas {

/// min_x 0.5 * ||y - A x||^2 + lambda * ||x||_1
struct LassoProblem {
  const Matrix& a;
  const Vector& y;
  double lambda = 0.0;
};

struct LassoOptions {
  double tol = 1e-6;  // on the KKT residual
  std::size_t max_iter = 20000;
  bool record_objective = false;
};

struct LassoResult {
  Vector x;
  bool converged = false;
  std::size_t iterations = 0;
  double kkt_residual = 0.0;
  double objective = 0.0;
  double step = 0.0;  // final step size 1 / L
  // Objective after every iteration when LassoOptions::record_objective.
  std::vector<double> objective_history;
};

double lasso_objective(const LassoProblem& p, const Vector& x);

/// max_i of the subgradient optimality violation at x:
/// |g_i + lambda sign(x_i)| for x_i != 0, max(|g_i| - lambda, 0) otherwise,
/// with g = A^T (A x - y).
double lasso_kkt_residual(const LassoProblem& p, const Vector& x);

/// Monotone FISTA with backtracking. The initial Lipschitz estimate is
/// ||A||^2 from 50 power iterations. Returns the best iterate with
/// converged == false when max_iter is hit.
LassoResult lasso_solve(const LassoProblem& p, const LassoOptions& opts = {},
                        const Vector* warm_start = nullptr);

struct OracleLambda {
  double lambda = 0.0;
  double mse = 0.0;
};

/// Solves along the grid (largest lambda first, warm-started) and keeps the
/// lambda whose solution is closest to x_true in mean squared error. Ties go
/// to the larger lambda.
OracleLambda lasso_oracle_lambda(const Matrix& a, const Vector& y, const Vector& x_true,
                                 std::span<const double> grid, const LassoOptions& opts = {});

/// 17 log-spaced points from 1e-4 to 1.
std::vector<double> default_lambda_grid();

}  // namespace oas
