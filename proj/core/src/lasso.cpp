#include "oas/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "oas/errors.hpp"

namespace oas {

namespace {

Vector soft_threshold(const Vector& v, double tau) {
  return v.unaryExpr([tau](double t) {
    if (t > tau) return t - tau;
    if (t < -tau) return t + tau;
    return 0.0;
  });
}

double kkt_from_gradient(const Vector& x, const Vector& grad, double lambda) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double g = grad(i);
    double viol;
    if (x(i) > 0.0) {
      viol = std::abs(g + lambda);
    } else if (x(i) < 0.0) {
      viol = std::abs(g - lambda);
    } else {
      viol = std::max(std::abs(g) - lambda, 0.0);
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

double power_iteration_norm2(const Matrix& a, int steps) {
  Vector v = Vector::Constant(a.cols(), 1.0 / std::sqrt(static_cast<double>(a.cols())));
  double est = 0.0;
  for (int s = 0; s < steps; ++s) {
    Vector w = a.transpose() * (a * v);
    est = w.norm();
    if (est == 0.0) {
      return 0.0;
    }
    v = w / est;
  }
  return est;
}

void check_problem(const LassoProblem& p) {
  if (p.a.rows() != p.y.size()) {
    throw InputError("lasso: matrix rows do not match observation length");
  }
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) {
    throw InputError("lasso: lambda must be finite and nonnegative");
  }
}

}  // namespace

double lasso_objective(const LassoProblem& p, const Vector& x) {
  return 0.5 * (p.a * x - p.y).squaredNorm() + p.lambda * x.lpNorm<1>();
}

double lasso_kkt_residual(const LassoProblem& p, const Vector& x) {
  check_problem(p);
  const Vector grad = p.a.transpose() * (p.a * x - p.y);
  return kkt_from_gradient(x, grad, p.lambda);
}

LassoResult lasso_solve(const LassoProblem& p, const LassoOptions& opts, const Vector* warm_start) {
  check_problem(p);
  if (!(opts.tol > 0.0)) {
    throw InputError("lasso_solve: tolerance must be positive");
  }
  const auto n = p.a.cols();
  LassoResult out;
  out.x = warm_start ? *warm_start : Vector::Zero(n);
  if (out.x.size() != n) {
    throw InputError("lasso_solve: warm start has the wrong length");
  }

  // All-zero solution is exact once lambda dominates the correlation at 0.
  const Vector corr0 = p.a.transpose() * p.y;
  if (p.lambda >= corr0.lpNorm<Eigen::Infinity>()) {
    out.x = Vector::Zero(n);
    out.converged = true;
    out.kkt_residual = kkt_from_gradient(out.x, -corr0, p.lambda);
    out.objective = lasso_objective(p, out.x);
    return out;
  }

  double lip = std::max(power_iteration_norm2(p.a, 50), 1e-12);

  Vector x = out.x;
  Vector ax = p.a * x;
  Vector grad_x = p.a.transpose() * (ax - p.y);
  double f_x = 0.5 * (ax - p.y).squaredNorm() + p.lambda * x.lpNorm<1>();
  Vector x_prev = x;
  Vector yk = x;
  double t = 1.0;

  out.kkt_residual = kkt_from_gradient(x, grad_x, p.lambda);
  if (out.kkt_residual <= opts.tol) {
    out.converged = true;
  }

  std::size_t it = 0;
  while (!out.converged && it < opts.max_iter) {
    ++it;
    const Vector ay = p.a * yk;
    const Vector res_y = ay - p.y;
    const Vector grad_y = p.a.transpose() * res_y;
    const double smooth_y = 0.5 * res_y.squaredNorm();

    Vector z;
    Vector az;
    for (;;) {
      z = soft_threshold(yk - grad_y / lip, p.lambda / lip);
      az = p.a * z;
      const Vector dz = z - yk;
      const double smooth_z = 0.5 * (az - p.y).squaredNorm();
      if (smooth_z <= smooth_y + grad_y.dot(dz) + 0.5 * lip * dz.squaredNorm() + 1e-14 * smooth_y) {
        break;
      }
      lip *= 2.0;
    }
    const double f_z = 0.5 * (az - p.y).squaredNorm() + p.lambda * z.lpNorm<1>();
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));

    x_prev = x;
    if (f_z <= f_x) {
      x = z;
      ax = az;
      f_x = f_z;
      grad_x = p.a.transpose() * (ax - p.y);
    }
    yk = x + (t / t_next) * (z - x) + ((t - 1.0) / t_next) * (x - x_prev);
    t = t_next;

    if (opts.record_objective) {
      out.objective_history.push_back(f_x);
    }
    out.kkt_residual = kkt_from_gradient(x, grad_x, p.lambda);
    out.converged = out.kkt_residual <= opts.tol;
  }

  out.x = std::move(x);
  out.iterations = it;
  out.objective = f_x;
  out.step = 1.0 / lip;
  return out;
}

OracleLambda lasso_oracle_lambda(const Matrix& a, const Vector& y, const Vector& x_true,
                                 std::span<const double> grid, const LassoOptions& opts) {
  if (grid.empty()) {
    throw InputError("lasso_oracle_lambda: empty lambda grid");
  }
  if (x_true.size() != a.cols()) {
    throw InputError("lasso_oracle_lambda: reference signal has the wrong length");
  }
  std::vector<double> lambdas(grid.begin(), grid.end());
  for (const double l : lambdas) {
    if (!(l >= 0.0)) {
      throw InputError("lasso_oracle_lambda: lambda values must be nonnegative");
    }
  }
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());

  OracleLambda best{lambdas.front(), std::numeric_limits<double>::infinity()};
  Vector warm = Vector::Zero(a.cols());
  for (const double lambda : lambdas) {
    const auto sol = lasso_solve({a, y, lambda}, opts, &warm);
    const double mse = (sol.x - x_true).squaredNorm() / static_cast<double>(x_true.size());
    if (mse < best.mse) {
      best = {lambda, mse};
    }
    warm = sol.x;
  }
  return best;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 16; ++i) {
    grid.push_back(std::pow(10.0, -4.0 + 0.25 * i));
  }
  return grid;
}

}  // namespace oas
