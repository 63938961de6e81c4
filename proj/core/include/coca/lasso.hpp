#pragma once

#include "coca/linalg.hpp"

#include <optional>

namespace coca {

/// min_beta ||response - design * beta||_2^2 + lambda * ||beta||_1
///
/// No 1/2 factor: coordinate updates soft-threshold at lambda / 2.
struct LassoProblem {
  Matrix design;
  Vector response;
  double lambda = 0.0;
};

/// The same objective expressed through its sufficient statistics:
/// gram = X^T X, cross = X^T y, response_sq = y^T y.
struct LassoGram {
  Matrix gram;
  Vector cross;
  double response_sq = 0.0;
  double lambda = 0.0;

  static LassoGram from_problem(const LassoProblem& problem);
  double objective(const Vector& beta) const;
};

struct LassoOptions {
  double tol = 1e-9;      ///< on the KKT residual
  int max_iter = 100000;  ///< coordinate sweeps (full + active-set)
};

struct LassoSolution {
  Vector beta;
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;  ///< total sweeps performed
  bool converged = false;
};

double soft_threshold(double z, double threshold);

/// Cyclic coordinate descent. Full sweeps until the support settles, then
/// active-set sweeps with a full KKT check before declaring convergence.
/// Zero-norm design columns keep a zero coefficient.
LassoSolution solve_lasso(const LassoProblem& problem, LassoOptions options = {},
                          const std::optional<Vector>& warm = std::nullopt);

LassoSolution solve_lasso(const LassoGram& problem, LassoOptions options = {},
                          const std::optional<Vector>& warm = std::nullopt);

double lasso_objective(const LassoProblem& problem, const Vector& beta);

/// Maximum violation of the subgradient conditions of the objective above:
/// |2 x_j^T(X b - y) + lambda sign(b_j)| on the support, and
/// max(0, |2 x_j^T(X b - y)| - lambda) off it. Zero columns are exempt.
double kkt_check(const LassoProblem& problem, const Vector& beta);
double kkt_check(const LassoGram& problem, const Vector& beta);

/// Smallest lambda for which beta = 0 is optimal: 2 * ||X^T y||_inf.
double lambda_max(const LassoProblem& problem);

}  // namespace coca
