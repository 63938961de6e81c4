#include "coca/lasso.hpp"

#include <cmath>
#include <vector>

namespace coca {

LassoGram LassoGram::from_problem(const LassoProblem& problem) {
  if (problem.design.rows() != problem.response.size()) {
    throw std::invalid_argument("LassoProblem: design rows do not match response length");
  }
  LassoGram g;
  g.gram = problem.design.transpose() * problem.design;
  g.cross = problem.design.transpose() * problem.response;
  g.response_sq = problem.response.squaredNorm();
  g.lambda = problem.lambda;
  return g;
}

double LassoGram::objective(const Vector& beta) const {
  return response_sq - 2.0 * cross.dot(beta) + beta.dot(gram * beta) + lambda * beta.lpNorm<1>();
}

double soft_threshold(double z, double threshold) {
  if (z > threshold) return z - threshold;
  if (z < -threshold) return z + threshold;
  return 0.0;
}

double lasso_objective(const LassoProblem& problem, const Vector& beta) {
  return (problem.response - problem.design * beta).squaredNorm() + problem.lambda * beta.lpNorm<1>();
}

namespace {

double kkt_from_gradient(const Vector& grad, const Vector& beta, const Vector& diag, double lambda) {
  double worst = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    if (diag[j] <= 0.0) continue;
    double v;
    if (beta[j] > 0.0) {
      v = std::abs(grad[j] + lambda);
    } else if (beta[j] < 0.0) {
      v = std::abs(grad[j] - lambda);
    } else {
      v = std::max(0.0, std::abs(grad[j]) - lambda);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace

double kkt_check(const LassoGram& problem, const Vector& beta) {
  if (beta.size() != problem.cross.size()) throw std::invalid_argument("kkt_check: dimension mismatch");
  const Vector grad = 2.0 * (problem.gram * beta - problem.cross);
  return kkt_from_gradient(grad, beta, problem.gram.diagonal(), problem.lambda);
}

double kkt_check(const LassoProblem& problem, const Vector& beta) {
  if (beta.size() != problem.design.cols()) throw std::invalid_argument("kkt_check: dimension mismatch");
  const Vector grad = 2.0 * (problem.design.transpose() * (problem.design * beta - problem.response));
  const Vector diag = problem.design.colwise().squaredNorm().transpose();
  return kkt_from_gradient(grad, beta, diag, problem.lambda);
}

double lambda_max(const LassoProblem& problem) {
  return 2.0 * (problem.design.transpose() * problem.response).cwiseAbs().maxCoeff();
}

LassoSolution solve_lasso(const LassoGram& problem, LassoOptions options, const std::optional<Vector>& warm) {
  const Index p = problem.cross.size();
  if (problem.gram.rows() != p || problem.gram.cols() != p) {
    throw std::invalid_argument("solve_lasso: gram/cross dimension mismatch");
  }
  if (!(problem.lambda >= 0.0)) throw std::invalid_argument("solve_lasso: lambda must be nonnegative");
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve_lasso: tol must be positive");

  const Matrix& q = problem.gram;
  const double half_lambda = 0.5 * problem.lambda;

  LassoSolution sol;
  sol.beta = Vector::Zero(p);
  if (warm) {
    if (warm->size() != p) throw std::invalid_argument("solve_lasso: warm start has wrong length");
    sol.beta = *warm;
  }
  for (Index j = 0; j < p; ++j)
    if (q(j, j) <= 0.0) sol.beta[j] = 0.0;

  // grad_half = Q beta - c; maintained incrementally.
  Vector grad_half = q * sol.beta - problem.cross;

  const auto update = [&](Index j) -> double {
    const double qjj = q(j, j);
    if (qjj <= 0.0) return 0.0;
    const double old = sol.beta[j];
    const double z = qjj * old - grad_half[j];
    const double fresh = soft_threshold(z, half_lambda) / qjj;
    const double delta = fresh - old;
    if (delta != 0.0) {
      sol.beta[j] = fresh;
      grad_half += delta * q.col(j);
    }
    return std::abs(delta) * std::sqrt(qjj);
  };

  const double inner_tol = 0.1 * options.tol;
  int sweeps = 0;
  std::vector<Index> active;
  while (sweeps < options.max_iter) {
    // Full sweep.
    double max_change = 0.0;
    for (Index j = 0; j < p; ++j) max_change = std::max(max_change, update(j));
    ++sweeps;
    const bool stalled = max_change == 0.0;

    // Active-set sweeps until the support stops moving.
    active.clear();
    for (Index j = 0; j < p; ++j)
      if (sol.beta[j] != 0.0) active.push_back(j);
    while (max_change > inner_tol && sweeps < options.max_iter && !active.empty()) {
      max_change = 0.0;
      for (Index j : active) max_change = std::max(max_change, update(j));
      ++sweeps;
    }

    // Refresh the gradient to shed accumulated rounding, then certify.
    grad_half = q * sol.beta - problem.cross;
    const double kkt = kkt_from_gradient(2.0 * grad_half, sol.beta, q.diagonal(), problem.lambda);
    if (kkt <= options.tol) {
      sol.converged = true;
      sol.kkt_residual = kkt;
      break;
    }
    sol.kkt_residual = kkt;
    // A full sweep that moves nothing is a fixed point; further sweeps cannot help.
    if (stalled) break;
  }
  sol.iterations = sweeps;
  sol.objective = problem.objective(sol.beta);
  return sol;
}

LassoSolution solve_lasso(const LassoProblem& problem, LassoOptions options, const std::optional<Vector>& warm) {
  const LassoGram gram = LassoGram::from_problem(problem);
  LassoSolution sol = solve_lasso(gram, options, warm);
  sol.objective = lasso_objective(problem, sol.beta);
  sol.kkt_residual = kkt_check(problem, sol.beta);
  return sol;
}

}  // namespace coca
