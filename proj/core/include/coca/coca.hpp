#pragma once

#include "coca/data.hpp"
#include "coca/lasso.hpp"
#include "coca/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace coca {

/// Which form of the objective a model reports.
///   Halved:   1/2 ||X - u v^T||_F^2 + rho/2 ||X1 v1 - X2 v2||^2      (dense fits)
///   Unhalved: ||X - u v^T||_F^2 + rho ||X1 v1 - X2 v2||^2 + lambda ||v||_1  (sparse fits)
enum class ObjectiveConvention { Halved, Unhalved };

const char* to_string(ObjectiveConvention c);

enum class FitStatus {
  Converged,
  NotConverged,   ///< iteration budget exhausted; fields hold the last iterate
  AllZero,        ///< lambda large enough that v = 0 is the solution
  Degenerate,     ///< X v = 0 for a nonzero v, or a rank-deficient eigenproblem
  NonMonotone,    ///< sparse objective increased between iterations beyond slack
};

const char* to_string(FitStatus s);

/// Rank-1 CoCA fit.
///
/// `v` carries the scaling of the u-v parameterization (dv -> v), so for dense
/// fits ||X v|| equals the leading eigenvalue. `direction` = v / ||v|| and
/// `d` = ||v|| give the unit-norm parameterization. All zero when status is AllZero.
struct CocaModel {
  double rho = 0.0;
  double lambda = 0.0;
  Index p1 = 0;
  Index p2 = 0;

  double d = 0.0;
  Vector u;
  Vector v;
  Vector direction;
  Vector scores1;  ///< X1 v1
  Vector scores2;  ///< X2 v2

  double eigenvalue = 0.0;  ///< leading eigenvalue (dense fits); ||X v|| otherwise
  double objective = 0.0;
  ObjectiveConvention convention = ObjectiveConvention::Halved;
  std::vector<double> objective_trace;  ///< per-iteration objective (sparse fits)

  FitStatus status = FitStatus::NotConverged;
  int iterations = 0;
  double residual = 0.0;  ///< relative fixed-point residual (dense) or last relative change (sparse)
  std::vector<std::string> warnings;

  bool converged() const { return status == FitStatus::Converged || status == FitStatus::AllZero; }
  bool all_zero() const { return status == FitStatus::AllZero; }
  Vector v1() const { return v.head(p1); }
  Vector v2() const { return v.tail(p2); }
  Index nonzeros() const;
};

struct DenseOptions {
  double tol = 1e-11;
  int max_iter = 5000;
  std::uint64_t seed = 0;
  Index dense_cap = 2000;  ///< above this width the p x p system is solved matrix-free
};

struct SparseOptions {
  double tol = 1e-7;          ///< relative objective change
  double v_tol = 1e-6;        ///< relative change of v
  int max_iter = 500;
  double monotone_slack = 1e-10;  ///< relative to max(1, |objective|)
  LassoOptions lasso{1e-10, 100000};
  /// Without an explicit start, also run from the dense solution at the same
  /// rho and keep whichever start reaches the lower objective.
  bool dense_start = true;
};

/// Applies v -> (I + rho D X^T X D)^{-1} X^T X v, where D flips the sign of the
/// second view's coordinates. The system matrix is assembled and factorized
/// once when p <= dense_cap; otherwise each application runs conjugate gradients.
class CocaOperator {
 public:
  CocaOperator(const Matrix& x, Index p1, double rho, Index dense_cap = 2000);

  Vector operator()(const Vector& v) const;
  /// (I + rho D X^T X D)^{-1} y
  Vector solve(const Vector& y) const;
  Vector gram_apply(const Vector& v) const;  ///< X^T X v
  Index size() const noexcept { return x_.cols(); }
  bool assembled() const noexcept { return assembled_; }

 private:
  Vector flip(const Vector& v) const;

  const Matrix& x_;
  Index p1_;
  double rho_;
  bool assembled_ = false;
  Matrix gram_;
  CholeskyFactor factor_;
};

/// Dense CoCA: power iteration on the operator above until the fixed point.
CocaModel fit_dense(const MultiViewData& data, double rho, const DenseOptions& options = {});
CocaModel fit_dense(const Matrix& x, Index p1, double rho, const DenseOptions& options = {});

/// Warm start for the alternating solver.
struct SparseStart {
  Vector u;
  std::optional<Vector> v;
};

/// Sparse CoCA by alternating a Lasso v-update and the closed-form u-update.
/// Without a start, u begins at the leading left singular vector of X (and at
/// the dense solution's u when options.dense_start is set).
CocaModel fit_sparse(const MultiViewData& data, double rho, double lambda, const SparseOptions& options = {},
                     const std::optional<SparseStart>& start = std::nullopt);
CocaModel fit_sparse(const Matrix& x, Index p1, double rho, double lambda, const SparseOptions& options = {},
                     const std::optional<SparseStart>& start = std::nullopt);

/// Augmented Lasso design for the v-update: [I_p ; sqrt(rho) X D] with
/// response [X^T u ; 0_n].
LassoProblem build_augmented(const Matrix& x, Index p1, double rho, const Vector& u, double lambda = 0.0);

/// Gram form of the augmented problem without materializing the design:
/// gram = I + rho D X^T X D, cross = X^T u, response_sq = ||X^T u||^2.
LassoGram augmented_gram(const Matrix& x, const Matrix& xtx, Index p1, double rho, const Vector& u, double lambda);

/// ||X - u v^T||_F^2 + rho ||X1 v1 - X2 v2||^2 + lambda ||v||_1 (no halves).
double sparse_objective(const Matrix& x, Index p1, const Vector& u, const Vector& v, double rho, double lambda);
/// 1/2 ||X - u v^T||_F^2 + rho/2 ||X1 v1 - X2 v2||^2.
double dense_objective(const Matrix& x, Index p1, const Vector& u, const Vector& v, double rho);

struct PathDiagnostics {
  double agreement_gap = 0.0;  ///< ||X1 v1 - X2 v2|| with v rescaled so ||X v|| = 1
  double variance = 0.0;       ///< ||X v||^2 at the model's own scale
  Index sparsity = 0;          ///< nonzeros in v
};

struct PathCell {
  double rho = 0.0;
  double lambda = 0.0;
  CocaModel model;
  PathDiagnostics diagnostics;
  bool failed = false;
  std::string error;
};

struct SolutionPath {
  std::vector<PathCell> cells;  ///< rho-major, lambda-minor order
};

struct PathOptions {
  DenseOptions dense;
  SparseOptions sparse;
  bool warm_start = true;
};

/// Fits every (rho, lambda) cell. lambda == 0 cells use the dense solver.
/// Cell failures are recorded in the cell and do not abort the path.
SolutionPath solution_path(const MultiViewData& data, const std::vector<double>& rho_grid,
                           const std::vector<double>& lambda_grid, const PathOptions& options = {});

PathDiagnostics diagnose(const Matrix& x, Index p1, const CocaModel& model);

/// Fixed-point residual ||A^{-1} X^T X v - lambda1 v|| / (lambda1 ||v||).
double eigen_residual(const Matrix& x, Index p1, const CocaModel& model);

}  // namespace coca
