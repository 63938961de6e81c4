#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace coca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when a factorization meets a non-positive pivot.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, Index pivot)
      : std::runtime_error(what), pivot_(pivot) {}
  Index pivot() const noexcept { return pivot_; }

 private:
  Index pivot_;
};

/// Raised for inputs on which an operation is undefined (zero operator, zero vector, ...).
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by callers that choose to treat non-convergence as fatal. The kernels
/// themselves report non-convergence through the `converged` flag.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IterationControl {
  double tol = 1e-8;
  int max_iter = 5000;
};

/// Leading singular triplet of a matrix. When `converged` is false the fields
/// hold the last iterate and `residual` its relative residual.
struct SingularTriplet {
  double d = 0.0;
  Vector u;
  Vector v;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

struct EigenPair {
  Vector vector;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

using LinearOperator = std::function<Vector(const Vector&)>;

/// Flips the sign of `x` so that its largest-magnitude entry is positive.
/// Ties on magnitude resolve to the lowest index. Returns the applied sign.
double canonicalize_sign(Vector& x);

/// Deterministic unit start vector: all-ones normalized, perturbed by `seed`.
Vector start_vector(Index p, std::uint64_t seed);

/// Power iteration for the dominant eigenpair of a linear map whose dominant
/// eigenvalue is real and positive. Convergence means
/// ||apply(w) - value * w|| <= tol * |value|. Near-ties show up as
/// non-convergence within `max_iter`, which is reported and not resolved.
EigenPair leading_eigenvector(const LinearOperator& apply, Index p,
                              IterationControl control = {},
                              std::uint64_t seed = 0);

/// Rank-1 SVD by power iteration on X^T X (matrix-free). Residuals satisfy
/// ||Xv - du|| <= tol*d and ||X^T u - dv|| <= tol*d on convergence.
SingularTriplet leading_singular_triplet(const Matrix& x,
                                         IterationControl control = {});

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix,
/// reusable across many right-hand sides.
class CholeskyFactor {
 public:
  CholeskyFactor() = default;
  /// Throws SingularMatrixError naming the first non-positive pivot.
  explicit CholeskyFactor(const Matrix& a);

  Vector solve(const Vector& b) const;
  Index size() const noexcept { return lower_.rows(); }
  const Matrix& lower() const noexcept { return lower_; }

 private:
  Matrix lower_;
};

/// Solves A x = b for symmetric positive-definite A with one step of
/// iterative refinement. Throws SingularMatrixError on a bad pivot and
/// std::invalid_argument when A is not symmetric to 1e-10.
Vector spd_solve(const Matrix& a, const Vector& b);

/// Factor L with L L^T = A for symmetric positive-semidefinite A. Columns whose
/// pivot is numerically zero are left zero. Throws SingularMatrixError for a
/// materially negative pivot.
Matrix psd_cholesky(const Matrix& a);

/// Conjugate gradients for SPD operators, used above the dense-assembly cap.
struct CgResult {
  Vector x;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};
CgResult conjugate_gradient(const LinearOperator& apply, const Vector& b,
                            double tol = 1e-12, int max_iter = 10000,
                            const Vector* warm = nullptr);

/// Angle in radians between the lines spanned by a and b (sign-invariant).
double line_angle(const Vector& a, const Vector& b);

}  // namespace coca
