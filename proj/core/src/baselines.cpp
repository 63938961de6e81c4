#include "coca/baselines.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace coca {

PcaResult pca_leading(const Matrix& x) {
  const SingularTriplet t = leading_singular_triplet(x, IterationControl{1e-12, 20000});
  return PcaResult{t.v, t.d};
}

namespace {

Matrix inverse_sqrt(const Matrix& gram, double ridge, const char* which) {
  Matrix a = gram;
  a.diagonal().array() += ridge;
  const Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Vector& evals = es.eigenvalues();
  const double top = std::max(evals.maxCoeff(), 0.0);
  for (Index i = 0; i < evals.size(); ++i) {
    if (!(evals[i] > 1e-12 * top) || top == 0.0) {
      throw SingularMatrixError(std::string("cca_leading: ") + which +
                                    " Gram matrix is singular; pass a positive ridge",
                                i);
    }
  }
  return es.eigenvectors() * evals.cwiseInverse().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

CcaSolution cca_leading(const Matrix& x1, const Matrix& x2, double ridge) {
  if (x1.rows() != x2.rows()) throw std::invalid_argument("cca_leading: views have different row counts");
  if (!(ridge >= 0.0)) throw std::invalid_argument("cca_leading: ridge must be >= 0");
  const Matrix w1 = inverse_sqrt(x1.transpose() * x1, ridge, "view 1");
  const Matrix w2 = inverse_sqrt(x2.transpose() * x2, ridge, "view 2");
  const Matrix m = w1 * (x1.transpose() * x2) * w2;

  const Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  CcaSolution out;
  out.correlation = svd.singularValues()[0];
  out.w1 = w1 * svd.matrixU().col(0);
  out.w2 = w2 * svd.matrixV().col(0);

  // Normalize to unit score variance and orient by the first view.
  const double s1 = (x1 * out.w1).norm();
  const double s2 = (x2 * out.w2).norm();
  if (s1 > 0.0) out.w1 /= s1;
  if (s2 > 0.0) out.w2 /= s2;
  if (canonicalize_sign(out.w1) < 0.0) out.w2 = -out.w2;
  if ((x1 * out.w1).dot(x2 * out.w2) < 0.0) out.w2 = -out.w2;
  return out;
}

double cca_limit_eigenvalue(const Matrix& x, Index p1, IterationControl control) {
  Matrix gram = x.transpose() * x;
  Matrix flipped = gram;
  const Index p2 = x.cols() - p1;
  flipped.topRightCorner(p1, p2) *= -1.0;
  flipped.bottomLeftCorner(p2, p1) *= -1.0;
  const CholeskyFactor chol(flipped);
  const auto op = [&](const Vector& v) -> Vector { return chol.solve(gram * v); };
  const EigenPair eig = leading_eigenvector(op, x.cols(), control, 0);
  if (!eig.converged) throw ConvergenceError("cca_limit_eigenvalue: power iteration did not converge");
  return eig.value;
}

}  // namespace coca
