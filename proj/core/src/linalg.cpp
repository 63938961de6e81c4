#include "coca/linalg.hpp"

#include "coca/random.hpp"

#include <cmath>
#include <limits>

namespace coca {

double canonicalize_sign(Vector& x) {
  if (x.size() == 0) return 1.0;
  Index best = 0;
  for (Index i = 1; i < x.size(); ++i) {
    if (std::abs(x[i]) > std::abs(x[best])) best = i;
  }
  if (x[best] < 0.0) {
    x = -x;
    return -1.0;
  }
  return 1.0;
}

Vector start_vector(Index p, std::uint64_t seed) {
  Rng rng(seed ^ 0x5DEECE66DULL);
  Vector w(p);
  for (Index i = 0; i < p; ++i) w[i] = 1.0 + 0.1 * (rng.uniform() - 0.5);
  return w / w.norm();
}

EigenPair leading_eigenvector(const LinearOperator& apply, Index p,
                              IterationControl control, std::uint64_t seed) {
  if (p < 1) throw std::invalid_argument("leading_eigenvector: p must be >= 1");
  if (control.max_iter < 1 || !(control.tol > 0.0)) {
    throw std::invalid_argument("leading_eigenvector: need max_iter >= 1 and tol > 0");
  }

  EigenPair out;
  Vector w = start_vector(p, seed);
  for (int it = 1; it <= control.max_iter; ++it) {
    Vector y = apply(w);
    if (y.size() != p) throw std::invalid_argument("leading_eigenvector: operator changed dimension");
    if (!y.allFinite()) throw DegenerateInputError("leading_eigenvector: operator produced non-finite values");
    const double ynorm = y.norm();
    if (ynorm == 0.0) {
      throw DegenerateInputError("leading_eigenvector: operator maps the iterate to zero");
    }
    const double value = w.dot(y);
    const double residual = (y - value * w).norm();
    out.iterations = it;
    out.value = value;
    out.vector = w;
    out.residual = value != 0.0 ? residual / std::abs(value) : std::numeric_limits<double>::infinity();
    if (residual <= control.tol * std::abs(value)) {
      out.converged = true;
      break;
    }
    w = y / ynorm;
  }
  canonicalize_sign(out.vector);
  return out;
}

SingularTriplet leading_singular_triplet(const Matrix& x, IterationControl control) {
  if (x.rows() < 1 || x.cols() < 1) throw std::invalid_argument("leading_singular_triplet: empty matrix");
  if (!x.allFinite()) throw std::invalid_argument("leading_singular_triplet: non-finite entries");

  const auto gram = [&x](const Vector& v) -> Vector { return x.transpose() * (x * v); };
  EigenPair eig = leading_eigenvector(gram, x.cols(), control, 0);

  SingularTriplet t;
  t.v = eig.vector;
  const Vector xv = x * t.v;
  t.d = xv.norm();
  if (t.d == 0.0) throw DegenerateInputError("leading_singular_triplet: zero matrix");
  t.u = xv / t.d;
  t.converged = eig.converged;
  t.iterations = eig.iterations;
  t.residual = (x.transpose() * t.u - t.d * t.v).norm() / t.d;
  return t;
}

CholeskyFactor::CholeskyFactor(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("CholeskyFactor: matrix is not square");
  const Index n = a.rows();
  lower_ = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (Index k = 0; k < j; ++k) diag -= lower_(j, k) * lower_(j, k);
    if (!(diag > 0.0)) {
      throw SingularMatrixError("matrix is not positive definite: non-positive pivot at index " +
                                    std::to_string(j),
                                j);
    }
    const double ljj = std::sqrt(diag);
    lower_(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Index k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k);
      lower_(i, j) = s / ljj;
    }
  }
}

Vector CholeskyFactor::solve(const Vector& b) const {
  if (b.size() != lower_.rows()) throw std::invalid_argument("CholeskyFactor::solve: dimension mismatch");
  Vector y = lower_.triangularView<Eigen::Lower>().solve(b);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Vector spd_solve(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw std::invalid_argument("spd_solve: dimension mismatch");
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("spd_solve: matrix is not symmetric");
  }
  const CholeskyFactor chol(a);
  Vector x = chol.solve(b);
  const Vector r = b - a * x;
  x += chol.solve(r);
  return x;
}

Matrix psd_cholesky(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("psd_cholesky: matrix is not square");
  const Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  const double scale = n > 0 ? std::max(1.0, a.diagonal().cwiseAbs().maxCoeff()) : 1.0;
  const double eps = 64.0 * std::numeric_limits<double>::epsilon() * scale * static_cast<double>(n);
  for (Index j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (Index k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (diag < -std::sqrt(eps) * scale) {
      throw SingularMatrixError("matrix is not positive semidefinite at pivot " + std::to_string(j), j);
    }
    if (diag <= eps) continue;  // numerically zero pivot: column stays zero
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

CgResult conjugate_gradient(const LinearOperator& apply, const Vector& b, double tol,
                            int max_iter, const Vector* warm) {
  CgResult res;
  res.x = warm ? *warm : Vector::Zero(b.size());
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.x.setZero();
    res.converged = true;
    return res;
  }
  Vector r = b - apply(res.x);
  Vector d = r;
  double rr = r.squaredNorm();
  for (int it = 0; it < max_iter; ++it) {
    res.residual = std::sqrt(rr) / bnorm;
    if (res.residual <= tol) {
      res.converged = true;
      res.iterations = it;
      return res;
    }
    const Vector ad = apply(d);
    const double curv = d.dot(ad);
    if (!(curv > 0.0)) throw SingularMatrixError("conjugate_gradient: operator is not positive definite", -1);
    const double alpha = rr / curv;
    res.x += alpha * d;
    r -= alpha * ad;
    const double rr_new = r.squaredNorm();
    d = r + (rr_new / rr) * d;
    rr = rr_new;
    res.iterations = it + 1;
  }
  res.residual = (b - apply(res.x)).norm() / bnorm;
  res.converged = res.residual <= tol;
  return res;
}

double line_angle(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw DegenerateInputError("line_angle: zero vector");
  const Vector ua = a / na;
  const Vector ub = b / nb;
  const double c = std::abs(ua.dot(ub));
  const double s = (ua - ua.dot(ub) * ub).norm();
  return std::atan2(s, c);
}

}  // namespace coca
