#include "coca/simulate.hpp"

#include "coca/random.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace coca {

Vector FactorModelSpec::beta() const {
  Vector b(p1() + p2());
  b << beta1, beta2;
  return b;
}

void FactorModelSpec::validate() const {
  const Index a = beta1.size();
  const Index b = beta2.size();
  if (a < 1 || b < 1) throw std::invalid_argument("FactorModelSpec: empty view");
  if (W1.rows() != a || W2.rows() != b) throw std::invalid_argument("FactorModelSpec: W rows do not match view widths");
  if (B1.rows() != a || B2.rows() != b) throw std::invalid_argument("FactorModelSpec: B rows do not match view widths");
  if (B1.cols() != B2.cols()) throw std::invalid_argument("FactorModelSpec: B1 and B2 need the same number of shared factors");
  if (Omega1.rows() != a || Omega1.cols() != a || Omega2.rows() != b || Omega2.cols() != b) {
    throw std::invalid_argument("FactorModelSpec: Omega shapes do not match view widths");
  }
  for (const Matrix* om : {&Omega1, &Omega2}) {
    if (!om->allFinite()) throw std::invalid_argument("FactorModelSpec: non-finite Omega");
    const double scale = std::max(1.0, om->cwiseAbs().maxCoeff());
    if ((*om - om->transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw std::invalid_argument("FactorModelSpec: Omega is not symmetric");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> es(*om, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10 * scale) {
      throw std::invalid_argument("FactorModelSpec: Omega is not positive semidefinite");
    }
  }
}

Matrix FactorModelSpec::covariance() const {
  const Index a = p1();
  const Index p = a + p2();
  const Vector b = beta();
  Matrix sigma = b * b.transpose();
  sigma.topLeftCorner(a, a) += W1 * W1.transpose() + Omega1;
  sigma.bottomRightCorner(p - a, p - a) += W2 * W2.transpose() + Omega2;
  Matrix shared(p, B1.cols());
  shared << B1, B2;
  sigma += shared * shared.transpose();
  return sigma;
}

Draw draw_with_latent(const FactorModelSpec& spec, Index n, std::uint64_t seed) {
  spec.validate();
  if (n < 2) throw std::invalid_argument("draw: n must be >= 2 to form a data set");
  const Index p1 = spec.p1();
  const Index p2 = spec.p2();
  const Index k1 = spec.W1.cols();
  const Index k2 = spec.W2.cols();
  const Index l = spec.B1.cols();
  const Matrix chol1 = psd_cholesky(spec.Omega1);
  const Matrix chol2 = psd_cholesky(spec.Omega2);

  Rng rng(seed);
  Matrix x1(n, p1);
  Matrix x2(n, p2);
  Vector z(n);
  Vector f1(k1), f2(k2), s(l), e1(p1), e2(p2);
  for (Index i = 0; i < n; ++i) {
    z[i] = rng.normal();
    for (Index j = 0; j < k1; ++j) f1[j] = rng.normal();
    for (Index j = 0; j < k2; ++j) f2[j] = rng.normal();
    for (Index j = 0; j < l; ++j) s[j] = rng.normal();
    for (Index j = 0; j < p1; ++j) e1[j] = rng.normal();
    for (Index j = 0; j < p2; ++j) e2[j] = rng.normal();
    x1.row(i) = (spec.beta1 * z[i] + spec.W1 * f1 + spec.B1 * s + chol1 * e1).transpose();
    x2.row(i) = (spec.beta2 * z[i] + spec.W2 * f2 + spec.B2 * s + chol2 * e2).transpose();
  }
  return Draw{MultiViewData(std::move(x1), std::move(x2)), std::move(z)};
}

MultiViewData draw(const FactorModelSpec& spec, Index n, std::uint64_t seed) {
  return draw_with_latent(spec, n, seed).data;
}

FactorModelSpec illustrative_spec() {
  const double beta_norm = std::sqrt(2.0);
  FactorModelSpec s;
  s.beta1 = Vector::Unit(4, 0);
  s.beta2 = Vector::Unit(4, 0);
  Vector w(4);
  w << 0.0, 1.0, -1.0, 0.0;
  w *= (beta_norm - 0.1) / std::sqrt(2.0);
  s.W1 = w;
  s.W2 = w;
  s.B1 = (beta_norm - 1.0) * Vector::Unit(4, 3);
  s.B2 = s.B1;
  Vector om(4);
  om << 1.0, 1.0, 1.0, 0.09;
  s.Omega1 = om.asDiagonal();
  s.Omega2 = s.Omega1;
  return s;
}

FactorModelSpec sparse_spec(Index p_per_view, Index dense_dims, int n_distractors) {
  const Index p = p_per_view;
  const Index d = dense_dims;
  if (d < 1 || d > p) throw std::invalid_argument("sparse_spec: need 1 <= dense_dims <= p_per_view");
  if (n_distractors < 0 || n_distractors > 2) throw std::invalid_argument("sparse_spec: n_distractors must be 0, 1 or 2");

  const Index free = p - d;
  Vector beta = Vector::Zero(p);
  beta.head(d).setConstant(1.0 / std::sqrt(static_cast<double>(d)));

  const auto e = [p](Index i) { return Vector::Unit(p, i); };
  Vector w_dir = Vector::Zero(p);
  Vector b_dir = Vector::Zero(p);
  const auto fail = [] { throw std::invalid_argument("sparse_spec: p_per_view too small for the requested distractors"); };

  if (n_distractors >= 1) {
    if (free >= 2) {
      w_dir = (e(d) - e(d + 1)) / std::sqrt(2.0);
    } else if (d >= 2) {
      w_dir = (e(0) - e(1)) / std::sqrt(2.0);
    } else {
      fail();
    }
  }
  if (n_distractors == 2) {
    if (free >= 3) {
      b_dir = e(d + 2);
    } else if (free == 2) {
      if (d < 2) fail();
      b_dir = (e(0) - e(1)) / std::sqrt(2.0);
    } else if (free == 1) {
      b_dir = e(d);
    } else {
      if (d < 3) fail();
      b_dir = (e(0) + e(1) - 2.0 * e(2)) / std::sqrt(6.0);
    }
  }

  const double beta_norm = std::sqrt(2.0);  // (beta1, beta2) with unit-norm views
  FactorModelSpec s;
  s.beta1 = beta;
  s.beta2 = beta;
  if (n_distractors >= 1) {
    s.W1 = (beta_norm - 0.1) * w_dir;
  } else {
    s.W1 = Matrix::Zero(p, 0);
  }
  s.W2 = s.W1;
  if (n_distractors == 2) {
    s.B1 = (beta_norm - 1.0) * b_dir;
  } else {
    s.B1 = Matrix::Zero(p, 0);
  }
  s.B2 = s.B1;
  s.Omega1 = Matrix::Identity(p, p);
  if (n_distractors == 2) s.Omega1 -= (1.0 - 0.09) * b_dir * b_dir.transpose();
  s.Omega2 = s.Omega1;
  return s;
}

Matrix symmetric_sqrt(const Matrix& sigma) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  const Vector& evals = es.eigenvalues();
  const double top = std::max(evals.cwiseAbs().maxCoeff(), 1e-300);
  if (evals.minCoeff() < -1e-10 * top) throw std::invalid_argument("symmetric_sqrt: matrix is not positive semidefinite");
  const Vector roots = evals.cwiseMax(0.0).cwiseSqrt();
  Matrix r = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (r + r.transpose());
}

Matrix population_root(const FactorModelSpec& spec) {
  spec.validate();
  return symmetric_sqrt(spec.covariance());
}

}  // namespace coca
