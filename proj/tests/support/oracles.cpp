#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace oracle {

SymEigen jacobi_eigen(const Matrix& a_in, double tol, int max_sweeps) {
  const Eigen::Index n = a_in.rows();
  Matrix a = 0.5 * (a_in + a_in.transpose());
  Matrix v = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= tol * std::max(1e-300, a.norm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) > a(j, j); });
  SymEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

Vector leading_right_singular(const Matrix& x) {
  return jacobi_eigen(x.transpose() * x).vectors.col(0);
}

Matrix inverse_sqrt(const Matrix& a) {
  const SymEigen e = jacobi_eigen(a);
  Vector d(e.values.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(e.values[i] > 0.0)) throw std::runtime_error("inverse_sqrt: not positive definite");
    d[i] = 1.0 / std::sqrt(e.values[i]);
  }
  return e.vectors * d.asDiagonal() * e.vectors.transpose();
}

std::pair<Vector, Vector> cca(const Matrix& x1, const Matrix& x2) {
  const Matrix w1 = inverse_sqrt(x1.transpose() * x1);
  const Matrix w2 = inverse_sqrt(x2.transpose() * x2);
  const Matrix m = w1 * x1.transpose() * x2 * w2;
  const Vector b = jacobi_eigen(m.transpose() * m).vectors.col(0);
  const Vector a = m * b;
  Vector c1 = w1 * a;
  Vector c2 = w2 * b;
  c1 /= (x1 * c1).norm();
  c2 /= (x2 * c2).norm();
  return {c1, c2};
}

std::pair<Vector, double> coca_dense(const Matrix& x, Eigen::Index p1, double rho) {
  const Eigen::Index p = x.cols();
  const Matrix g = x.transpose() * x;
  Vector dvec = Vector::Ones(p);
  dvec.tail(p - p1).setConstant(-1.0);
  Matrix a = rho * dvec.asDiagonal() * g * dvec.asDiagonal();
  a.diagonal().array() += 1.0;
  const Matrix r = inverse_sqrt(a);
  const SymEigen e = jacobi_eigen(r * g * r);
  Vector v = r * e.vectors.col(0);
  v.normalize();
  return {v, e.values[0]};
}

Vector gauss_solve(const Matrix& a, const Vector& b, int refinements) {
  const Eigen::Index n = a.rows();
  const auto solve_once = [&](const Vector& rhs) {
    Matrix m = a;
    Vector y = rhs;
    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::Index piv = k;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
      if (m(piv, k) == 0.0) throw std::runtime_error("gauss_solve: singular");
      m.row(k).swap(m.row(piv));
      std::swap(y[k], y[piv]);
      for (Eigen::Index i = k + 1; i < n; ++i) {
        const double f = m(i, k) / m(k, k);
        m.row(i).tail(n - k) -= f * m.row(k).tail(n - k);
        y[i] -= f * y[k];
      }
    }
    Vector x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      double s = y[i];
      for (Eigen::Index j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
      x[i] = s / m(i, i);
    }
    return x;
  };
  Vector x = solve_once(b);
  for (int r = 0; r < refinements; ++r) x += solve_once(b - a * x);
  return x;
}

double lasso_value(const Matrix& x, const Vector& y, double lambda, const Vector& b) {
  return (y - x * b).squaredNorm() + lambda * b.lpNorm<1>();
}

Vector fista_lasso(const Matrix& x, const Vector& y, double lambda, int max_iter) {
  const Eigen::Index p = x.cols();
  const double lip = 2.0 * jacobi_eigen(x.transpose() * x).values[0];
  const double step = 1.0 / lip;
  const auto prox = [&](const Vector& z) {
    Vector out(p);
    const double t = lambda * step;
    for (Eigen::Index j = 0; j < p; ++j) out[j] = std::copysign(std::max(std::abs(z[j]) - t, 0.0), z[j]);
    return out;
  };
  Vector b = Vector::Zero(p);
  Vector z = b;
  double t = 1.0;
  double f = lasso_value(x, y, lambda, b);
  int quiet = 0;
  for (int it = 0; it < max_iter; ++it) {
    const Vector grad = 2.0 * x.transpose() * (x * z - y);
    const Vector b_next = prox(z - step * grad);
    const double f_next = lasso_value(x, y, lambda, b_next);
    if (f_next > f) {  // restart momentum
      t = 1.0;
      z = b;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = b_next + ((t - 1.0) / t_next) * (b_next - b);
    const double change = (b_next - b).norm();
    b = b_next;
    t = t_next;
    const double drop = f - f_next;
    f = f_next;
    quiet = (change <= 1e-15 * std::max(1.0, b.norm()) || drop <= 1e-17 * std::max(1.0, f)) ? quiet + 1 : 0;
    if (quiet >= 50) break;
  }
  return b;
}

double brute_auroc(const Vector& scores, const std::vector<int>& labels) {
  const int hi = *std::max_element(labels.begin(), labels.end());
  double good = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != hi) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] == hi) continue;
      pairs += 1.0;
      const auto si = scores[static_cast<Eigen::Index>(i)];
      const auto sj = scores[static_cast<Eigen::Index>(j)];
      good += si > sj ? 1.0 : (si == sj ? 0.5 : 0.0);
    }
  }
  return good / pairs;
}

double angle(const Vector& a, const Vector& b) {
  const double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
  const Vector ra = a.normalized();
  const Vector rb = b.normalized() * (a.dot(b) < 0 ? -1.0 : 1.0);
  // Use the chord for small angles where acos loses precision.
  const double chord = (ra - rb).norm();
  return c > 0.9 ? 2.0 * std::asin(std::min(1.0, chord / 2.0)) : std::acos(std::min(1.0, c));
}

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = nd(gen);
  return m;
}

Matrix centered(const Matrix& x) {
  return x.rowwise() - x.colwise().mean();
}

}  // namespace oracle
