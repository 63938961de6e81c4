#include "coca/metrics.hpp"

#include <cmath>

namespace coca {

namespace {

Vector unit(const Vector& v, const char* what) {
  const double nv = v.norm();
  if (nv == 0.0 || !std::isfinite(nv)) throw DegenerateInputError(std::string(what) + ": zero vector");
  return v / nv;
}

}  // namespace

double estimation_error(const Vector& v_hat, const Vector& beta) {
  if (v_hat.size() != beta.size()) throw std::invalid_argument("estimation_error: length mismatch");
  const Vector a = unit(v_hat, "estimation_error");
  const Vector b = unit(beta, "estimation_error");
  return std::min((a - b).squaredNorm(), (a + b).squaredNorm());
}

double projection_error(const Matrix& x, const Vector& direction) {
  if (direction.size() != x.cols()) throw std::invalid_argument("projection_error: width mismatch");
  const double nd = direction.norm();
  if (nd == 0.0) return x.squaredNorm();
  const Vector w = direction / nd;
  return (x - (x * w) * w.transpose()).squaredNorm();
}

double excess_reconstruction_error(const Matrix& x_test, const Vector& v_hat, const Vector& beta) {
  if (x_test.cols() != v_hat.size() || x_test.cols() != beta.size()) {
    throw std::invalid_argument("excess_reconstruction_error: dimension mismatch");
  }
  const double n = static_cast<double>(x_test.rows());
  const Vector v = unit(v_hat, "excess_reconstruction_error");
  const Vector b = unit(beta, "excess_reconstruction_error");
  return (projection_error(x_test, v) - projection_error(x_test, b)) / n;
}

double reconstruction_error(const Matrix& x, const CocaModel& model) {
  if (x.cols() != model.v.size()) throw std::invalid_argument("reconstruction_error: width mismatch");
  if (x.rows() != model.u.size()) {
    throw std::invalid_argument("reconstruction_error: row count differs from the training data; use the held-out form");
  }
  return (x - model.u * model.v.transpose()).squaredNorm();
}

double heldout_reconstruction_error(const Matrix& x, const CocaModel& model) {
  return projection_error(x, model.v);
}

double pearson(const Vector& a, const Vector& b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("pearson: need equal lengths >= 2");
  const Vector ca = a.array() - a.mean();
  const Vector cb = b.array() - b.mean();
  const double na = ca.norm();
  const double nb = cb.norm();
  if (na <= 1e-300 || nb <= 1e-300) return 0.0;
  // Constant up to rounding relative to the magnitude of the inputs.
  if (na <= 1e-14 * a.cwiseAbs().maxCoeff() * std::sqrt(static_cast<double>(a.size())) ||
      nb <= 1e-14 * b.cwiseAbs().maxCoeff() * std::sqrt(static_cast<double>(b.size()))) {
    return 0.0;
  }
  return std::clamp(ca.dot(cb) / (na * nb), -1.0, 1.0);
}

Agreement agreement_diagnostics(const MultiViewData& data, const CocaModel& model) {
  if (model.v.size() != data.p() || model.p1 != data.p1()) {
    throw std::invalid_argument("agreement_diagnostics: model does not match the data layout");
  }
  Agreement out;
  const Vector s1 = data.x1() * model.v.head(data.p1());
  const Vector s2 = data.x2() * model.v.tail(data.p2());
  const double scale = (s1 + s2).norm();  // X v
  if (scale > 0.0) out.gap = (s1 - s2).norm() / scale;
  out.correlation = pearson(s1, s2);
  return out;
}

EvalReport evaluate(const MultiViewData& test, const CocaModel& model, const Vector& beta) {
  const Matrix x = test.concat();
  EvalReport r;
  r.reconstruction_error = heldout_reconstruction_error(x, model);
  if (model.v.norm() > 0.0) {
    r.estimation_error = estimation_error(model.v, beta);
    r.excess_reconstruction_error = excess_reconstruction_error(x, model.v, beta);
  } else {
    r.estimation_error = 2.0;
    r.excess_reconstruction_error = (x.squaredNorm() - projection_error(x, beta)) / static_cast<double>(x.rows());
  }
  const Agreement a = agreement_diagnostics(test, model);
  r.agreement_gap = a.gap;
  r.score_correlation = a.correlation;
  return r;
}

}  // namespace coca
