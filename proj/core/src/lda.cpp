#include "coca/lda.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coca {

namespace {

std::vector<int> distinct(const std::vector<int>& labels) {
  std::vector<int> out = labels;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<bool> positives(const Vector& scores, const std::vector<int>& labels, const char* who) {
  if (static_cast<Index>(labels.size()) != scores.size()) {
    throw std::invalid_argument(std::string(who) + ": scores and labels differ in length");
  }
  const std::vector<int> cls = distinct(labels);
  if (cls.size() != 2) throw std::invalid_argument(std::string(who) + ": need exactly two classes");
  std::vector<bool> pos(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) pos[i] = labels[i] == cls[1];
  return pos;
}

}  // namespace

LdaModel lda_fit(const Matrix& scores, const std::vector<int>& labels, double shrinkage) {
  const Index n = scores.rows();
  const Index d = scores.cols();
  if (static_cast<Index>(labels.size()) != n) throw std::invalid_argument("lda_fit: scores and labels differ in length");
  if (!(shrinkage >= 0.0 && shrinkage <= 1.0)) throw std::invalid_argument("lda_fit: shrinkage must lie in [0, 1]");
  if (!scores.allFinite()) throw std::invalid_argument("lda_fit: non-finite scores");

  LdaModel m;
  m.classes = distinct(labels);
  const Index k = static_cast<Index>(m.classes.size());
  if (k < 2) throw std::invalid_argument("lda_fit: need at least two classes");
  m.means = Matrix::Zero(k, d);
  m.priors = Vector::Zero(k);
  std::vector<Index> which(n);
  for (Index i = 0; i < n; ++i) {
    const auto it = std::lower_bound(m.classes.begin(), m.classes.end(), labels[i]);
    which[i] = it - m.classes.begin();
    m.means.row(which[i]) += scores.row(i);
    m.priors[which[i]] += 1.0;
  }
  for (Index c = 0; c < k; ++c) {
    if (m.priors[c] < 2.0) throw std::invalid_argument("lda_fit: every class needs at least two samples");
    m.means.row(c) /= m.priors[c];
  }

  Matrix pooled = Matrix::Zero(d, d);
  for (Index i = 0; i < n; ++i) {
    const Vector r = (scores.row(i) - m.means.row(which[i])).transpose();
    pooled += r * r.transpose();
  }
  pooled /= static_cast<double>(n - k);
  m.priors /= static_cast<double>(n);

  const double target = pooled.trace() / static_cast<double>(d);
  if (target <= 0.0) {
    // Constant scores within every class: any covariance gives the same ranking
    // of classes, so use the identity.
    m.covariance = Matrix::Identity(d, d);
  } else {
    m.covariance = (1.0 - shrinkage) * pooled;
    m.covariance.diagonal().array() += shrinkage * target;
  }
  m.shrinkage = shrinkage;

  const Eigen::SelfAdjointEigenSolver<Matrix> es(m.covariance, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  if (!(es.eigenvalues().minCoeff() > 1e-12 * top)) {
    throw SingularMatrixError("lda_fit: pooled covariance is singular; use a positive shrinkage", 0);
  }
  m.factor = CholeskyFactor(m.covariance);
  return m;
}

Matrix lda_discriminants(const LdaModel& model, const Matrix& scores) {
  if (scores.cols() != model.means.cols()) throw std::invalid_argument("lda: score width does not match the model");
  const Index k = model.means.rows();
  Matrix out(scores.rows(), k);
  for (Index c = 0; c < k; ++c) {
    const Vector mu = model.means.row(c).transpose();
    const Vector a = model.factor.solve(mu);
    const double offset = -0.5 * mu.dot(a) + std::log(model.priors[c]);
    out.col(c) = (scores * a).array() + offset;
  }
  return out;
}

Matrix lda_predict(const LdaModel& model, const Matrix& scores) {
  Matrix g = lda_discriminants(model, scores);
  for (Index i = 0; i < g.rows(); ++i) {
    const double top = g.row(i).maxCoeff();
    g.row(i) = (g.row(i).array() - top).exp();
    g.row(i) /= g.row(i).sum();
  }
  return g;
}

std::vector<int> lda_classify(const LdaModel& model, const Matrix& scores) {
  const Matrix g = lda_discriminants(model, scores);
  std::vector<int> out(static_cast<std::size_t>(g.rows()));
  for (Index i = 0; i < g.rows(); ++i) {
    Index best = 0;
    g.row(i).maxCoeff(&best);
    out[static_cast<std::size_t>(i)] = model.classes[static_cast<std::size_t>(best)];
  }
  return out;
}

Vector lda_direction(const LdaModel& model) {
  if (model.means.rows() != 2) throw std::invalid_argument("lda_direction: two-class models only");
  return model.factor.solve((model.means.row(1) - model.means.row(0)).transpose());
}

double auroc(const Vector& scores, const std::vector<int>& labels) {
  const std::vector<bool> pos = positives(scores, labels, "auroc");
  const std::size_t n = pos.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double rank_sum = 0.0;
  double n_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) {
      if (pos[order[t]]) {
        rank_sum += midrank;
        n_pos += 1.0;
      }
    }
    i = j + 1;
  }
  const double n_neg = static_cast<double>(n) - n_pos;
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

double auprc(const Vector& scores, const std::vector<int>& labels) {
  const std::vector<bool> pos = positives(scores, labels, "auprc");
  const std::size_t n = pos.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const double total_pos = static_cast<double>(std::count(pos.begin(), pos.end(), true));

  double area = 0.0;
  double tp = 0.0;
  double seen = 0.0;
  double prev_recall = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    for (std::size_t t = i; t <= j; ++t) {
      if (pos[order[t]]) tp += 1.0;
      seen += 1.0;
    }
    const double recall = tp / total_pos;
    area += (recall - prev_recall) * (tp / seen);
    prev_recall = recall;
    i = j + 1;
  }
  return area;
}

double misclassification(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || truth.empty()) throw std::invalid_argument("misclassification: length mismatch");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += predicted[i] != truth[i];
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

}  // namespace coca
