#include "oracles.hpp"

#include <coca/lda.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace coca;

namespace {

struct Labeled {
  Matrix scores;
  std::vector<int> labels;
};

Labeled two_clusters(Index n_each, double shift, std::uint64_t seed) {
  Labeled d;
  d.scores = oracle::gaussian(2 * n_each, 2, seed);
  for (Index i = 0; i < 2 * n_each; ++i) {
    const int y = i < n_each ? 0 : 1;
    d.labels.push_back(y);
    if (y == 1) d.scores(i, 0) += shift;
  }
  return d;
}

}  // namespace

TEST(Lda, SeparatedClusters) {
  const Labeled d = two_clusters(50, 20.0, 1);
  const LdaModel m = lda_fit(d.scores, d.labels, 0.0);
  EXPECT_EQ(misclassification(lda_classify(m, d.scores), d.labels), 0.0);
  // Boundary passes through the midpoint of the class means.
  const Vector mid = 0.5 * (m.means.row(0) + m.means.row(1)).transpose();
  const Matrix disc = lda_discriminants(m, mid.transpose());
  EXPECT_NEAR(disc(0, 0) - std::log(m.priors[0]), disc(0, 1) - std::log(m.priors[1]), 1e-9);
}

TEST(Lda, EqualMeansGivePriors) {
  Matrix s(6, 2);
  s << 1, 0, -1, 0, 0, 1, 1, 0, -1, 0, 0, 1;
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  const LdaModel m = lda_fit(s, y);
  const Matrix post = lda_predict(m, s);
  for (Index i = 0; i < 6; ++i) {
    EXPECT_NEAR(post(i, 0), 0.5, 1e-12);
    EXPECT_NEAR(post.row(i).sum(), 1.0, 1e-12);
  }
}

TEST(Lda, DirectionMatchesClosedForm) {
  const Labeled d = two_clusters(40, 1.5, 2);
  for (double s : {0.0, 0.3}) {
    const LdaModel m = lda_fit(d.scores, d.labels, s);
    Matrix pooled = Matrix::Zero(2, 2);
    for (Index i = 0; i < d.scores.rows(); ++i) {
      const Vector r = d.scores.row(i).transpose() - m.means.row(d.labels[i]).transpose();
      pooled += r * r.transpose();
    }
    pooled /= static_cast<double>(d.scores.rows() - 2);
    pooled = (1 - s) * pooled + s * pooled.trace() / 2.0 * Matrix::Identity(2, 2);
    const Vector ref = oracle::gauss_solve(pooled, (m.means.row(1) - m.means.row(0)).transpose());
    EXPECT_LT((lda_direction(m) - ref).norm(), 1e-8 * ref.norm());
  }
}

TEST(Lda, RejectsTinyClass) {
  Matrix s = oracle::gaussian(5, 2, 3);
  EXPECT_THROW(lda_fit(s, {0, 0, 0, 0, 1}), std::invalid_argument);
}

TEST(Lda, SingularWithoutShrinkage) {
  Matrix s(4, 2);
  s << 1, 1, 2, 2, 3, 3, 5, 5;
  EXPECT_THROW(lda_fit(s, {0, 0, 1, 1}, 0.0), SingularMatrixError);
}

TEST(Auroc, HandCase) {
  Vector s(4);
  s << 0.9, 0.8, 0.7, 0.6;
  EXPECT_DOUBLE_EQ(auroc(s, {1, 0, 1, 0}), 0.75);
}

TEST(Auroc, SeparatedAndTies) {
  Vector s(4);
  s << 4, 3, 2, 1;
  EXPECT_DOUBLE_EQ(auroc(s, {1, 1, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(auprc(s, {1, 1, 0, 0}), 1.0);
  const Vector flat = Vector::Constant(5, 0.3);
  EXPECT_DOUBLE_EQ(auroc(flat, {1, 0, 0, 1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(auprc(flat, {1, 0, 0, 1, 0}), 0.4);
}

TEST(Auroc, BruteForceAndMonotoneInvariance) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Vector s = oracle::gaussian(40, 1, seed).col(0);
    for (Index i = 0; i < 40; i += 5) s[i] = std::round(s[i]);  // inject ties
    std::vector<int> y;
    for (Index i = 0; i < 40; ++i) y.push_back((s[i] + 0.5 * oracle::gaussian(40, 1, seed + 50)(i, 0)) > 0 ? 3 : 1);
    const double a = auroc(s, y);
    EXPECT_NEAR(a, oracle::brute_auroc(s, y), 1e-14);
    const Vector t = s.array().exp() * 5.0 + 2.0;
    EXPECT_NEAR(auroc(t, y), a, 1e-14);
    EXPECT_NEAR(auroc(-s, y), 1.0 - a, 1e-14);
  }
}

TEST(Auprc, StepSum) {
  Vector s(5);
  s << 5, 4, 3, 2, 1;
  // Precision at each positive: 1/1, 2/3, 3/5.
  EXPECT_NEAR(auprc(s, {1, 0, 1, 0, 1}), (1.0 + 2.0 / 3.0 + 0.6) / 3.0, 1e-14);
}

TEST(Misclassification, Fraction) {
  EXPECT_DOUBLE_EQ(misclassification({0, 1, 1, 0}, {0, 1, 0, 0}), 0.25);
  EXPECT_THROW(misclassification({0}, {0, 1}), std::invalid_argument);
}
