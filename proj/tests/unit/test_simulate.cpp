#include "oracles.hpp"

#include <coca/simulate.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace coca;

namespace {

Matrix empirical_cov(const Matrix& x) {
  const Matrix c = oracle::centered(x);
  return c.transpose() * c / static_cast<double>(x.rows() - 1);
}

FactorModelSpec noise_only(Index p1, Index p2) {
  FactorModelSpec s;
  s.beta1 = Vector::Zero(p1);
  s.beta2 = Vector::Zero(p2);
  s.W1 = Matrix::Zero(p1, 0);
  s.W2 = Matrix::Zero(p2, 0);
  s.B1 = Matrix::Zero(p1, 0);
  s.B2 = Matrix::Zero(p2, 0);
  s.Omega1 = Matrix::Identity(p1, p1);
  s.Omega2 = Matrix::Identity(p2, p2);
  return s;
}

}  // namespace

TEST(Draw, StandardNormalRows) {
  const Matrix c = empirical_cov(draw(noise_only(3, 2), 100000, 1).concat());
  EXPECT_LT((c - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 0.05);
}

TEST(Draw, NoiselessSingleFactorIsRankOne) {
  FactorModelSpec s = noise_only(3, 3);
  s.beta1 = Vector::Unit(3, 0);
  s.beta2 = Vector::Unit(3, 0);
  s.Omega1.setZero();
  s.Omega2.setZero();
  const Draw d = draw_with_latent(s, 20, 2);
  const Matrix x = d.data.concat();
  for (Index i = 0; i < 20; ++i) {
    EXPECT_DOUBLE_EQ(x(i, 0), d.z[i]);
    EXPECT_DOUBLE_EQ(x(i, 3), d.z[i]);
  }
  Eigen::JacobiSVD<Matrix> svd(x);
  EXPECT_LT(svd.singularValues()[1], 1e-12 * svd.singularValues()[0]);
}

TEST(Draw, IllustrativeCovariance) {
  const FactorModelSpec s = illustrative_spec();
  const Matrix c = empirical_cov(draw(s, 100000, 3).concat());
  EXPECT_LT((c - s.covariance()).cwiseAbs().maxCoeff(), 0.05);
}

TEST(Draw, Deterministic) {
  const FactorModelSpec s = illustrative_spec();
  EXPECT_EQ(draw(s, 50, 9).concat(), draw(s, 50, 9).concat());
  EXPECT_NE(draw(s, 50, 9).concat(), draw(s, 50, 10).concat());
  // Prefix stability: rows are generated one at a time.
  EXPECT_EQ(draw(s, 80, 9).concat().topRows(50), draw(s, 50, 9).concat());
}

TEST(Draw, RejectsTooFewRows) {
  EXPECT_THROW(draw(illustrative_spec(), 0, 1), std::invalid_argument);
}

TEST(IllustrativeSpec, Scales) {
  const FactorModelSpec s = illustrative_spec();
  EXPECT_NEAR(s.beta().norm(), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.W1.norm(), std::sqrt(2.0) - 0.1, 1e-15);
  EXPECT_NEAR(s.B1.norm(), std::sqrt(2.0) - 1.0, 1e-15);
  EXPECT_NEAR(s.Omega1(3, 3), 0.09, 1e-15);
  EXPECT_NO_THROW(s.validate());
}

TEST(SparseSpec, PanelAShape) {
  const FactorModelSpec s = sparse_spec(30, 2, 2);
  EXPECT_EQ(s.p1(), 30);
  EXPECT_EQ((s.beta1.array() != 0.0).count(), 2);
  EXPECT_EQ((s.beta2.array() != 0.0).count(), 2);
  EXPECT_NEAR(s.beta1.norm(), 1.0, 1e-15);
  // Columns outside the distractor block are untouched noise.
  const Matrix sigma = s.covariance();
  EXPECT_LT((sigma.block(5, 5, 25, 25) - Matrix::Identity(25, 25)).norm(), 1e-15);
}

TEST(SparseSpec, FullWidthHasNoPadding) {
  const FactorModelSpec s = sparse_spec(6, 6, 2);
  EXPECT_EQ((s.beta1.array() != 0.0).count(), 6);
  EXPECT_NO_THROW(s.validate());
  EXPECT_THROW(sparse_spec(4, 5, 2), std::invalid_argument);
}

TEST(SparseSpec, PaddingCovarianceMonteCarlo) {
  const FactorModelSpec s = sparse_spec(12, 2, 2);
  const Matrix c = empirical_cov(draw(s, 100000, 4).concat());
  EXPECT_LT((c.block(5, 5, 7, 7) - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff(), 0.05);
  EXPECT_LT((c - s.covariance()).cwiseAbs().maxCoeff(), 0.05);
}

TEST(PopulationRoot, Identity) {
  const Matrix r = population_root(noise_only(2, 2));
  EXPECT_LT((r - Matrix::Identity(4, 4)).norm(), 1e-14);
}

TEST(PopulationRoot, Diagonal) {
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 4, 9;
  const Matrix r = symmetric_sqrt(d);
  EXPECT_NEAR(r(0, 0), 2.0, 1e-14);
  EXPECT_NEAR(r(1, 1), 3.0, 1e-14);
}

TEST(PopulationRoot, MultiplyBack) {
  const FactorModelSpec s = illustrative_spec();
  const Matrix r = population_root(s);
  EXPECT_LT((r * r - s.covariance()).norm(), 1e-10);
  EXPECT_LT((r - r.transpose()).norm(), 1e-14);
}

TEST(Validate, RejectsShapesAndIndefiniteOmega) {
  FactorModelSpec s = illustrative_spec();
  s.W2 = Matrix::Zero(3, 1);
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = illustrative_spec();
  s.Omega1(0, 0) = -1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = illustrative_spec();
  s.B2 = Matrix::Zero(4, 2);
  EXPECT_THROW(s.validate(), std::invalid_argument);
}
