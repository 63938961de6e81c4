#include "oracles.hpp"

#include <coca/baselines.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace coca;

TEST(PcaLeading, Diagonal) {
  Matrix x(2, 2);
  x << 3, 0, 0, 1;
  const PcaResult r = pca_leading(x);
  EXPECT_NEAR(r.singular_value, 3.0, 1e-10);
  EXPECT_NEAR(r.direction[0], 1.0, 1e-8);
}

TEST(PcaLeading, DuplicatedColumns) {
  const Vector a = oracle::gaussian(10, 1, 1).col(0);
  Matrix x(10, 2);
  x << a, a;
  const PcaResult r = pca_leading(x);
  EXPECT_NEAR(r.direction[0], 1.0 / std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(r.direction[1], 1.0 / std::sqrt(2.0), 1e-8);
}

TEST(PcaLeading, MatchesOracle) {
  const Matrix x = oracle::gaussian(20, 6, 2);
  EXPECT_LT(oracle::angle(pca_leading(x).direction, oracle::leading_right_singular(x)), 1e-7);
}

TEST(CcaLeading, DuplicatedView) {
  const Matrix x = oracle::gaussian(30, 3, 3);
  const CcaSolution c = cca_leading(x, x);
  EXPECT_NEAR(c.correlation, 1.0, 1e-8);
  EXPECT_LT(oracle::angle(c.w1, c.w2), 1e-6);
}

TEST(CcaLeading, OrthogonalColumnSpaces) {
  Matrix x1 = Matrix::Zero(4, 1), x2 = Matrix::Zero(4, 1);
  x1 << 1, -1, 0, 0;
  x2 << 0, 0, 1, -1;
  EXPECT_NEAR(cca_leading(x1, x2).correlation, 0.0, 1e-12);
}

TEST(CcaLeading, StationaryConditionsAndOracle) {
  const Matrix z = oracle::gaussian(100, 1, 4);
  Matrix x1 = oracle::gaussian(100, 3, 5);
  Matrix x2 = oracle::gaussian(100, 3, 6);
  x1.col(0) += z.col(0);
  x2.col(1) += z.col(0);
  const CcaSolution c = cca_leading(x1, x2);
  const Matrix s11 = x1.transpose() * x1, s22 = x2.transpose() * x2, s12 = x1.transpose() * x2;
  EXPECT_LT((s12 * c.w2 - c.correlation * s11 * c.w1).norm(), 1e-6);
  EXPECT_LT((s12.transpose() * c.w1 - c.correlation * s22 * c.w2).norm(), 1e-6);
  EXPECT_NEAR((x1 * c.w1).norm(), 1.0, 1e-10);
  const auto [r1, r2] = oracle::cca(x1, x2);
  EXPECT_LT(oracle::angle(c.w1, r1), 1e-6);
  EXPECT_LT(oracle::angle(c.w2, r2), 1e-6);
}

TEST(CcaLeading, SingularGramNeedsRidge) {
  Matrix x1 = oracle::gaussian(10, 2, 7);
  x1.col(1) = x1.col(0);
  const Matrix x2 = oracle::gaussian(10, 2, 8);
  EXPECT_THROW(cca_leading(x1, x2), SingularMatrixError);
  EXPECT_NO_THROW(cca_leading(x1, x2, 1e-3));
}

TEST(CcaLimitEigenvalue, MatchesCorrelation) {
  const Matrix z = oracle::gaussian(80, 1, 9);
  Matrix x = oracle::gaussian(80, 4, 10);
  x.col(0) += z.col(0);
  x.col(3) += z.col(0);
  const double r = cca_leading(x.leftCols(2), x.rightCols(2)).correlation;
  EXPECT_NEAR(cca_limit_eigenvalue(x, 2), (1 + r) / (1 - r), 1e-6 * (1 + r) / (1 - r));
}
