#include "oracles.hpp"

#include <coca/linalg.hpp>
#include <coca/random.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace coca;

namespace {

Matrix spd(Index p, std::uint64_t seed) {
  const Matrix a = oracle::gaussian(p + 3, p, seed);
  Matrix s = a.transpose() * a;
  s.diagonal().array() += 0.5;
  return s;
}

}  // namespace

TEST(LeadingSingularTriplet, Diagonal) {
  Matrix x(2, 2);
  x << 3, 0, 0, 1;
  const SingularTriplet t = leading_singular_triplet(x);
  ASSERT_TRUE(t.converged);
  EXPECT_NEAR(t.d, 3.0, 1e-10);
  EXPECT_NEAR(std::abs(t.u[0]), 1.0, 1e-8);
  EXPECT_NEAR(std::abs(t.v[0]), 1.0, 1e-8);
}

TEST(LeadingSingularTriplet, RankOneSymmetric) {
  const Matrix x = Matrix::Ones(2, 2);
  const SingularTriplet t = leading_singular_triplet(x);
  ASSERT_TRUE(t.converged);
  EXPECT_NEAR(t.d, 2.0, 1e-10);
  EXPECT_NEAR(std::abs(t.u[0]), 1.0 / std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(std::abs(t.v[1]), 1.0 / std::sqrt(2.0), 1e-8);
}

TEST(LeadingSingularTriplet, MatchesJacobiOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix x = oracle::gaussian(6, 4, seed);
    const SingularTriplet t = leading_singular_triplet(x, {1e-12, 20000});
    ASSERT_TRUE(t.converged);
    const auto eig = oracle::jacobi_eigen(x.transpose() * x);
    EXPECT_NEAR(t.d, std::sqrt(eig.values[0]), 1e-8);
    EXPECT_LT(oracle::angle(t.v, eig.vectors.col(0)), 1e-6);
    // Residual contract.
    EXPECT_LE((x * t.v - t.d * t.u).norm(), 1e-10 * t.d * 10);
  }
}

TEST(LeadingSingularTriplet, ZeroMatrixIsDegenerate) {
  EXPECT_THROW(leading_singular_triplet(Matrix::Zero(3, 2)), DegenerateInputError);
}

TEST(LeadingEigenvector, Identity) {
  const EigenPair e = leading_eigenvector([](const Vector& v) { return v; }, 3);
  EXPECT_TRUE(e.converged);
  EXPECT_NEAR(e.value, 1.0, 1e-12);
  EXPECT_NEAR(e.vector.norm(), 1.0, 1e-12);
}

TEST(LeadingEigenvector, Diagonal) {
  Vector d(3);
  d << 5, 2, 1;
  const EigenPair e = leading_eigenvector([&](const Vector& v) { return Vector(d.cwiseProduct(v)); }, 3, {1e-12, 5000});
  ASSERT_TRUE(e.converged);
  EXPECT_NEAR(e.value, 5.0, 1e-10);
  EXPECT_NEAR(std::abs(e.vector[0]), 1.0, 1e-10);
}

TEST(LeadingEigenvector, CocaOperatorMatchesDenseOracle) {
  const Matrix x = oracle::gaussian(8, 6, 11);
  const Index p1 = 3;
  const double rho = 1.0;
  Matrix dmat = Matrix::Identity(6, 6);
  dmat.bottomRightCorner(3, 3) *= -1.0;
  const Matrix g = x.transpose() * x;
  Matrix a = rho * dmat * g * dmat;
  a.diagonal().array() += 1.0;
  const Matrix op = a.inverse() * g;
  const EigenPair e = leading_eigenvector([&](const Vector& v) { return Vector(op * v); }, 6, {1e-13, 20000});
  ASSERT_TRUE(e.converged);
  const auto [ref, mu] = oracle::coca_dense(x, p1, rho);
  EXPECT_LT(oracle::angle(e.vector, ref), 1e-6);
  EXPECT_NEAR(e.value, mu, 1e-8 * mu);
}

TEST(LeadingEigenvector, DeterministicForSeed) {
  const Matrix s = spd(5, 3);
  const auto apply = [&](const Vector& v) { return Vector(s * v); };
  const EigenPair a = leading_eigenvector(apply, 5, {1e-10, 5000}, 7);
  const EigenPair b = leading_eigenvector(apply, 5, {1e-10, 5000}, 7);
  EXPECT_EQ(a.vector, b.vector);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(SpdSolve, Identity) {
  Vector b(3);
  b << 1, 2, 3;
  EXPECT_LT((spd_solve(Matrix::Identity(3, 3), b) - b).norm(), 1e-15);
}

TEST(SpdSolve, Diagonal) {
  Matrix a = Matrix::Zero(2, 2);
  a.diagonal() << 2, 4;
  Vector b(2);
  b << 2, 4;
  const Vector x = spd_solve(a, b);
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 1.0, 1e-15);
}

TEST(SpdSolve, MatchesRefinedEliminationOracle) {
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    const Matrix a = spd(5, seed);
    const Vector b = oracle::gaussian(5, 1, seed + 100).col(0);
    const Vector x = spd_solve(a, b);
    const Vector ref = oracle::gauss_solve(a, b);
    EXPECT_LT((x - ref).norm(), 1e-9 * std::max(1.0, ref.norm()));
  }
}

TEST(SpdSolve, RejectsIndefinite) {
  Matrix a(2, 2);
  a << 1, 0, 0, -1;
  try {
    spd_solve(a, Vector::Ones(2));
    FAIL() << "expected SingularMatrixError";
  } catch (const SingularMatrixError& e) {
    EXPECT_EQ(e.pivot(), 1);
  }
}

TEST(SpdSolve, RejectsAsymmetric) {
  Matrix a(2, 2);
  a << 2, 1, 0, 2;
  EXPECT_THROW(spd_solve(a, Vector::Ones(2)), std::invalid_argument);
}

TEST(PsdCholesky, ReproducesSemidefinite) {
  const Matrix f = oracle::gaussian(5, 2, 4);
  const Matrix a = f * f.transpose();  // rank 2
  const Matrix l = psd_cholesky(a);
  EXPECT_LT((l * l.transpose() - a).norm(), 1e-10 * a.norm());
}

TEST(ConjugateGradient, MatchesDirectSolve) {
  const Matrix a = spd(12, 9);
  const Vector b = oracle::gaussian(12, 1, 10).col(0);
  const CgResult r = conjugate_gradient([&](const Vector& v) { return Vector(a * v); }, b, 1e-13);
  ASSERT_TRUE(r.converged);
  EXPECT_LT((r.x - oracle::gauss_solve(a, b)).norm(), 1e-8);
}

TEST(CanonicalizeSign, LargestEntryPositive) {
  Vector v(3);
  v << 0.1, -2.0, 1.0;
  EXPECT_EQ(canonicalize_sign(v), -1.0);
  EXPECT_GT(v[1], 0.0);
  Vector tie(2);
  tie << -1.0, 1.0;
  canonicalize_sign(tie);
  EXPECT_GT(tie[0], 0.0);
}

TEST(LineAngle, SignInvariant) {
  Vector a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  EXPECT_NEAR(line_angle(a, b), M_PI / 2, 1e-15);
  EXPECT_NEAR(line_angle(a, -a), 0.0, 1e-15);
}

TEST(Rng, ReferenceValues) {
  // SplitMix64 of seed 0: the first output of the canonical generator.
  EXPECT_EQ(splitmix64(0x9E3779B97F4A7C15ULL), 0xE220A8397B1DCDAFULL);
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_EQ(a.counter(), 100u);
}

TEST(Rng, UniformAndNormalMoments) {
  Rng rng(5);
  double su = 0, sn = 0, sn2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
  }
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.02);
}

TEST(Rng, PermutationIsBijection) {
  Rng rng(3);
  const auto p = permutation(50, rng);
  std::set<std::size_t> seen(p.begin(), p.end());
  EXPECT_EQ(seen.size(), 50u);
  EXPECT_EQ(*seen.rbegin(), 49u);
}
