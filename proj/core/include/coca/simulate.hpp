#pragma once

#include "coca/data.hpp"
#include "coca/linalg.hpp"

#include <cstdint>

namespace coca {

/// Two-view latent factor model:
///   x1 = beta1 z + W1 z1 + B1 s + e1,   x2 = beta2 z + W2 z2 + B2 s + e2
/// with z ~ N(0,1), z1 ~ N(0, I_k1), z2 ~ N(0, I_k2), s ~ N(0, I_l),
/// ei ~ N(0, Omega_i), all independent.
struct FactorModelSpec {
  Vector beta1;
  Vector beta2;
  Matrix W1;  ///< p1 x k1
  Matrix W2;  ///< p2 x k2
  Matrix B1;  ///< p1 x l
  Matrix B2;  ///< p2 x l
  Matrix Omega1;
  Matrix Omega2;

  Index p1() const { return beta1.size(); }
  Index p2() const { return beta2.size(); }
  /// Planted shared loading (beta1, beta2).
  Vector beta() const;
  /// Cov(x) = beta beta^T + blockdiag(W1 W1^T, W2 W2^T) + B B^T + blockdiag(Omega1, Omega2).
  Matrix covariance() const;
  /// Throws std::invalid_argument on inconsistent shapes or a non-PSD Omega.
  void validate() const;
};

struct Draw {
  MultiViewData data;
  Vector z;  ///< shared factor per sample, for label rules
};

/// n independent rows; per row the normals are consumed in the order
/// z, z1, z2, s, e1, e2. Deterministic given (spec, n, seed).
Draw draw_with_latent(const FactorModelSpec& spec, Index n, std::uint64_t seed);
MultiViewData draw(const FactorModelSpec& spec, Index n, std::uint64_t seed);

/// Four features per view: beta_i = e1; W_i has norm ||beta|| - 0.1 along
/// (0,1,-1,0)/sqrt(2); B_i = (||beta|| - 1) e4; Omega_i = diag(1,1,1,0.09);
/// ||beta|| = sqrt(2).
FactorModelSpec illustrative_spec();

/// Sparse design of width p_per_view per view. beta_i has `dense_dims` equal
/// entries (unit norm per view) on the leading coordinates; the illustrative
/// distractors are placed on the next free coordinates (inside the support
/// when there is no room), and the remaining coordinates are pure unit-variance
/// noise. `n_distractors` in {0, 1, 2} keeps none, the view-specific factor W,
/// or both W and the weak shared factor B.
FactorModelSpec sparse_spec(Index p_per_view, Index dense_dims, int n_distractors = 2);

/// Symmetric PSD square root of the model covariance.
Matrix population_root(const FactorModelSpec& spec);
Matrix symmetric_sqrt(const Matrix& sigma);

}  // namespace coca
