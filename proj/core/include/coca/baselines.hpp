#pragma once

#include "coca/linalg.hpp"

namespace coca {

struct PcaResult {
  Vector direction;  ///< leading right singular vector, sign-canonical
  double singular_value = 0.0;
};

/// Leading principal component of (centered) X.
PcaResult pca_leading(const Matrix& x);

/// Leading canonical pair, normalized so ||X1 w1|| = ||X2 w2|| = 1.
struct CcaSolution {
  Vector w1;
  Vector w2;
  double correlation = 0.0;  ///< leading singular value of the whitened cross-product, >= 0
};

/// Whitens each view with (Xi^T Xi + ridge I)^{-1/2}, takes the leading
/// singular pair of the whitened cross-product and maps it back.
/// Throws SingularMatrixError when a Gram matrix is singular and ridge == 0.
CcaSolution cca_leading(const Matrix& x1, const Matrix& x2, double ridge = 0.0);

/// Largest eigenvalue of (D X^T X D)^{-1} X^T X, the rho -> infinity limit of
/// the CoCA operator. Requires X^T X to be invertible.
double cca_limit_eigenvalue(const Matrix& x, Index p1, IterationControl control = {1e-12, 20000});

}  // namespace coca
