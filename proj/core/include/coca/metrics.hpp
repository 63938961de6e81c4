#pragma once

#include "coca/coca.hpp"
#include "coca/data.hpp"

namespace coca {

/// min over signs of ||v/|v| -/+ beta/|beta|||^2, in [0, 4].
double estimation_error(const Vector& v_hat, const Vector& beta);

/// (1/n)||X - X v v^T||_F^2 - (1/n)||X - X b b^T||_F^2 with v, b normalized.
/// Reported as is; negative values are possible on finite samples.
double excess_reconstruction_error(const Matrix& x_test, const Vector& v_hat, const Vector& beta);

/// ||X - X w w^T||_F^2 for w = direction / ||direction||; ||X||_F^2 when the
/// direction is zero.
double projection_error(const Matrix& x, const Vector& direction);

/// Training-form residual ||X - u v^T||_F^2 (equivalently d u w^T with d = ||v||).
/// Requires X to be the matrix the model was fit on (same row count).
double reconstruction_error(const Matrix& x, const CocaModel& model);

/// Held-out form: projection onto the model direction.
double heldout_reconstruction_error(const Matrix& x, const CocaModel& model);

struct Agreement {
  double gap = 0.0;          ///< ||X1 v1 - X2 v2|| with v scaled to ||X v|| = 1
  double correlation = 0.0;  ///< Pearson correlation of the two score vectors
};

Agreement agreement_diagnostics(const MultiViewData& data, const CocaModel& model);

/// Pearson correlation; 0 when either input is constant.
double pearson(const Vector& a, const Vector& b);

struct EvalReport {
  double estimation_error = 0.0;
  double excess_reconstruction_error = 0.0;
  double reconstruction_error = 0.0;
  double agreement_gap = 0.0;
  double score_correlation = 0.0;
};

/// Held-out evaluation of a fitted model against a planted loading.
EvalReport evaluate(const MultiViewData& test, const CocaModel& model, const Vector& beta);

}  // namespace coca
