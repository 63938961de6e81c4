#pragma once

#include "coca/linalg.hpp"

#include <vector>

namespace coca {

/// Linear discriminant analysis with a shared, shrunk covariance.
struct LdaModel {
  std::vector<int> classes;  ///< sorted distinct labels
  Matrix means;              ///< one row per class
  Matrix covariance;         ///< pooled, after shrinkage
  Vector priors;
  double shrinkage = 0.0;
  CholeskyFactor factor;
};

/// Pooled covariance (1 - s) S + s (tr S / d) I. Each class needs >= 2 samples.
/// Throws SingularMatrixError when the shrunk covariance is singular.
LdaModel lda_fit(const Matrix& scores, const std::vector<int>& labels, double shrinkage = 0.1);

/// n x k matrix of linear discriminant scores, columns ordered as model.classes.
Matrix lda_discriminants(const LdaModel& model, const Matrix& scores);

/// n x k posterior probabilities (softmax of the discriminants).
Matrix lda_predict(const LdaModel& model, const Matrix& scores);

/// Most probable class per row.
std::vector<int> lda_classify(const LdaModel& model, const Matrix& scores);

/// Two-class direction Sigma^{-1} (mu_1 - mu_0) with class order as model.classes.
Vector lda_direction(const LdaModel& model);

/// Rank statistic (concordant pairs + ties / 2) / (n_pos n_neg). The positive
/// class is the larger of the two labels present.
double auroc(const Vector& scores, const std::vector<int>& labels);

/// Step-interpolated area under the precision-recall curve from a descending
/// sweep; tied scores enter as one block.
double auprc(const Vector& scores, const std::vector<int>& labels);

double misclassification(const std::vector<int>& predicted, const std::vector<int>& truth);

}  // namespace coca
