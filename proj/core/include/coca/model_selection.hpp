#pragma once

#include "coca/coca.hpp"
#include "coca/data.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace coca {

/// Rectangular (rho, lambda) grid. Both axes strictly increasing, nonnegative
/// and non-empty. Cells are addressed rho-major: index = i * lambdas + j.
class HyperGrid {
 public:
  HyperGrid(std::vector<double> rho_values, std::vector<double> lambda_values);

  const std::vector<double>& rho_values() const noexcept { return rho_; }
  const std::vector<double>& lambda_values() const noexcept { return lambda_; }
  std::size_t size() const noexcept { return rho_.size() * lambda_.size(); }
  double rho(std::size_t cell) const { return rho_.at(cell / lambda_.size()); }
  double lambda(std::size_t cell) const { return lambda_.at(cell % lambda_.size()); }
  std::size_t index(std::size_t rho_index, std::size_t lambda_index) const;

 private:
  std::vector<double> rho_;
  std::vector<double> lambda_;
};

struct SolverConfig {
  DenseOptions dense;
  SparseOptions sparse;
  /// Fit on centered X / sqrt(n_train) so that rho and lambda do not scale
  /// with the sample size.
  bool covariance_scale = true;
  int threads = 1;
  /// Called after every fit made through fit_cell, possibly from worker
  /// threads when threads > 1.
  std::function<void(const Matrix& x, Index p1, const CocaModel&)> observer;
};

/// Centered (and optionally scaled) training matrix plus what is needed to map
/// new rows into the same frame.
struct Prepared {
  Matrix x;
  Vector means;
  double scale = 1.0;  ///< x = (raw - means) * scale
};

Prepared prepare(const Matrix& raw, bool covariance_scale);

/// One grid cell on a prepared matrix: lambda == 0 uses the dense solver.
CocaModel fit_cell(const Matrix& x, Index p1, double rho, double lambda, const SolverConfig& config);

/// Seeded fold labels in [0, K); fold sizes differ by at most one.
std::vector<int> make_folds(Index n, int folds, std::uint64_t seed);

/// Folds balanced within every class. Throws StratificationError if some
/// training split would hold fewer than two samples of a class.
std::vector<int> make_stratified_folds(const std::vector<int>& labels, int folds, std::uint64_t seed);

class StratificationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SpeckleMask {
  std::vector<std::pair<Index, Index>> cells;  ///< (row, col) in the concatenated matrix, sorted
  double fraction = 0.0;
  std::uint64_t seed = 0;
  Index rows = 0;
  Index cols = 0;
};

/// round(fraction * n * p) distinct cells; every row and column keeps at least
/// one unmasked entry. Throws std::invalid_argument when that is impossible.
SpeckleMask make_speckle_mask(Index n, Index p, double fraction, std::uint64_t seed);

enum class SelectionRule { Minimum, OneStandardError };
const char* to_string(SelectionRule r);

enum class SupervisedMetric { Auroc, Auprc, Misclassification };
const char* to_string(SupervisedMetric m);
SupervisedMetric parse_metric(const std::string& name);

struct CvReport {
  std::string procedure;  ///< "kfold", "holdout", "speckled" or "supervised"
  std::string metric;     ///< "reconstruction", "masked_mse", "auroc", ...
  bool maximize = false;
  std::vector<double> rho_values;
  std::vector<double> lambda_values;
  std::vector<double> mean;           ///< per cell, NaN when ineligible
  std::vector<double> se;             ///< per cell
  std::vector<int> fail_count;        ///< per cell
  std::vector<int> evaluations;       ///< folds (or masks) attempted per cell
  std::vector<std::vector<double>> fold_values;  ///< per cell, per fold (NaN for failures)
  std::uint64_t seed = 0;
  int folds = 0;
  std::vector<int> fold_assignment;
  SpeckleMask mask;
  Index masked_view1 = 0;
  Index masked_view2 = 0;
  SelectionRule rule = SelectionRule::Minimum;
  std::size_t selected = 0;
  double selected_rho = 0.0;
  double selected_lambda = 0.0;

  bool eligible(std::size_t cell) const { return fail_count.at(cell) < evaluations.at(cell); }
};

/// Picks the cell per `rule` among eligible cells. Values within 1e-12 of the
/// best tie; ties go to the largest lambda, then the smallest rho. Throws when
/// no cell is eligible.
std::size_t select_cell(const CvReport& report, SelectionRule rule);

/// Held-out projection reconstruction error per row, averaged over folds.
CvReport kfold_unsupervised(const MultiViewData& data, const HyperGrid& grid, int folds, const SolverConfig& config,
                            std::uint64_t seed, SelectionRule rule = SelectionRule::Minimum);

/// Masked entries imputed by column means of the unmasked entries, the rank-1
/// reconstruction scored on masked cells only. `impute_passes` > 1 re-imputes
/// the masked cells from the previous reconstruction and refits.
CvReport speckled_cv(const MultiViewData& data, const HyperGrid& grid, double fraction, const SolverConfig& config,
                     std::uint64_t seed, SelectionRule rule = SelectionRule::Minimum, int impute_passes = 1);

/// Every cell fitted once on `train` and scored by per-row projection
/// reconstruction error on an independent `validation` sample, centered by the
/// training means.
CvReport holdout_validation(const MultiViewData& train, const MultiViewData& validation, const HyperGrid& grid,
                            const SolverConfig& config, SelectionRule rule = SelectionRule::Minimum);

/// Mean squared reconstruction error over the masked cells of `truth`.
double masked_error(const Matrix& truth, const Matrix& reconstruction, const SpeckleMask& mask);

/// Component fitted once per cell on the full input; the LDA stage on
/// (scores1, scores2) is cross-validated over stratified folds.
CvReport kfold_supervised(const MultiViewData& data, const std::vector<int>& labels, const HyperGrid& grid, int folds,
                          SupervisedMetric metric, const SolverConfig& config, std::uint64_t seed,
                          SelectionRule rule = SelectionRule::Minimum, double shrinkage = 0.1);

/// n x 2 matrix (X1 v1, X2 v2) for rows already in the model's frame.
Matrix view_scores(const Matrix& x, Index p1, const CocaModel& model);

}  // namespace coca
