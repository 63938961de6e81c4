#include "coca/model_selection.hpp"

#include "coca/lda.hpp"
#include "coca/metrics.hpp"
#include "coca/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <thread>

namespace coca {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_axis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw std::invalid_argument(std::string("HyperGrid: ") + name + " axis is empty");
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i]) || axis[i] < 0.0) {
      throw std::invalid_argument(std::string("HyperGrid: ") + name + " values must be finite and >= 0");
    }
    if (i > 0 && !(axis[i] > axis[i - 1])) {
      throw std::invalid_argument(std::string("HyperGrid: ") + name + " values must be strictly increasing");
    }
  }
}

// Runs task(0..count-1); results must be written to per-index slots.
void run_tasks(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<Index> members(const std::vector<int>& assignment, int fold, bool inside) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if ((assignment[i] == fold) == inside) out.push_back(static_cast<Index>(i));
  }
  return out;
}

Matrix take_rows(const Matrix& x, const std::vector<Index>& idx) {
  Matrix out(static_cast<Index>(idx.size()), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Index>(i)) = x.row(idx[i]);
  return out;
}

CvReport blank_report(const HyperGrid& grid, std::size_t evaluations_per_cell) {
  CvReport r;
  r.rho_values = grid.rho_values();
  r.lambda_values = grid.lambda_values();
  const std::size_t cells = grid.size();
  r.mean.assign(cells, kNaN);
  r.se.assign(cells, kNaN);
  r.fail_count.assign(cells, 0);
  r.evaluations.assign(cells, static_cast<int>(evaluations_per_cell));
  r.fold_values.assign(cells, std::vector<double>(evaluations_per_cell, kNaN));
  return r;
}

// Fills mean / se / fail_count from fold_values.
void summarize(CvReport& r) {
  for (std::size_t c = 0; c < r.fold_values.size(); ++c) {
    std::vector<double> ok;
    for (double v : r.fold_values[c]) {
      if (std::isfinite(v)) ok.push_back(v);
    }
    r.fail_count[c] = static_cast<int>(r.fold_values[c].size() - ok.size());
    if (ok.empty()) continue;
    double sum = 0.0;
    for (double v : ok) sum += v;
    const double mean = sum / static_cast<double>(ok.size());
    double ss = 0.0;
    for (double v : ok) ss += (v - mean) * (v - mean);
    r.mean[c] = mean;
    r.se[c] = ok.size() > 1 ? std::sqrt(ss / static_cast<double>(ok.size() - 1) / static_cast<double>(ok.size())) : 0.0;
  }
}

void finish(CvReport& r, SelectionRule rule) {
  r.rule = rule;
  r.selected = select_cell(r, rule);
  const std::size_t nl = r.lambda_values.size();
  r.selected_rho = r.rho_values[r.selected / nl];
  r.selected_lambda = r.lambda_values[r.selected % nl];
}

void check_folds(Index n, int folds) {
  if (folds < 2) throw std::invalid_argument("cv: need at least 2 folds");
  if (folds > n) throw std::invalid_argument("cv: more folds than samples");
}

}  // namespace

HyperGrid::HyperGrid(std::vector<double> rho_values, std::vector<double> lambda_values)
    : rho_(std::move(rho_values)), lambda_(std::move(lambda_values)) {
  check_axis(rho_, "rho");
  check_axis(lambda_, "lambda");
}

std::size_t HyperGrid::index(std::size_t rho_index, std::size_t lambda_index) const {
  if (rho_index >= rho_.size() || lambda_index >= lambda_.size()) throw std::out_of_range("HyperGrid::index");
  return rho_index * lambda_.size() + lambda_index;
}

Prepared prepare(const Matrix& raw, bool covariance_scale) {
  auto [centered, means] = center_columns(raw);
  Prepared p;
  p.means = std::move(means);
  p.scale = covariance_scale ? 1.0 / std::sqrt(static_cast<double>(raw.rows())) : 1.0;
  p.x = std::move(centered);
  if (covariance_scale) p.x *= p.scale;
  return p;
}

CocaModel fit_cell(const Matrix& x, Index p1, double rho, double lambda, const SolverConfig& config) {
  CocaModel m = lambda == 0.0 ? fit_dense(x, p1, rho, config.dense) : fit_sparse(x, p1, rho, lambda, config.sparse);
  if (config.observer) config.observer(x, p1, m);
  return m;
}

std::vector<int> make_folds(Index n, int folds, std::uint64_t seed) {
  check_folds(n, folds);
  Rng rng(seed);
  const auto perm = permutation(static_cast<std::size_t>(n), rng);
  std::vector<int> out(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < perm.size(); ++i) out[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
  return out;
}

std::vector<int> make_stratified_folds(const std::vector<int>& labels, int folds, std::uint64_t seed) {
  const Index n = static_cast<Index>(labels.size());
  check_folds(n, folds);
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  if (by_class.size() < 2) throw StratificationError("stratified folds: need at least two classes");

  Rng rng(seed);
  std::vector<int> out(labels.size(), 0);
  std::size_t offset = 0;
  for (const auto& [label, idx] : by_class) {
    const auto perm = permutation(idx.size(), rng);
    for (std::size_t t = 0; t < idx.size(); ++t) {
      out[idx[perm[t]]] = static_cast<int>((offset + t) % static_cast<std::size_t>(folds));
    }
    offset += idx.size();
    // Smallest training split for this class: count minus the largest fold share.
    const std::size_t largest = (idx.size() + static_cast<std::size_t>(folds) - 1) / static_cast<std::size_t>(folds);
    if (idx.size() - largest < 2) {
      throw StratificationError("stratified folds: class " + std::to_string(label) +
                                " has too few samples for every training split to hold two");
    }
  }
  return out;
}

SpeckleMask make_speckle_mask(Index n, Index p, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 0.5)) throw std::invalid_argument("speckle mask: fraction must lie in (0, 0.5]");
  if (n < 2 || p < 2) throw std::invalid_argument("speckle mask: need at least 2 rows and 2 columns");
  const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(p);
  const auto target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
  if (target == 0) throw std::invalid_argument("speckle mask: fraction masks no cells");

  Rng rng(seed);
  const auto order = permutation(total, rng);
  std::vector<Index> row_masked(static_cast<std::size_t>(n), 0);
  std::vector<Index> col_masked(static_cast<std::size_t>(p), 0);
  SpeckleMask mask;
  mask.fraction = fraction;
  mask.seed = seed;
  mask.rows = n;
  mask.cols = p;
  for (std::size_t k = 0; k < total && mask.cells.size() < target; ++k) {
    const Index r = static_cast<Index>(order[k] / static_cast<std::size_t>(p));
    const Index c = static_cast<Index>(order[k] % static_cast<std::size_t>(p));
    if (row_masked[r] + 1 >= p || col_masked[c] + 1 >= n) continue;
    ++row_masked[r];
    ++col_masked[c];
    mask.cells.emplace_back(r, c);
  }
  if (mask.cells.size() < target) {
    throw std::invalid_argument("speckle mask: cannot mask the requested cells and keep an unmasked entry per row and column");
  }
  std::sort(mask.cells.begin(), mask.cells.end());
  return mask;
}

const char* to_string(SelectionRule r) {
  return r == SelectionRule::Minimum ? "min" : "one_se";
}

const char* to_string(SupervisedMetric m) {
  switch (m) {
    case SupervisedMetric::Auroc: return "auroc";
    case SupervisedMetric::Auprc: return "auprc";
    case SupervisedMetric::Misclassification: return "misclassification";
  }
  return "unknown";
}

SupervisedMetric parse_metric(const std::string& name) {
  if (name == "auroc") return SupervisedMetric::Auroc;
  if (name == "auprc") return SupervisedMetric::Auprc;
  if (name == "misclassification") return SupervisedMetric::Misclassification;
  throw std::invalid_argument("unknown metric '" + name + "' (expected auroc, auprc or misclassification)");
}

std::size_t select_cell(const CvReport& report, SelectionRule rule) {
  const std::size_t cells = report.mean.size();
  const double sign = report.maximize ? -1.0 : 1.0;  // work with "smaller is better"
  std::size_t best = cells;
  for (std::size_t c = 0; c < cells; ++c) {
    if (!report.eligible(c) || !std::isfinite(report.mean[c])) continue;
    if (best == cells || sign * report.mean[c] < sign * report.mean[best]) best = c;
  }
  if (best == cells) throw ConvergenceError("cv: every grid cell failed on every fold");

  double threshold = sign * report.mean[best];
  threshold += std::max(1e-12, 1e-12 * std::abs(threshold));
  if (rule == SelectionRule::OneStandardError && std::isfinite(report.se[best])) threshold += report.se[best];

  const std::size_t nl = report.lambda_values.size();
  std::size_t chosen = cells;
  for (std::size_t c = 0; c < cells; ++c) {
    if (!report.eligible(c) || !std::isfinite(report.mean[c])) continue;
    if (sign * report.mean[c] > threshold) continue;
    if (chosen == cells) {
      chosen = c;
      continue;
    }
    const std::size_t lc = c % nl, lb = chosen % nl;
    const std::size_t rc = c / nl, rb = chosen / nl;
    if (lc > lb || (lc == lb && rc < rb)) chosen = c;
  }
  return chosen;
}

CvReport kfold_unsupervised(const MultiViewData& data, const HyperGrid& grid, int folds, const SolverConfig& config,
                            std::uint64_t seed, SelectionRule rule) {
  check_folds(data.n(), folds);
  const Matrix raw = data.concat();
  const Index p1 = data.p1();
  CvReport r = blank_report(grid, static_cast<std::size_t>(folds));
  r.procedure = "kfold";
  r.metric = "reconstruction";
  r.seed = seed;
  r.folds = folds;
  r.fold_assignment = make_folds(data.n(), folds, seed);

  struct Split {
    Prepared train;
    Matrix test;  // centered by training means
  };
  std::vector<Split> splits;
  splits.reserve(static_cast<std::size_t>(folds));
  for (int f = 0; f < folds; ++f) {
    Split s;
    s.train = prepare(take_rows(raw, members(r.fold_assignment, f, false)), config.covariance_scale);
    s.test = take_rows(raw, members(r.fold_assignment, f, true)).rowwise() - s.train.means.transpose();
    splits.push_back(std::move(s));
  }

  const std::size_t cells = grid.size();
  run_tasks(cells * static_cast<std::size_t>(folds), config.threads, [&](std::size_t task) {
    const std::size_t c = task / static_cast<std::size_t>(folds);
    const std::size_t f = task % static_cast<std::size_t>(folds);
    const Split& s = splits[f];
    try {
      const CocaModel m = fit_cell(s.train.x, p1, grid.rho(c), grid.lambda(c), config);
      if (!m.converged()) return;
      r.fold_values[c][f] = projection_error(s.test, m.v) / static_cast<double>(s.test.rows());
    } catch (const std::exception&) {
      // Recorded as a failed fold through the NaN slot.
    }
  });
  summarize(r);
  finish(r, rule);
  return r;
}

CvReport holdout_validation(const MultiViewData& train, const MultiViewData& validation, const HyperGrid& grid,
                            const SolverConfig& config, SelectionRule rule) {
  if (train.p1() != validation.p1() || train.p2() != validation.p2())
    throw std::invalid_argument("holdout_validation: view widths differ between training and validation data");
  if (validation.n() < 1) throw std::invalid_argument("holdout_validation: empty validation set");
  const Index p1 = train.p1();
  CvReport r = blank_report(grid, 1);
  r.procedure = "holdout";
  r.metric = "reconstruction";
  r.folds = 1;
  const Prepared prep = prepare(train.concat(), config.covariance_scale);
  const Matrix held = validation.concat().rowwise() - prep.means.transpose();
  const double rows = static_cast<double>(held.rows());

  std::vector<double> cell_se(grid.size(), kNaN);
  run_tasks(grid.size(), config.threads, [&](std::size_t c) {
    try {
      const CocaModel m = fit_cell(prep.x, p1, grid.rho(c), grid.lambda(c), config);
      if (!m.converged()) return;
      // Per-row errors give the standard error used by the one-SE rule.
      Vector w = m.v;
      const double nv = w.norm();
      if (nv > 0.0) w /= nv;
      const Vector e = (held - (held * w) * w.transpose()).rowwise().squaredNorm();
      const double mean = e.mean();
      r.fold_values[c][0] = mean;
      cell_se[c] = held.rows() > 1 ? std::sqrt((e.array() - mean).square().sum() / (rows - 1.0) / rows) : 0.0;
    } catch (const std::exception&) {
    }
  });
  summarize(r);
  r.se = cell_se;
  finish(r, rule);
  return r;
}

double masked_error(const Matrix& truth, const Matrix& reconstruction, const SpeckleMask& mask) {
  if (mask.cells.empty()) throw std::invalid_argument("masked_error: empty mask");
  double sum = 0.0;
  for (const auto& [i, j] : mask.cells) {
    const double d = reconstruction(i, j) - truth(i, j);
    sum += d * d;
  }
  return sum / static_cast<double>(mask.cells.size());
}

CvReport speckled_cv(const MultiViewData& data, const HyperGrid& grid, double fraction, const SolverConfig& config,
                     std::uint64_t seed, SelectionRule rule, int impute_passes) {
  if (impute_passes < 1) throw std::invalid_argument("speckled_cv: impute_passes must be >= 1");
  const Matrix raw = data.concat();
  const Index n = raw.rows();
  const Index p = raw.cols();
  const Index p1 = data.p1();
  CvReport r = blank_report(grid, 1);
  r.procedure = "speckled";
  r.metric = "masked_mse";
  r.seed = seed;
  r.mask = make_speckle_mask(n, p, fraction, seed);
  for (const auto& cell : r.mask.cells) (cell.second < p1 ? r.masked_view1 : r.masked_view2) += 1;

  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> masked = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, p, false);
  for (const auto& [i, j] : r.mask.cells) masked(i, j) = true;
  Matrix imputed = raw;
  for (Index j = 0; j < p; ++j) {
    double sum = 0.0;
    Index count = 0;
    for (Index i = 0; i < n; ++i) {
      if (!masked(i, j)) {
        sum += raw(i, j);
        ++count;
      }
    }
    const double mean = sum / static_cast<double>(count);
    for (Index i = 0; i < n; ++i) {
      if (masked(i, j)) imputed(i, j) = mean;
    }
  }

  std::vector<double> cell_se(grid.size(), kNaN);
  run_tasks(grid.size(), config.threads, [&](std::size_t c) {
    try {
      Matrix current = imputed;
      Matrix recon;
      for (int pass = 0; pass < impute_passes; ++pass) {
        const Prepared prep = prepare(current, config.covariance_scale);
        const CocaModel m = fit_cell(prep.x, p1, grid.rho(c), grid.lambda(c), config);
        if (!m.converged()) return;
        recon = (m.u * m.v.transpose()) / prep.scale;
        recon.rowwise() += prep.means.transpose();
        for (const auto& [i, j] : r.mask.cells) current(i, j) = recon(i, j);
      }
      r.fold_values[c][0] = masked_error(raw, recon, r.mask);
      double ss = 0.0;
      for (const auto& [i, j] : r.mask.cells) {
        const double d2 = (recon(i, j) - raw(i, j)) * (recon(i, j) - raw(i, j));
        ss += (d2 - r.fold_values[c][0]) * (d2 - r.fold_values[c][0]);
      }
      const double k = static_cast<double>(r.mask.cells.size());
      cell_se[c] = k > 1 ? std::sqrt(ss / (k - 1.0) / k) : 0.0;
    } catch (const std::exception&) {
    }
  });
  summarize(r);
  r.se = cell_se;
  finish(r, rule);
  return r;
}

Matrix view_scores(const Matrix& x, Index p1, const CocaModel& model) {
  if (x.cols() != model.v.size()) throw std::invalid_argument("view_scores: width mismatch");
  Matrix s(x.rows(), 2);
  s.col(0) = x.leftCols(p1) * model.v.head(p1);
  s.col(1) = x.rightCols(x.cols() - p1) * model.v.tail(x.cols() - p1);
  return s;
}

CvReport kfold_supervised(const MultiViewData& data, const std::vector<int>& labels, const HyperGrid& grid, int folds,
                          SupervisedMetric metric, const SolverConfig& config, std::uint64_t seed, SelectionRule rule,
                          double shrinkage) {
  if (static_cast<Index>(labels.size()) != data.n()) throw std::invalid_argument("kfold_supervised: labels length differs from n");
  const bool binary_metric = metric != SupervisedMetric::Misclassification;
  std::map<int, std::size_t> counts;
  for (int y : labels) ++counts[y];
  if (binary_metric && counts.size() != 2) {
    throw std::invalid_argument(std::string("kfold_supervised: ") + to_string(metric) + " needs binary labels");
  }
  if (binary_metric) {
    for (const auto& [label, count] : counts) {
      if (count < static_cast<std::size_t>(folds)) {
        throw StratificationError("kfold_supervised: class " + std::to_string(label) +
                                  " cannot appear in every held-out fold");
      }
    }
  }

  const Matrix raw = data.concat();
  const Index p1 = data.p1();
  CvReport r = blank_report(grid, static_cast<std::size_t>(folds));
  r.procedure = "supervised";
  r.metric = to_string(metric);
  r.maximize = binary_metric;
  r.seed = seed;
  r.folds = folds;
  r.fold_assignment = make_stratified_folds(labels, folds, seed);

  const Prepared prep = prepare(raw, config.covariance_scale);
  std::vector<std::vector<Index>> train(static_cast<std::size_t>(folds)), test(static_cast<std::size_t>(folds));
  for (int f = 0; f < folds; ++f) {
    train[static_cast<std::size_t>(f)] = members(r.fold_assignment, f, false);
    test[static_cast<std::size_t>(f)] = members(r.fold_assignment, f, true);
  }
  const auto pick = [&](const std::vector<Index>& idx) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (Index i : idx) out.push_back(labels[static_cast<std::size_t>(i)]);
    return out;
  };

  run_tasks(grid.size(), config.threads, [&](std::size_t c) {
    Matrix scores;
    try {
      const CocaModel m = fit_cell(prep.x, p1, grid.rho(c), grid.lambda(c), config);
      if (!m.converged()) return;
      scores = view_scores(prep.x, p1, m);
    } catch (const std::exception&) {
      return;
    }
    for (int f = 0; f < folds; ++f) {
      const auto& tr = train[static_cast<std::size_t>(f)];
      const auto& te = test[static_cast<std::size_t>(f)];
      try {
        const LdaModel lda = lda_fit(take_rows(scores, tr), pick(tr), shrinkage);
        const Matrix held = take_rows(scores, te);
        const std::vector<int> y = pick(te);
        double value = kNaN;
        if (metric == SupervisedMetric::Misclassification) {
          value = misclassification(lda_classify(lda, held), y);
        } else {
          // Log-odds ranks like the posterior but does not saturate to ties.
          const Matrix g = lda_discriminants(lda, held);
          const Vector pos = g.col(1) - g.col(0);
          value = metric == SupervisedMetric::Auroc ? auroc(pos, y) : auprc(pos, y);
        }
        r.fold_values[c][static_cast<std::size_t>(f)] = value;
      } catch (const std::exception&) {
      }
    }
  });
  summarize(r);
  finish(r, rule);
  return r;
}

}  // namespace coca
