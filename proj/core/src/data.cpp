#include "coca/data.hpp"

#include <cmath>

namespace coca {

MultiViewData::MultiViewData(Matrix x1, Matrix x2, std::vector<std::string> sample_ids,
                             std::vector<std::string> names1, std::vector<std::string> names2)
    : x1_(std::move(x1)),
      x2_(std::move(x2)),
      sample_ids_(std::move(sample_ids)),
      names1_(std::move(names1)),
      names2_(std::move(names2)) {
  if (x1_.cols() < 1 || x2_.cols() < 1) {
    throw std::invalid_argument("MultiViewData: each view needs at least one column");
  }
  if (x1_.rows() != x2_.rows()) {
    throw std::invalid_argument("MultiViewData: views have different row counts (" +
                                std::to_string(x1_.rows()) + " vs " + std::to_string(x2_.rows()) + ")");
  }
  if (x1_.rows() < 2) throw std::invalid_argument("MultiViewData: need at least 2 samples");
  if (!x1_.allFinite() || !x2_.allFinite()) {
    throw std::invalid_argument("MultiViewData: non-finite entries");
  }
  if (!sample_ids_.empty() && static_cast<Index>(sample_ids_.size()) != x1_.rows()) {
    throw std::invalid_argument("MultiViewData: sample id count does not match rows");
  }
  if (!names1_.empty() && static_cast<Index>(names1_.size()) != x1_.cols()) {
    throw std::invalid_argument("MultiViewData: view 1 feature names do not match columns");
  }
  if (!names2_.empty() && static_cast<Index>(names2_.size()) != x2_.cols()) {
    throw std::invalid_argument("MultiViewData: view 2 feature names do not match columns");
  }
}

MultiViewData MultiViewData::split(const Matrix& x, Index p1) {
  if (p1 < 1 || p1 >= x.cols()) throw std::invalid_argument("MultiViewData::split: p1 out of range");
  return MultiViewData(x.leftCols(p1), x.rightCols(x.cols() - p1));
}

Matrix MultiViewData::concat() const {
  Matrix x(n(), p());
  x << x1_, x2_;
  return x;
}

MultiViewData MultiViewData::rows(const std::vector<Index>& idx) const {
  const auto m = static_cast<Index>(idx.size());
  Matrix a(m, p1());
  Matrix b(m, p2());
  std::vector<std::string> ids;
  for (Index i = 0; i < m; ++i) {
    a.row(i) = x1_.row(idx[i]);
    b.row(i) = x2_.row(idx[i]);
    if (!sample_ids_.empty()) ids.push_back(sample_ids_[idx[i]]);
  }
  return MultiViewData(std::move(a), std::move(b), std::move(ids), names1_, names2_);
}

bool MultiViewData::operator==(const MultiViewData& other) const {
  return x1_.rows() == other.x1_.rows() && x1_.cols() == other.x1_.cols() &&
         x2_.cols() == other.x2_.cols() && x1_ == other.x1_ && x2_ == other.x2_ &&
         sample_ids_ == other.sample_ids_ && names1_ == other.names1_ && names2_ == other.names2_;
}

bool StandardizationRecord::has_constant_columns() const {
  for (bool c : constant)
    if (c) return true;
  return false;
}

Matrix StandardizationRecord::invert(const Matrix& standardized) const {
  Matrix out = standardized;
  for (Index j = 0; j < out.cols(); ++j) out.col(j) = out.col(j).array() * scales[j] + means[j];
  return out;
}

Matrix StandardizationRecord::apply(const Matrix& raw) const {
  if (raw.cols() != means.size()) throw std::invalid_argument("StandardizationRecord::apply: width mismatch");
  Matrix out = raw;
  for (Index j = 0; j < out.cols(); ++j) out.col(j) = (out.col(j).array() - means[j]) / scales[j];
  return out;
}

std::pair<Matrix, Vector> center_columns(const Matrix& x) {
  Vector means = x.colwise().mean().transpose();
  Matrix centered = x.rowwise() - means.transpose();
  return {std::move(centered), std::move(means)};
}

double centering_defect(const Matrix& x) {
  const double scale = std::max(x.cwiseAbs().maxCoeff(), 1e-300);
  return x.colwise().mean().cwiseAbs().maxCoeff() / scale;
}

std::pair<MultiViewData, StandardizationRecord> standardize(const MultiViewData& data, bool scale) {
  const Matrix x = data.concat();
  const Index n = x.rows();
  StandardizationRecord rec;
  rec.scaled = scale;
  rec.means = x.colwise().mean().transpose();
  rec.scales = Vector::Ones(x.cols());
  rec.constant.assign(static_cast<std::size_t>(x.cols()), false);

  Matrix out = x.rowwise() - rec.means.transpose();
  for (Index j = 0; j < x.cols(); ++j) {
    // A column whose spread is at rounding level relative to its magnitude is constant.
    const double magnitude = std::max(std::abs(rec.means[j]), x.col(j).cwiseAbs().maxCoeff());
    const double spread = out.col(j).cwiseAbs().maxCoeff();
    const bool is_constant = spread <= 1e-14 * std::max(magnitude, 1e-300) || spread == 0.0;
    rec.constant[static_cast<std::size_t>(j)] = is_constant;
    if (is_constant) {
      out.col(j).setZero();
      continue;
    }
    if (scale) {
      const double sd = std::sqrt(out.col(j).squaredNorm() / static_cast<double>(n - 1));
      rec.scales[j] = sd;
      out.col(j) /= sd;
    }
  }
  // Second centering pass removes the rounding residue of the first.
  const Vector residue = out.colwise().mean().transpose();
  out.rowwise() -= residue.transpose();
  rec.means += residue.cwiseProduct(rec.scales);

  MultiViewData result(out.leftCols(data.p1()), out.rightCols(data.p2()), data.sample_ids(),
                       data.names1(), data.names2());
  return {std::move(result), std::move(rec)};
}

}  // namespace coca
