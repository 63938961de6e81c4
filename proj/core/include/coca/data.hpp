#pragma once

#include "coca/linalg.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coca {

/// Two feature matrices measured on the same samples.
///
/// Invariants (checked on construction): equal row counts n >= 2, p1 >= 1,
/// p2 >= 1, all entries finite, label lists either empty or of matching length.
class MultiViewData {
 public:
  MultiViewData(Matrix x1, Matrix x2, std::vector<std::string> sample_ids = {},
                std::vector<std::string> names1 = {}, std::vector<std::string> names2 = {});

  /// Inverse of concat(): first p1 columns become the first view.
  static MultiViewData split(const Matrix& x, Index p1);

  const Matrix& x1() const noexcept { return x1_; }
  const Matrix& x2() const noexcept { return x2_; }
  Index n() const noexcept { return x1_.rows(); }
  Index p1() const noexcept { return x1_.cols(); }
  Index p2() const noexcept { return x2_.cols(); }
  Index p() const noexcept { return x1_.cols() + x2_.cols(); }

  /// n x (p1 + p2) column-wise concatenation.
  Matrix concat() const;

  /// Rows selected by index, labels carried along.
  MultiViewData rows(const std::vector<Index>& idx) const;

  const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }
  const std::vector<std::string>& names1() const noexcept { return names1_; }
  const std::vector<std::string>& names2() const noexcept { return names2_; }

  bool operator==(const MultiViewData& other) const;

 private:
  Matrix x1_;
  Matrix x2_;
  std::vector<std::string> sample_ids_;
  std::vector<std::string> names1_;
  std::vector<std::string> names2_;
};

/// Per-column location/scale of the concatenated matrix.
struct StandardizationRecord {
  Vector means;
  Vector scales;                   ///< strictly positive; 1 for constant columns
  std::vector<bool> constant;      ///< flagged constant columns
  bool scaled = false;

  bool has_constant_columns() const;
  /// Maps standardized values back to the original units.
  Matrix invert(const Matrix& standardized) const;
  /// Applies the recorded transform to new data with the same width.
  Matrix apply(const Matrix& raw) const;
};

/// Centers every column; when `scale` is set also divides non-constant columns
/// by their sample standard deviation (n-1 divisor).
std::pair<MultiViewData, StandardizationRecord> standardize(const MultiViewData& data, bool scale);

/// Column-centered copy of a matrix together with the removed means.
std::pair<Matrix, Vector> center_columns(const Matrix& x);

/// Largest absolute column mean relative to the matrix scale; 0 means centered.
double centering_defect(const Matrix& x);

// ---------------------------------------------------------------------------
// CSV

/// Parse failure. `row` and `col` are 1-based positions in the file
/// (0 when not applicable).
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& what, std::size_t row, std::size_t col)
      : std::runtime_error(what), row_(row), col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

struct CsvOptions {
  bool has_header = false;
  bool has_ids = false;  ///< first column holds sample identifiers
};

struct CsvTable {
  Matrix values;
  std::vector<std::string> header;  ///< feature names (id column excluded)
  std::vector<std::string> ids;
};

CsvTable parse_csv(const std::string& text, CsvOptions options = {});
CsvTable read_csv(const std::filesystem::path& path, CsvOptions options = {});

/// Convenience wrapper returning only the numeric body.
Matrix read_csv_view(const std::filesystem::path& path, bool has_header);

/// Writes with 17 significant digits so that read(write(x)) == x exactly.
std::string format_csv(const Matrix& x, const std::vector<std::string>& header = {},
                       const std::vector<std::string>& ids = {});

/// Loads two views, checks matching row counts, and carries labels along.
MultiViewData read_views(const std::filesystem::path& view1, const std::filesystem::path& view2,
                         CsvOptions options = {});

/// Shortest round-trip formatting with 17 significant digits.
std::string format_double(double x);

}  // namespace coca
