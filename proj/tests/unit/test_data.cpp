#include "oracles.hpp"

#include <coca/data.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace coca;

TEST(MultiViewData, Concat) {
  Matrix a(2, 1), b(2, 1);
  a << 1, 2;
  b << 3, 4;
  const MultiViewData d(a, b);
  Matrix expected(2, 2);
  expected << 1, 3, 2, 4;
  EXPECT_EQ(d.concat(), expected);
  EXPECT_EQ(d.p(), 2);
}

TEST(MultiViewData, RejectsEmptyView) {
  EXPECT_THROW(MultiViewData(Matrix::Ones(3, 0), Matrix::Ones(3, 2)), std::invalid_argument);
  EXPECT_THROW(MultiViewData(Matrix::Ones(3, 1), Matrix::Ones(4, 1)), std::invalid_argument);
  Matrix bad = Matrix::Ones(3, 1);
  bad(1, 0) = std::nan("");
  EXPECT_THROW(MultiViewData(bad, Matrix::Ones(3, 1)), std::invalid_argument);
}

TEST(MultiViewData, SplitConcatRoundTrip) {
  const Matrix x = oracle::gaussian(5, 5, 1);
  const MultiViewData d(x.leftCols(3), x.rightCols(2));
  EXPECT_TRUE(MultiViewData::split(d.concat(), 3) == d);
}

TEST(MultiViewData, RowsCarryIds) {
  const MultiViewData d(Matrix::Identity(3, 3).leftCols(2), Matrix::Ones(3, 1), {"a", "b", "c"});
  const MultiViewData s = d.rows({2, 0});
  EXPECT_EQ(s.sample_ids(), (std::vector<std::string>{"c", "a"}));
  EXPECT_EQ(s.x1()(1, 0), 1.0);
}

TEST(Standardize, TwoPointColumn) {
  Matrix a(2, 1), b(2, 1);
  a << 1, 3;
  b << 0, 1;
  const auto [centered, rec0] = standardize(MultiViewData(a, b), false);
  EXPECT_DOUBLE_EQ(centered.x1()(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(centered.x1()(1, 0), 1.0);
  const auto [scaled, rec] = standardize(MultiViewData(a, b), true);
  EXPECT_NEAR(scaled.x1()(0, 0), -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(scaled.x1()(1, 0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(rec.scales[0], std::sqrt(2.0), 1e-15);
}

TEST(Standardize, ConstantColumnFlagged) {
  Matrix a(3, 1), b(3, 1);
  a << 5, 5, 5;
  b << 1, 2, 3;
  const auto [s, rec] = standardize(MultiViewData(a, b), true);
  EXPECT_EQ(s.x1(), Matrix::Zero(3, 1));
  EXPECT_EQ(rec.scales[0], 1.0);
  EXPECT_TRUE(rec.constant[0]);
  EXPECT_TRUE(rec.has_constant_columns());
}

TEST(Standardize, MomentsAndInverse) {
  const Matrix x = 3.0 * oracle::gaussian(10, 4, 2).array() + 7.0;
  const MultiViewData d(x.leftCols(2), x.rightCols(2));
  const auto [s, rec] = standardize(d, true);
  const Matrix z = s.concat();
  for (Index j = 0; j < 4; ++j) {
    const double mean = z.col(j).mean();
    const double sd = std::sqrt((z.col(j).array() - mean).square().sum() / 9.0);
    EXPECT_LT(std::abs(mean), 1e-12);
    EXPECT_NEAR(sd, 1.0, 1e-12);
  }
  EXPECT_LT((rec.invert(z) - x).norm(), 1e-12 * x.norm());
  EXPECT_LT((rec.apply(x) - z).norm(), 1e-12);
}

TEST(Centering, DefectZeroAfterCentering) {
  const Matrix x = oracle::gaussian(20, 3, 4).array() + 2.0;
  EXPECT_GT(centering_defect(x), 0.1);
  const auto [c, means] = center_columns(x);
  EXPECT_LT(centering_defect(c), 1e-14);
  EXPECT_LT((c.rowwise() + means.transpose() - x).norm(), 1e-12);
}

TEST(Csv, NoHeader) {
  const CsvTable t = parse_csv("1,2\n3,4\n");
  Matrix e(2, 2);
  e << 1, 2, 3, 4;
  EXPECT_EQ(t.values, e);
}

TEST(Csv, Header) {
  const CsvTable t = parse_csv("a,b\n1,2", {.has_header = true});
  EXPECT_EQ(t.values.rows(), 1);
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
}

TEST(Csv, RaggedRowReportsRow) {
  try {
    parse_csv("1,2\n3");
    FAIL() << "expected CsvError";
  } catch (const CsvError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
}

TEST(Csv, NonNumericReportsCell) {
  try {
    parse_csv("1,2\n3,x\n");
    FAIL() << "expected CsvError";
  } catch (const CsvError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.col(), 2u);
  }
}

TEST(Csv, IdsAndCrlf) {
  const CsvTable t = parse_csv("id,f1\r\ns1,1.5\r\ns2,-2e3\r\n", {.has_header = true, .has_ids = true});
  EXPECT_EQ(t.ids, (std::vector<std::string>{"s1", "s2"}));
  EXPECT_EQ(t.header, (std::vector<std::string>{"f1"}));
  EXPECT_EQ(t.values(1, 0), -2000.0);
}

TEST(Csv, FormatRoundTripIsExact) {
  const Matrix x = oracle::gaussian(7, 3, 9) * 1e-3;
  const CsvTable t = parse_csv(format_csv(x));
  EXPECT_EQ(t.values, x);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Csv, ReadViewsChecksRows) {
  const auto dir = std::filesystem::temp_directory_path() / "coca_csv_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a.csv") << "1,2\n3,4\n";
  std::ofstream(dir / "b.csv") << "5\n6\n";
  std::ofstream(dir / "c.csv") << "5\n";
  const MultiViewData d = read_views(dir / "a.csv", dir / "b.csv");
  EXPECT_EQ(d.p1(), 2);
  EXPECT_EQ(d.p2(), 1);
  EXPECT_ANY_THROW(read_views(dir / "a.csv", dir / "c.csv"));
  EXPECT_ANY_THROW(read_csv(dir / "missing.csv"));
  std::filesystem::remove_all(dir);
}
