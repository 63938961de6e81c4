#include "coca/data.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace coca {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool parse_number(std::string_view s, double& value) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, value);
  return res.ec == std::errc() && res.ptr == end && std::isfinite(value);
}

}  // namespace

CsvTable parse_csv(const std::string& text, CsvOptions options) {
  std::vector<std::string_view> lines;
  {
    std::string_view all(text);
    if (all.size() >= 3 && all.substr(0, 3) == "\xEF\xBB\xBF") all.remove_prefix(3);
    std::size_t start = 0;
    while (start <= all.size()) {
      const std::size_t nl = all.find('\n', start);
      const std::string_view line =
          nl == std::string_view::npos ? all.substr(start) : all.substr(start, nl - start);
      lines.push_back(line);
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  }
  if (lines.empty()) throw CsvError("empty input", 0, 0);

  CsvTable table;
  std::size_t first_body = 0;
  std::size_t width = 0;
  const std::size_t skip = options.has_ids ? 1 : 0;

  if (options.has_header) {
    const auto fields = split_fields(lines[0]);
    if (fields.size() <= skip) throw CsvError("header has no feature columns", 1, 0);
    for (std::size_t j = skip; j < fields.size(); ++j) table.header.emplace_back(fields[j]);
    width = fields.size();
    first_body = 1;
  }
  if (first_body >= lines.size()) throw CsvError("no data rows", 0, 0);

  std::vector<std::vector<double>> rows;
  for (std::size_t r = first_body; r < lines.size(); ++r) {
    const std::size_t file_row = r + 1;
    if (trim(lines[r]).empty()) throw CsvError("blank line inside data at row " + std::to_string(file_row), file_row, 0);
    const auto fields = split_fields(lines[r]);
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw CsvError("ragged row " + std::to_string(file_row) + ": expected " + std::to_string(width) +
                         " fields, found " + std::to_string(fields.size()),
                     file_row, 0);
    }
    if (fields.size() <= skip) throw CsvError("row has no feature columns", file_row, 0);
    if (options.has_ids) table.ids.emplace_back(fields[0]);
    std::vector<double> values;
    values.reserve(fields.size() - skip);
    for (std::size_t j = skip; j < fields.size(); ++j) {
      double v = 0.0;
      if (!parse_number(fields[j], v)) {
        throw CsvError("non-numeric cell at row " + std::to_string(file_row) + ", column " +
                           std::to_string(j + 1) + ": '" + std::string(fields[j]) + "'",
                       file_row, j + 1);
      }
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }

  const auto n = static_cast<Index>(rows.size());
  const auto p = static_cast<Index>(rows.front().size());
  table.values.resize(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) table.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return table;
}

CsvTable read_csv(const std::filesystem::path& path, CsvOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open " + path.string(), 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options);
}

Matrix read_csv_view(const std::filesystem::path& path, bool has_header) {
  return read_csv(path, CsvOptions{has_header, false}).values;
}

std::string format_double(double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::string format_csv(const Matrix& x, const std::vector<std::string>& header,
                       const std::vector<std::string>& ids) {
  std::string out;
  const bool with_ids = !ids.empty();
  if (!header.empty()) {
    if (with_ids) out += "id,";
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j) out += ',';
      out += header[j];
    }
    out += '\n';
  }
  for (Index i = 0; i < x.rows(); ++i) {
    if (with_ids) {
      out += ids[static_cast<std::size_t>(i)];
      out += ',';
    }
    for (Index j = 0; j < x.cols(); ++j) {
      if (j) out += ',';
      out += format_double(x(i, j));
    }
    out += '\n';
  }
  return out;
}

MultiViewData read_views(const std::filesystem::path& view1, const std::filesystem::path& view2,
                         CsvOptions options) {
  CsvTable a = read_csv(view1, options);
  CsvTable b = read_csv(view2, options);
  if (a.values.rows() != b.values.rows()) {
    throw CsvError("views have different row counts: " + std::to_string(a.values.rows()) + " vs " +
                       std::to_string(b.values.rows()),
                   0, 0);
  }
  if (options.has_ids && a.ids != b.ids) throw CsvError("sample ids differ between views", 0, 0);
  return MultiViewData(std::move(a.values), std::move(b.values), std::move(a.ids), std::move(a.header),
                       std::move(b.header));
}

}  // namespace coca
