#include "support.hpp"

#include <coca/data.hpp>

#include <unistd.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace coca::cli {

namespace fs = std::filesystem;

const char* code_name(ExitCode code) {
  switch (code) {
    case ExitCode::Ok: return "OK";
    case ExitCode::Usage: return "USAGE";
    case ExitCode::Data: return "DATA";
    case ExitCode::Convergence: return "CONVERGENCE";
    case ExitCode::Internal: return "INTERNAL";
  }
  return "INTERNAL";
}

namespace {

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(x)) throw CliError(ExitCode::Usage, "grid: bad number '" + s + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  if (text.rfind("log:", 0) == 0) {
    const auto parts = split(text.substr(4), ':');
    if (parts.size() != 3) throw CliError(ExitCode::Usage, "grid: expected log:start:stop:count");
    const double a = parse_number(parts[0]);
    const double b = parse_number(parts[1]);
    const double count = parse_number(parts[2]);
    if (!(a > 0.0) || !(b > a)) throw CliError(ExitCode::Usage, "grid: log grid needs 0 < start < stop");
    if (count < 2 || count != std::floor(count)) throw CliError(ExitCode::Usage, "grid: log grid count must be an integer >= 2");
    const int k = static_cast<int>(count);
    std::vector<double> g;
    for (int i = 0; i < k; ++i) {
      const double t = static_cast<double>(i) / (k - 1);
      g.push_back(std::pow(10.0, std::log10(a) + t * (std::log10(b) - std::log10(a))));
    }
    g.front() = a;
    g.back() = b;
    return g;
  }
  std::vector<double> g;
  for (const auto& item : split(text, ',')) g.push_back(parse_number(item));
  if (g.empty()) throw CliError(ExitCode::Usage, "grid: empty");
  return g;
}

OutputStage::OutputStage(fs::path out) : out_(std::move(out)) {
  if (out_.empty()) throw CliError(ExitCode::Usage, "--out is required");
  const fs::path abs = fs::absolute(out_).lexically_normal();
  const fs::path parent = abs.has_filename() ? abs.parent_path() : abs.parent_path().parent_path();
  const std::string leaf = abs.has_filename() ? abs.filename().string() : abs.parent_path().filename().string();
  out_ = parent / leaf;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw CliError(ExitCode::Data, "cannot create " + parent.string() + ": " + ec.message());
  temp_ = parent / ("." + leaf + ".partial-" + std::to_string(::getpid()));
  fs::remove_all(temp_, ec);
  fs::create_directory(temp_, ec);
  if (ec) throw CliError(ExitCode::Data, "cannot create staging directory " + temp_.string() + ": " + ec.message());
}

OutputStage::~OutputStage() {
  std::error_code ec;
  fs::remove_all(temp_, ec);
}

void OutputStage::write(const std::string& name, const std::string& content) {
  std::ofstream f(temp_ / name, std::ios::binary);
  f << content;
  f.close();
  if (!f) throw CliError(ExitCode::Data, "cannot write " + (temp_ / name).string());
  names_.push_back(name);
}

void OutputStage::write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

void OutputStage::commit() {
  std::error_code ec;
  fs::create_directories(out_, ec);
  if (ec) throw CliError(ExitCode::Data, "cannot create " + out_.string() + ": " + ec.message());
  for (const auto& name : names_) {
    fs::rename(temp_ / name, out_ / name, ec);
    if (ec) throw CliError(ExitCode::Data, "cannot move " + name + " into " + out_.string() + ": " + ec.message());
  }
  committed_ = true;
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CliError(ExitCode::Data, "cannot open " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Json read_json(const fs::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw CliError(ExitCode::Data, path.string() + ": invalid JSON: " + e.what());
  }
}

std::vector<int> read_labels(const fs::path& path, bool has_header, bool has_ids) {
  const CsvTable t = read_csv(path, {has_header, has_ids});
  if (t.values.cols() != 1) throw CliError(ExitCode::Data, path.string() + ": labels need exactly one column");
  std::vector<int> y;
  for (Index i = 0; i < t.values.rows(); ++i) {
    const double v = t.values(i, 0);
    if (v != std::round(v) || std::abs(v) > 1e9) {
      throw CliError(ExitCode::Data, path.string() + ": row " + std::to_string(i + 1) + " is not an integer label");
    }
    y.push_back(static_cast<int>(v));
  }
  return y;
}

std::string format_labels(const std::vector<int>& labels) {
  std::string s;
  for (int y : labels) s += std::to_string(y) + "\n";
  return s;
}

}  // namespace coca::cli
