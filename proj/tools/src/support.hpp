#pragma once

#include <coca/serialize.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace coca::cli {

enum class ExitCode : int { Ok = 0, Usage = 2, Data = 3, Convergence = 4, Internal = 5 };

const char* code_name(ExitCode code);

class CliError : public std::runtime_error {
 public:
  CliError(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// "a,b,c" or "log:start:stop:count" (inclusive, log-spaced).
std::vector<double> parse_grid(const std::string& text);

/// Files are written into a hidden sibling directory and renamed into `out`
/// only on commit(); an uncommitted stage is removed on destruction.
class OutputStage {
 public:
  explicit OutputStage(std::filesystem::path out);
  ~OutputStage();
  OutputStage(const OutputStage&) = delete;
  OutputStage& operator=(const OutputStage&) = delete;

  void write(const std::string& name, const std::string& content);
  void write_json(const std::string& name, const Json& j);
  void commit();

 private:
  std::filesystem::path out_;
  std::filesystem::path temp_;
  std::vector<std::string> names_;
  bool committed_ = false;
};

std::string read_text(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

/// Integer class labels from a one-column CSV.
std::vector<int> read_labels(const std::filesystem::path& path, bool has_header, bool has_ids);
std::string format_labels(const std::vector<int>& labels);

}  // namespace coca::cli
