#pragma once

#include "support.hpp"

#include <cstdint>
#include <string>

namespace coca::cli {

struct InputFlags {
  std::string view1;
  std::string view2;
  bool has_header = false;
  bool has_ids = false;
};

struct SolverFlags {
  double tol = 0.0;   ///< 0 keeps the library defaults
  int max_iter = 0;   ///< 0 keeps the library defaults
  bool no_covariance_scale = false;
  int threads = 1;
};

struct SimulateConfig {
  std::string spec;
  std::string preset = "illustrative";
  Index p_per_view = 30;
  Index dense_dims = 2;
  int distractors = 2;
  Index n = 200;
  std::uint64_t seed = 0;
  std::string label_rule = "none";
  std::string out;
};

struct FitConfig {
  InputFlags in;
  std::string method = "coca";
  double rho = 0.0;
  double lambda = 0.0;
  double ridge = 0.0;
  SolverFlags solver;
  std::string out;
};

struct PathConfig {
  InputFlags in;
  std::string rho_grid = "0";
  std::string lambda_grid = "0";
  bool cold = false;
  SolverFlags solver;
  std::string out;
};

struct CvConfig {
  InputFlags in;
  std::string labels;
  std::string procedure = "kfold";
  std::string rho_grid = "0";
  std::string lambda_grid = "0";
  int folds = 5;
  double speckle_frac = 0.1;
  int impute_passes = 1;
  std::string metric = "auroc";
  std::string rule = "min";
  double shrinkage = 0.1;
  std::string val_view1;
  std::string val_view2;
  std::uint64_t seed = 0;
  SolverFlags solver;
  std::string out;
};

struct EvalConfig {
  std::string model;
  InputFlags in;
  std::string truth;
  std::string out;
};

struct PredictConfig {
  std::string model;
  InputFlags in;
  std::string labels;
  std::string test_view1;
  std::string test_view2;
  std::string test_labels;
  int folds = 5;
  double shrinkage = 0.1;
  std::uint64_t seed = 0;
  std::string out;
};

void run_simulate(const SimulateConfig& c);
void run_fit(const FitConfig& c);
void run_path(const PathConfig& c);
void run_cv(const CvConfig& c);
void run_eval(const EvalConfig& c);
void run_predict(const PredictConfig& c);

}  // namespace coca::cli
