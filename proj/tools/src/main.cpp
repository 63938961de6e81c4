#include "commands.hpp"

#include <coca/data.hpp>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <algorithm>
#include <iostream>

using namespace coca::cli;

namespace {

void add_inputs(CLI::App* cmd, InputFlags& in) {
  cmd->add_option("--view1", in.view1, "CSV with the first view (rows = samples)");
  cmd->add_option("--view2", in.view2, "CSV with the second view");
  cmd->add_flag("--has-header", in.has_header, "first CSV line holds feature names");
  cmd->add_flag("--ids", in.has_ids, "first CSV column holds sample ids");
}

void add_solver(CLI::App* cmd, SolverFlags& s) {
  cmd->add_option("--tol", s.tol, "solver tolerance (default: library defaults)");
  cmd->add_option("--max-iter", s.max_iter, "solver iteration cap (default: library defaults)");
  cmd->add_flag("--no-covariance-scale", s.no_covariance_scale, "fit on centered X instead of X / sqrt(n)");
  cmd->add_option("--threads", s.threads, "worker threads for grid cells and folds")->capture_default_str();
}

void fail(ExitCode code, const std::string& message) {
  std::string line = message;
  std::replace(line.begin(), line.end(), '\n', ' ');
  std::cerr << "coca: error " << code_name(code) << " (" << static_cast<int>(code) << "): " << line << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative component analysis: simulate, fit, sweep, cross-validate, evaluate, predict"};
  app.require_subcommand(1);
  app.set_version_flag("--version", COCA_VERSION);

  SimulateConfig sim;
  auto* c_sim = app.add_subcommand("simulate", "draw two views from the latent factor model");
  c_sim->add_option("--spec", sim.spec, "factor model JSON (beta1, beta2, W1, W2, B1, B2, Omega1, Omega2)");
  c_sim->add_option("--preset", sim.preset, "illustrative | sparse (when --spec is absent)")->capture_default_str();
  c_sim->add_option("--p-per-view", sim.p_per_view, "sparse preset: features per view")->capture_default_str();
  c_sim->add_option("--dense-dims", sim.dense_dims, "sparse preset: nonzeros of beta per view")->capture_default_str();
  c_sim->add_option("--distractors", sim.distractors, "sparse preset: 0, 1 or 2 distractor factors")->capture_default_str();
  c_sim->add_option("--n", sim.n, "number of samples")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "random seed")->capture_default_str();
  c_sim->add_option("--label-rule", sim.label_rule, "none | sign (label = 1 when the shared factor is positive)")
      ->capture_default_str();
  c_sim->add_option("--out", sim.out, "output directory")->required();

  FitConfig fit;
  auto* c_fit = app.add_subcommand("fit", "fit one component");
  add_inputs(c_fit, fit.in);
  c_fit->add_option("--method", fit.method, "coca | pca | cca")->capture_default_str();
  c_fit->add_option("--rho", fit.rho, "agreement penalty")->capture_default_str();
  c_fit->add_option("--lambda", fit.lambda, "l1 penalty (0 = dense solver)")->capture_default_str();
  c_fit->add_option("--ridge", fit.ridge, "cca: ridge added to each view's Gram matrix")->capture_default_str();
  add_solver(c_fit, fit.solver);
  c_fit->add_option("--out", fit.out, "output directory")->required();

  PathConfig path;
  auto* c_path = app.add_subcommand("path", "fit every (rho, lambda) cell and write path.csv");
  add_inputs(c_path, path.in);
  c_path->add_option("--rho-grid", path.rho_grid, "comma list or log:start:stop:count")->capture_default_str();
  c_path->add_option("--lambda-grid", path.lambda_grid, "comma list or log:start:stop:count")->capture_default_str();
  c_path->add_flag("--cold", path.cold, "disable warm starts along the path");
  add_solver(c_path, path.solver);
  c_path->add_option("--out", path.out, "output directory")->required();

  CvConfig cv;
  auto* c_cv = app.add_subcommand("cv", "select (rho, lambda) and refit on all rows");
  add_inputs(c_cv, cv.in);
  c_cv->add_option("--labels", cv.labels, "one-column CSV of integer labels (supervised)");
  c_cv->add_option("--procedure", cv.procedure, "kfold | speckled | supervised | holdout")->capture_default_str();
  c_cv->add_option("--rho-grid", cv.rho_grid, "comma list or log:start:stop:count")->capture_default_str();
  c_cv->add_option("--lambda-grid", cv.lambda_grid, "comma list or log:start:stop:count")->capture_default_str();
  c_cv->add_option("--folds", cv.folds, "number of folds")->capture_default_str();
  c_cv->add_option("--speckle-frac", cv.speckle_frac, "fraction of masked cells")->capture_default_str();
  c_cv->add_option("--impute-passes", cv.impute_passes, "speckled: impute-and-refit passes")->capture_default_str();
  c_cv->add_option("--metric", cv.metric, "supervised: auroc | auprc | misclassification")->capture_default_str();
  c_cv->add_option("--rule", cv.rule, "min | 1se")->capture_default_str();
  c_cv->add_option("--shrinkage", cv.shrinkage, "supervised: LDA covariance shrinkage")->capture_default_str();
  c_cv->add_option("--val-view1", cv.val_view1, "holdout: validation view 1");
  c_cv->add_option("--val-view2", cv.val_view2, "holdout: validation view 2");
  c_cv->add_option("--seed", cv.seed, "fold / mask seed")->capture_default_str();
  add_solver(c_cv, cv.solver);
  c_cv->add_option("--out", cv.out, "output directory")->required();

  EvalConfig ev;
  auto* c_eval = app.add_subcommand("eval", "score a model on held-out views");
  c_eval->add_option("--model", ev.model, "model.json from fit or cv")->required();
  add_inputs(c_eval, ev.in);
  c_eval->add_option("--truth", ev.truth, "truth.json from simulate");
  c_eval->add_option("--out", ev.out, "output directory")->required();

  PredictConfig pr;
  auto* c_pred = app.add_subcommand("predict", "LDA on the two view scores");
  c_pred->add_option("--model", pr.model, "model.json from fit or cv")->required();
  add_inputs(c_pred, pr.in);
  c_pred->add_option("--labels", pr.labels, "training labels")->required();
  c_pred->add_option("--test-view1", pr.test_view1, "score these rows instead of cross-fitting");
  c_pred->add_option("--test-view2", pr.test_view2, "second view of the test rows");
  c_pred->add_option("--test-labels", pr.test_labels, "labels of the test rows, for AUROC / AUPRC");
  c_pred->add_option("--folds", pr.folds, "cross-fitting folds")->capture_default_str();
  c_pred->add_option("--shrinkage", pr.shrinkage, "LDA covariance shrinkage")->capture_default_str();
  c_pred->add_option("--seed", pr.seed, "fold seed")->capture_default_str();
  c_pred->add_option("--out", pr.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail(ExitCode::Usage, e.what());
    return static_cast<int>(ExitCode::Usage);
  }

  try {
    if (*c_sim) run_simulate(sim);
    if (*c_fit) run_fit(fit);
    if (*c_path) run_path(path);
    if (*c_cv) run_cv(cv);
    if (*c_eval) run_eval(ev);
    if (*c_pred) run_predict(pr);
  } catch (const CliError& e) {
    fail(e.code(), e.what());
    return static_cast<int>(e.code());
  } catch (const coca::CsvError& e) {
    fail(ExitCode::Data, e.what());
    return static_cast<int>(ExitCode::Data);
  } catch (const std::exception& e) {
    fail(ExitCode::Internal, e.what());
    return static_cast<int>(ExitCode::Internal);
  }
  return 0;
}
