#include "commands.hpp"

#include <coca/baselines.hpp>
#include <coca/data.hpp>
#include <coca/lda.hpp>
#include <coca/metrics.hpp>
#include <coca/model_selection.hpp>
#include <coca/serialize.hpp>
#include <coca/simulate.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#ifndef COCA_VERSION
#define COCA_VERSION "unknown"
#endif

namespace coca::cli {

namespace {

using Clock = std::chrono::steady_clock;

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  Clock::time_point start_ = Clock::now();
};

Json provenance(const char* command, Json config, const std::vector<std::uint64_t>& seeds, const Timer& timer) {
  Json p;
  p["tool"] = "coca";
  p["version"] = COCA_VERSION;
  p["schema_version"] = kSchemaVersion;
  p["command"] = command;
  p["config"] = std::move(config);
  p["seeds"] = seeds;
  p["wall_clock_seconds"] = timer.seconds();
  return p;
}

Json echo(const InputFlags& in) {
  return {{"view1", in.view1}, {"view2", in.view2}, {"has_header", in.has_header}, {"ids", in.has_ids}};
}

Json echo(const SolverFlags& s) {
  return {{"tol", s.tol}, {"max_iter", s.max_iter}, {"covariance_scale", !s.no_covariance_scale}, {"threads", s.threads}};
}

MultiViewData load_views(const InputFlags& in) {
  if (in.view1.empty() || in.view2.empty()) throw CliError(ExitCode::Usage, "--view1 and --view2 are required");
  try {
    return read_views(in.view1, in.view2, {in.has_header, in.has_ids});
  } catch (const CsvError& e) {
    throw CliError(ExitCode::Data, e.what());
  } catch (const std::invalid_argument& e) {
    throw CliError(ExitCode::Data, e.what());
  }
}

SolverConfig solver_config(const SolverFlags& f) {
  if (f.tol < 0.0) throw CliError(ExitCode::Usage, "--tol must be positive");
  if (f.max_iter < 0) throw CliError(ExitCode::Usage, "--max-iter must be positive");
  if (f.threads < 1) throw CliError(ExitCode::Usage, "--threads must be >= 1");
  SolverConfig s;
  if (f.tol > 0.0) {
    s.dense.tol = f.tol;
    s.sparse.tol = f.tol;
  }
  if (f.max_iter > 0) {
    s.dense.max_iter = f.max_iter;
    s.sparse.max_iter = f.max_iter;
  }
  s.covariance_scale = !f.no_covariance_scale;
  s.threads = f.threads;
  return s;
}

HyperGrid make_grid(const std::string& rho, const std::string& lambda) {
  try {
    return HyperGrid(parse_grid(rho), parse_grid(lambda));
  } catch (const std::invalid_argument& e) {
    throw CliError(ExitCode::Usage, e.what());
  }
}

void check_penalties(double rho, double lambda) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw CliError(ExitCode::Usage, "--rho must be finite and >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw CliError(ExitCode::Usage, "--lambda must be finite and >= 0");
}

// Completes a model whose loading came from a baseline rather than a solver.
CocaModel baseline_model(const Matrix& x, Index p1, const Vector& v, double rho) {
  CocaModel m;
  m.rho = rho;
  m.p1 = p1;
  m.p2 = x.cols() - p1;
  m.v = v;
  m.d = v.norm();
  m.direction = v / m.d;
  const Vector xv = x * v;
  m.eigenvalue = xv.norm();
  m.u = xv / xv.norm();
  m.scores1 = x.leftCols(p1) * v.head(p1);
  m.scores2 = x.rightCols(m.p2) * v.tail(m.p2);
  m.objective = std::isfinite(rho) ? dense_objective(x, p1, m.u, v, rho) : std::numeric_limits<double>::quiet_NaN();
  m.status = FitStatus::Converged;
  m.convention = ObjectiveConvention::Halved;
  return m;
}

void require_converged(const CocaModel& m, const std::string& what) {
  if (m.converged()) return;
  std::ostringstream s;
  s << what << " did not converge (status " << to_string(m.status) << " after " << m.iterations
    << " iterations, residual " << m.residual << "); raise --max-iter or loosen --tol";
  throw CliError(ExitCode::Convergence, s.str());
}

Json diagnostics(const Matrix& x, Index p1, const CocaModel& m) {
  Json j;
  const PathDiagnostics d = diagnose(x, p1, m);
  const Agreement a = agreement_diagnostics(MultiViewData::split(x, p1), m);
  j["agreement_gap"] = d.agreement_gap;
  j["score_correlation"] = a.correlation;
  j["variance"] = d.variance;
  j["sparsity"] = d.sparsity;
  j["reconstruction_error"] = m.u.size() == x.rows() ? reconstruction_error(x, m) : x.squaredNorm();
  return j;
}

Json model_document(const std::string& method, const Prepared& prep, Index p1, const CocaModel& m, Json prov) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "model";
  j["method"] = method;
  j["centering"] = {{"means", to_json(prep.means)}, {"scale", prep.scale}};
  j["diagnostics"] = diagnostics(prep.x, p1, m);
  j["model"] = to_json(m);
  j["provenance"] = std::move(prov);
  return j;
}

struct LoadedModel {
  std::string method;
  Vector means;
  double scale = 1.0;
  CocaModel model;
};

LoadedModel load_model(const std::string& path) {
  if (path.empty()) throw CliError(ExitCode::Usage, "--model is required");
  const Json j = read_json(path);
  try {
    if (j.value("kind", "") != "model") throw std::invalid_argument("not a model document");
    if (j.at("schema_version").get<int>() != kSchemaVersion) throw std::invalid_argument("unsupported schema_version");
    LoadedModel m;
    m.method = j.at("method").get<std::string>();
    m.means = vector_from_json(j.at("centering").at("means"));
    m.scale = j.at("centering").at("scale").get<double>();
    m.model = model_from_json(j.at("model"));
    if (m.means.size() != m.model.v.size()) throw std::invalid_argument("centering does not match the loading width");
    return m;
  } catch (const std::exception& e) {
    throw CliError(ExitCode::Data, path + ": " + e.what());
  }
}

Matrix to_model_frame(const LoadedModel& m, const MultiViewData& d) {
  if (d.p1() != m.model.p1 || d.p2() != m.model.p2) {
    throw CliError(ExitCode::Data, "view widths " + std::to_string(d.p1()) + "+" + std::to_string(d.p2()) +
                                       " do not match the model's " + std::to_string(m.model.p1) + "+" +
                                       std::to_string(m.model.p2));
  }
  return (d.concat().rowwise() - m.means.transpose()) * m.scale;
}

std::vector<int> load_labels(const std::string& path, const InputFlags& in, Index n) {
  std::vector<int> y;
  try {
    y = read_labels(path, in.has_header, in.has_ids);
  } catch (const CsvError& e) {
    throw CliError(ExitCode::Data, e.what());
  }
  if (static_cast<Index>(y.size()) != n) {
    throw CliError(ExitCode::Data, "labels have " + std::to_string(y.size()) + " rows, views have " + std::to_string(n));
  }
  return y;
}

std::string csv_number(double x) { return std::isfinite(x) ? format_double(x) : ""; }

}  // namespace

void run_simulate(const SimulateConfig& c) {
  const Timer timer;
  if (c.n < 2) throw CliError(ExitCode::Usage, "--n must be at least 2");
  if (c.label_rule != "none" && c.label_rule != "sign") throw CliError(ExitCode::Usage, "--label-rule must be none or sign");
  FactorModelSpec spec;
  try {
    if (!c.spec.empty()) {
      spec = spec_from_json(read_json(c.spec));
    } else if (c.preset == "illustrative") {
      spec = illustrative_spec();
    } else if (c.preset == "sparse") {
      spec = sparse_spec(c.p_per_view, c.dense_dims, c.distractors);
    } else {
      throw CliError(ExitCode::Usage, "--preset must be illustrative or sparse");
    }
  } catch (const std::invalid_argument& e) {
    throw CliError(ExitCode::Data, std::string("invalid spec: ") + e.what());
  }
  const Draw d = draw_with_latent(spec, c.n, c.seed);

  const Json config = {{"spec", c.spec},         {"preset", c.preset}, {"p_per_view", c.p_per_view},
                       {"dense_dims", c.dense_dims}, {"distractors", c.distractors}, {"n", c.n},
                       {"seed", c.seed},         {"label_rule", c.label_rule}, {"out", c.out}};
  OutputStage stage(c.out);
  stage.write("view1.csv", format_csv(d.data.x1()));
  stage.write("view2.csv", format_csv(d.data.x2()));
  if (c.label_rule == "sign") {
    std::vector<int> y;
    for (Index i = 0; i < d.z.size(); ++i) y.push_back(d.z[i] > 0.0 ? 1 : 0);
    stage.write("labels.csv", format_labels(y));
  }
  Json truth;
  truth["schema_version"] = kSchemaVersion;
  truth["kind"] = "truth";
  truth["beta"] = to_json(spec.beta());
  truth["spec"] = to_json(spec);
  truth["n"] = c.n;
  truth["seed"] = c.seed;
  truth["provenance"] = provenance("simulate", config, {c.seed}, timer);
  stage.write_json("truth.json", truth);
  stage.commit();
}

void run_fit(const FitConfig& c) {
  const Timer timer;
  check_penalties(c.rho, c.lambda);
  const SolverConfig cfg = solver_config(c.solver);
  const MultiViewData data = load_views(c.in);
  const Index p1 = data.p1();
  const Prepared prep = prepare(data.concat(), cfg.covariance_scale);

  CocaModel m;
  if (c.method == "coca") {
    m = fit_cell(prep.x, p1, c.rho, c.lambda, cfg);
    require_converged(m, "fit");
  } else if (c.method == "pca") {
    const PcaResult r = pca_leading(prep.x);
    m = baseline_model(prep.x, p1, r.direction * r.singular_value, 0.0);
  } else if (c.method == "cca") {
    CcaSolution r;
    try {
      r = cca_leading(prep.x.leftCols(p1), prep.x.rightCols(data.p2()), c.ridge);
    } catch (const SingularMatrixError& e) {
      throw CliError(ExitCode::Data, std::string("cca: ") + e.what() + "; pass --ridge > 0");
    }
    Vector v(prep.x.cols());
    v << r.w1, r.w2;
    m = baseline_model(prep.x, p1, v, std::numeric_limits<double>::infinity());
  } else {
    throw CliError(ExitCode::Usage, "--method must be coca, pca or cca");
  }

  Json config = {{"input", echo(c.in)}, {"method", c.method}, {"rho", c.rho}, {"lambda", c.lambda},
                 {"ridge", c.ridge},    {"solver", echo(c.solver)}, {"out", c.out}};
  OutputStage stage(c.out);
  stage.write_json("model.json", model_document(c.method, prep, p1, m, provenance("fit", config, {}, timer)));
  stage.commit();
}

void run_path(const PathConfig& c) {
  const Timer timer;
  const SolverConfig cfg = solver_config(c.solver);
  const HyperGrid grid = make_grid(c.rho_grid, c.lambda_grid);
  const MultiViewData data = load_views(c.in);
  const Index p1 = data.p1();
  const Prepared prep = prepare(data.concat(), cfg.covariance_scale);
  PathOptions opts;
  opts.dense = cfg.dense;
  opts.sparse = cfg.sparse;
  opts.warm_start = !c.cold;
  const SolutionPath path = solution_path(MultiViewData::split(prep.x, p1), grid.rho_values(), grid.lambda_values(), opts);

  std::ostringstream csv;
  csv << "rho,lambda,status,iterations,objective,objective_convention,agreement_gap,score_correlation,variance,"
         "sparsity,reconstruction_error";
  for (Index j = 0; j < prep.x.cols(); ++j) csv << ",v" << (j + 1);
  csv << "\n";
  int failed = 0;
  for (const PathCell& cell : path.cells) {
    csv << format_double(cell.rho) << "," << format_double(cell.lambda) << ",";
    const bool usable = !cell.failed && cell.model.v.size() == prep.x.cols();
    if (!usable) {
      ++failed;
      csv << (cell.model.v.size() ? to_string(cell.model.status) : "error") << ",,,,,,,,";
      for (Index j = 0; j < prep.x.cols(); ++j) csv << ",";
      csv << "\n";
      continue;
    }
    const CocaModel& m = cell.model;
    const Json diag = diagnostics(prep.x, p1, m);
    csv << to_string(m.status) << "," << m.iterations << "," << csv_number(m.objective) << ","
        << to_string(m.convention) << "," << csv_number(diag["agreement_gap"].get<double>()) << ","
        << csv_number(diag["score_correlation"].get<double>()) << "," << csv_number(diag["variance"].get<double>())
        << "," << m.nonzeros() << "," << csv_number(diag["reconstruction_error"].get<double>());
    for (Index j = 0; j < m.v.size(); ++j) csv << "," << format_double(m.v[j]);
    csv << "\n";
  }

  Json config = {{"input", echo(c.in)}, {"rho_grid", c.rho_grid}, {"lambda_grid", c.lambda_grid},
                 {"warm_start", !c.cold}, {"solver", echo(c.solver)}, {"out", c.out}};
  Json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["kind"] = "path";
  meta["cells"] = path.cells.size();
  meta["failed_cells"] = failed;
  meta["centering"] = {{"means", to_json(prep.means)}, {"scale", prep.scale}};
  meta["provenance"] = provenance("path", config, {}, timer);
  OutputStage stage(c.out);
  stage.write("path.csv", csv.str());
  stage.write_json("path.json", meta);
  stage.commit();
}

void run_cv(const CvConfig& c) {
  const Timer timer;
  const SolverConfig cfg = solver_config(c.solver);
  const HyperGrid grid = make_grid(c.rho_grid, c.lambda_grid);
  SelectionRule rule = SelectionRule::Minimum;
  if (c.rule == "1se") {
    rule = SelectionRule::OneStandardError;
  } else if (c.rule != "min") {
    throw CliError(ExitCode::Usage, "--rule must be min or 1se");
  }
  const MultiViewData data = load_views(c.in);

  CvReport report;
  try {
    if (c.procedure == "kfold") {
      report = kfold_unsupervised(data, grid, c.folds, cfg, c.seed, rule);
    } else if (c.procedure == "speckled") {
      report = speckled_cv(data, grid, c.speckle_frac, cfg, c.seed, rule, c.impute_passes);
    } else if (c.procedure == "supervised") {
      if (c.labels.empty()) throw CliError(ExitCode::Usage, "supervised CV needs --labels");
      SupervisedMetric metric;
      try {
        metric = parse_metric(c.metric);
      } catch (const std::invalid_argument& e) {
        throw CliError(ExitCode::Usage, e.what());
      }
      const std::vector<int> y = load_labels(c.labels, c.in, data.n());
      report = kfold_supervised(data, y, grid, c.folds, metric, cfg, c.seed, rule, c.shrinkage);
    } else if (c.procedure == "holdout") {
      const MultiViewData val = load_views({c.val_view1, c.val_view2, c.in.has_header, c.in.has_ids});
      report = holdout_validation(data, val, grid, cfg, rule);
    } else {
      throw CliError(ExitCode::Usage, "--procedure must be kfold, speckled, supervised or holdout");
    }
  } catch (const StratificationError& e) {
    throw CliError(ExitCode::Data, e.what());
  } catch (const std::invalid_argument& e) {
    throw CliError(ExitCode::Usage, e.what());
  } catch (const std::runtime_error& e) {
    // select_cell reports "no eligible cell" this way.
    if (dynamic_cast<const CliError*>(&e) != nullptr) throw;
    throw CliError(ExitCode::Convergence, e.what());
  }

  const Index p1 = data.p1();
  const Prepared prep = prepare(data.concat(), cfg.covariance_scale);
  const CocaModel m = fit_cell(prep.x, p1, report.selected_rho, report.selected_lambda, cfg);
  require_converged(m, "refit at the selected cell");

  Json config = {{"input", echo(c.in)},  {"labels", c.labels},        {"procedure", c.procedure},
                 {"rho_grid", c.rho_grid}, {"lambda_grid", c.lambda_grid}, {"folds", c.folds},
                 {"speckle_frac", c.speckle_frac}, {"impute_passes", c.impute_passes}, {"metric", c.metric},
                 {"rule", c.rule},       {"shrinkage", c.shrinkage},   {"val_view1", c.val_view1},
                 {"val_view2", c.val_view2}, {"seed", c.seed},         {"solver", echo(c.solver)},
                 {"out", c.out}};
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "cv_report";
  doc["report"] = to_json(report);
  doc["provenance"] = provenance("cv", config, {c.seed}, timer);
  OutputStage stage(c.out);
  stage.write_json("cv_report.json", doc);
  stage.write_json("model.json", model_document("coca", prep, p1, m, provenance("cv", config, {c.seed}, timer)));
  stage.commit();
}

void run_eval(const EvalConfig& c) {
  const Timer timer;
  const LoadedModel lm = load_model(c.model);
  const MultiViewData test = load_views(c.in);
  // Held-out metrics are reported in the data's own units: centered, not rescaled.
  LoadedModel unscaled = lm;
  unscaled.scale = 1.0;
  const Matrix x = to_model_frame(unscaled, test);
  const MultiViewData centered = MultiViewData::split(x, test.p1());
  const double n = static_cast<double>(x.rows());

  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "metrics";
  doc["n_test"] = x.rows();
  doc["method"] = lm.method;
  doc["reconstruction_error"] = heldout_reconstruction_error(x, lm.model) / n;
  if (!lm.model.all_zero() && lm.model.v.norm() > 0.0) {
    const Agreement a = agreement_diagnostics(centered, lm.model);
    doc["agreement_gap"] = a.gap;
    doc["score_correlation"] = a.correlation;
  } else {
    doc["agreement_gap"] = nullptr;
    doc["score_correlation"] = nullptr;
  }
  if (!c.truth.empty()) {
    const Json t = read_json(c.truth);
    Vector beta;
    try {
      beta = vector_from_json(t.at("beta"));
    } catch (const std::exception& e) {
      throw CliError(ExitCode::Data, c.truth + ": " + e.what());
    }
    if (beta.size() != x.cols()) throw CliError(ExitCode::Data, c.truth + ": beta width does not match the model");
    const EvalReport r = evaluate(centered, lm.model, beta);
    doc["estimation_error"] = r.estimation_error;
    doc["excess_reconstruction_error"] = r.excess_reconstruction_error;
  }
  Json config = {{"model", c.model}, {"input", echo(c.in)}, {"truth", c.truth}, {"out", c.out}};
  doc["provenance"] = provenance("eval", config, {}, timer);
  OutputStage stage(c.out);
  stage.write_json("metrics.json", doc);
  stage.commit();
}

void run_predict(const PredictConfig& c) {
  const Timer timer;
  if (c.labels.empty()) throw CliError(ExitCode::Usage, "--labels is required");
  const LoadedModel lm = load_model(c.model);
  const MultiViewData train = load_views(c.in);
  const std::vector<int> y = load_labels(c.labels, c.in, train.n());
  const Matrix s_train = view_scores(to_model_frame(lm, train), train.p1(), lm.model);

  const bool split_mode = !c.test_view1.empty() || !c.test_view2.empty();
  Matrix scores;
  std::vector<int> truth;
  Matrix posterior;
  Matrix disc;
  LdaModel fitted;
  std::string mode;
  try {
    if (split_mode) {
      mode = "train_test";
      const InputFlags tin{c.test_view1, c.test_view2, c.in.has_header, c.in.has_ids};
      const MultiViewData test = load_views(tin);
      scores = view_scores(to_model_frame(lm, test), test.p1(), lm.model);
      if (!c.test_labels.empty()) truth = load_labels(c.test_labels, c.in, test.n());
      fitted = lda_fit(s_train, y, c.shrinkage);
      posterior = lda_predict(fitted, scores);
      disc = lda_discriminants(fitted, scores);
    } else {
      // Out-of-fold LDA on the training scores.
      mode = "cross_fitted";
      scores = s_train;
      truth = y;
      fitted = lda_fit(s_train, y, c.shrinkage);
      const std::vector<int> folds = make_stratified_folds(y, c.folds, c.seed);
      posterior.resize(scores.rows(), static_cast<Index>(fitted.classes.size()));
      disc.resize(scores.rows(), static_cast<Index>(fitted.classes.size()));
      for (int f = 0; f < c.folds; ++f) {
        std::vector<Index> tr, te;
        for (std::size_t i = 0; i < y.size(); ++i) (folds[i] == f ? te : tr).push_back(static_cast<Index>(i));
        Matrix st(static_cast<Index>(tr.size()), 2), se(static_cast<Index>(te.size()), 2);
        std::vector<int> yt;
        for (std::size_t k = 0; k < tr.size(); ++k) {
          st.row(static_cast<Index>(k)) = scores.row(tr[k]);
          yt.push_back(y[static_cast<std::size_t>(tr[k])]);
        }
        for (std::size_t k = 0; k < te.size(); ++k) se.row(static_cast<Index>(k)) = scores.row(te[k]);
        const LdaModel fold_model = lda_fit(st, yt, c.shrinkage);
        if (fold_model.classes != fitted.classes) throw StratificationError("a training fold lost a class");
        const Matrix p = lda_predict(fold_model, se);
        const Matrix dd = lda_discriminants(fold_model, se);
        for (std::size_t k = 0; k < te.size(); ++k) {
          posterior.row(te[k]) = p.row(static_cast<Index>(k));
          disc.row(te[k]) = dd.row(static_cast<Index>(k));
        }
      }
    }
  } catch (const StratificationError& e) {
    throw CliError(ExitCode::Data, e.what());
  } catch (const std::invalid_argument& e) {
    throw CliError(ExitCode::Data, e.what());
  } catch (const SingularMatrixError& e) {
    throw CliError(ExitCode::Data, std::string("lda: ") + e.what());
  }

  const std::vector<int>& classes = fitted.classes;
  const bool binary = classes.size() == 2;
  std::vector<int> predicted;
  for (Index i = 0; i < posterior.rows(); ++i) {
    Index best = 0;
    posterior.row(i).maxCoeff(&best);
    predicted.push_back(classes[static_cast<std::size_t>(best)]);
  }
  std::ostringstream csv;
  csv << "row,score1,score2";
  if (!truth.empty()) csv << ",label";
  csv << ",predicted";
  if (binary) csv << ",decision";
  for (int k : classes) csv << ",p_" << k;
  csv << "\n";
  for (Index i = 0; i < scores.rows(); ++i) {
    csv << (i + 1) << "," << format_double(scores(i, 0)) << "," << format_double(scores(i, 1));
    if (!truth.empty()) csv << "," << truth[static_cast<std::size_t>(i)];
    csv << "," << predicted[static_cast<std::size_t>(i)];
    if (binary) csv << "," << format_double(disc(i, 1) - disc(i, 0));
    for (Index k = 0; k < posterior.cols(); ++k) csv << "," << format_double(posterior(i, k));
    csv << "\n";
  }

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["kind"] = "predictions";
  report["mode"] = mode;
  report["n"] = scores.rows();
  report["classes"] = classes;
  report["lda_direction"] = binary ? to_json(lda_direction(fitted)) : Json(nullptr);
  if (!truth.empty()) {
    report["misclassification"] = misclassification(predicted, truth);
    if (binary) {
      Vector decision = disc.col(1) - disc.col(0);
      report["auroc"] = auroc(decision, truth);
      report["auprc"] = auprc(decision, truth);
    }
  }
  Json config = {{"model", c.model},          {"input", echo(c.in)},       {"labels", c.labels},
                 {"test_view1", c.test_view1}, {"test_view2", c.test_view2}, {"test_labels", c.test_labels},
                 {"folds", c.folds},          {"shrinkage", c.shrinkage},  {"seed", c.seed},
                 {"out", c.out}};
  report["provenance"] = provenance("predict", config, {c.seed}, timer);
  OutputStage stage(c.out);
  stage.write("predictions.csv", csv.str());
  stage.write_json("predict_report.json", report);
  stage.commit();
}

}  // namespace coca::cli
