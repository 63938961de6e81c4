#include "coca/serialize.hpp"

#include <cmath>

namespace coca {

namespace {

// NaN and infinities have no JSON representation; they become null.
Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

double read_number(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw std::invalid_argument("json: expected a number");
  return j.get<double>();
}

Json numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

}  // namespace

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    a.push_back(std::move(row));
  }
  return a;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("json: expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = read_number(j[i]);
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("json: expected an array");
  if (j.empty()) return Matrix(0, 0);
  if (!j[0].is_array()) return vector_from_json(j);
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw std::invalid_argument("json: ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(i), static_cast<Index>(c)) = read_number(j[i][c]);
  }
  return m;
}

Json to_json(const FactorModelSpec& s) {
  Json j;
  j["beta1"] = to_json(s.beta1);
  j["beta2"] = to_json(s.beta2);
  j["W1"] = to_json(s.W1);
  j["W2"] = to_json(s.W2);
  j["B1"] = to_json(s.B1);
  j["B2"] = to_json(s.B2);
  j["Omega1"] = to_json(s.Omega1);
  j["Omega2"] = to_json(s.Omega2);
  return j;
}

FactorModelSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("spec: expected a JSON object");
  FactorModelSpec s;
  if (!j.contains("beta1") || !j.contains("beta2")) throw std::invalid_argument("spec: beta1 and beta2 are required");
  s.beta1 = vector_from_json(j.at("beta1"));
  s.beta2 = vector_from_json(j.at("beta2"));
  const auto factor = [&](const char* key, Index rows) {
    if (!j.contains(key)) return Matrix(Matrix::Zero(rows, 0));
    Matrix m = matrix_from_json(j.at(key));
    if (m.size() == 0) return Matrix(Matrix::Zero(rows, 0));
    return m;
  };
  s.W1 = factor("W1", s.p1());
  s.W2 = factor("W2", s.p2());
  s.B1 = factor("B1", s.p1());
  s.B2 = factor("B2", s.p2());
  s.Omega1 = j.contains("Omega1") ? matrix_from_json(j.at("Omega1")) : Matrix(Matrix::Identity(s.p1(), s.p1()));
  s.Omega2 = j.contains("Omega2") ? matrix_from_json(j.at("Omega2")) : Matrix(Matrix::Identity(s.p2(), s.p2()));
  for (Matrix* m : {&s.W1, &s.W2, &s.B1, &s.B2, &s.Omega1, &s.Omega2}) {
    if (!m->allFinite()) throw std::invalid_argument("spec: non-finite entry");
  }
  s.validate();
  return s;
}

FitStatus parse_status(const std::string& s) {
  for (FitStatus st : {FitStatus::Converged, FitStatus::NotConverged, FitStatus::AllZero, FitStatus::Degenerate,
                       FitStatus::NonMonotone}) {
    if (s == to_string(st)) return st;
  }
  throw std::invalid_argument("unknown fit status '" + s + "'");
}

Json to_json(const CocaModel& m) {
  Json j;
  j["rho"] = number(m.rho);
  j["lambda"] = number(m.lambda);
  j["p1"] = m.p1;
  j["p2"] = m.p2;
  j["status"] = to_string(m.status);
  j["converged"] = m.converged();
  j["iterations"] = m.iterations;
  j["residual"] = number(m.residual);
  j["objective"] = number(m.objective);
  j["objective_convention"] = to_string(m.convention);
  j["eigenvalue"] = number(m.eigenvalue);
  j["d"] = number(m.d);
  j["nonzeros"] = m.v.size() > 0 ? m.nonzeros() : 0;
  j["v"] = to_json(m.v);
  j["direction"] = to_json(m.direction);
  j["u"] = to_json(m.u);
  j["scores1"] = to_json(m.scores1);
  j["scores2"] = to_json(m.scores2);
  j["objective_trace"] = numbers(m.objective_trace);
  j["warnings"] = m.warnings;
  return j;
}

CocaModel model_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("model: expected a JSON object");
  CocaModel m;
  m.rho = read_number(j.at("rho"));
  m.lambda = read_number(j.at("lambda"));
  m.p1 = j.at("p1").get<Index>();
  m.p2 = j.at("p2").get<Index>();
  m.v = vector_from_json(j.at("v"));
  if (m.p1 < 1 || m.p2 < 1 || m.v.size() != m.p1 + m.p2) throw std::invalid_argument("model: v does not match p1 + p2");
  m.direction = j.contains("direction") ? vector_from_json(j.at("direction")) : Vector();
  if (m.direction.size() != m.v.size()) {
    const double nv = m.v.norm();
    m.direction = nv > 0.0 ? Vector(m.v / nv) : Vector(Vector::Zero(m.v.size()));
  }
  m.d = j.contains("d") ? read_number(j.at("d")) : m.v.norm();
  if (j.contains("u")) m.u = vector_from_json(j.at("u"));
  if (j.contains("scores1")) m.scores1 = vector_from_json(j.at("scores1"));
  if (j.contains("scores2")) m.scores2 = vector_from_json(j.at("scores2"));
  if (j.contains("eigenvalue")) m.eigenvalue = read_number(j.at("eigenvalue"));
  if (j.contains("objective")) m.objective = read_number(j.at("objective"));
  if (j.contains("status")) m.status = parse_status(j.at("status").get<std::string>());
  if (j.contains("iterations")) m.iterations = j.at("iterations").get<int>();
  if (j.contains("residual")) m.residual = read_number(j.at("residual"));
  if (j.contains("objective_convention")) {
    m.convention = j.at("objective_convention").get<std::string>() == to_string(ObjectiveConvention::Unhalved)
                       ? ObjectiveConvention::Unhalved
                       : ObjectiveConvention::Halved;
  }
  if (!m.v.allFinite()) throw std::invalid_argument("model: non-finite loading");
  return m;
}

Json to_json(const CvReport& r) {
  Json j;
  j["procedure"] = r.procedure;
  j["metric"] = r.metric;
  j["maximize"] = r.maximize;
  j["selection_rule"] = to_string(r.rule);
  j["seed"] = r.seed;
  j["grid"] = {{"rho", numbers(r.rho_values)}, {"lambda", numbers(r.lambda_values)}};
  Json cells = Json::array();
  for (std::size_t c = 0; c < r.mean.size(); ++c) {
    const std::size_t nl = r.lambda_values.size();
    Json cell;
    cell["rho"] = number(r.rho_values[c / nl]);
    cell["lambda"] = number(r.lambda_values[c % nl]);
    cell["mean"] = number(r.mean[c]);
    cell["se"] = number(r.se[c]);
    cell["fail_count"] = r.fail_count[c];
    cell["evaluations"] = r.evaluations[c];
    cell["fold_values"] = numbers(r.fold_values[c]);
    cells.push_back(std::move(cell));
  }
  j["cells"] = std::move(cells);
  if (r.procedure == "speckled") {
    Json mask;
    mask["fraction"] = r.mask.fraction;
    mask["seed"] = r.mask.seed;
    mask["count"] = r.mask.cells.size();
    mask["view1_count"] = r.masked_view1;
    mask["view2_count"] = r.masked_view2;
    Json idx = Json::array();
    for (const auto& [i, c] : r.mask.cells) idx.push_back({i, c});
    mask["cells"] = std::move(idx);
    j["mask"] = std::move(mask);
  } else {
    j["folds"] = r.folds;
    j["fold_assignment"] = r.fold_assignment;
  }
  j["selected"] = {{"index", r.selected},
                   {"rho", number(r.selected_rho)},
                   {"lambda", number(r.selected_lambda)},
                   {"mean", number(r.mean.at(r.selected))},
                   {"se", number(r.se.at(r.selected))}};
  return j;
}

Json to_json(const EvalReport& r) {
  Json j;
  j["estimation_error"] = number(r.estimation_error);
  j["excess_reconstruction_error"] = number(r.excess_reconstruction_error);
  j["reconstruction_error"] = number(r.reconstruction_error);
  j["agreement_gap"] = number(r.agreement_gap);
  j["score_correlation"] = number(r.score_correlation);
  return j;
}

}  // namespace coca
