#include "coca/coca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coca {

const char* to_string(ObjectiveConvention c) {
  switch (c) {
    case ObjectiveConvention::Halved: return "halved";
    case ObjectiveConvention::Unhalved: return "unhalved";
  }
  return "unknown";
}

const char* to_string(FitStatus s) {
  switch (s) {
    case FitStatus::Converged: return "converged";
    case FitStatus::NotConverged: return "not_converged";
    case FitStatus::AllZero: return "all_zero";
    case FitStatus::Degenerate: return "degenerate";
    case FitStatus::NonMonotone: return "non_monotone";
  }
  return "unknown";
}

Index CocaModel::nonzeros() const {
  Index k = 0;
  for (Index j = 0; j < v.size(); ++j)
    if (v[j] != 0.0) ++k;
  return k;
}

// ---------------------------------------------------------------------------

CocaOperator::CocaOperator(const Matrix& x, Index p1, double rho, Index dense_cap)
    : x_(x), p1_(p1), rho_(rho) {
  if (p1 < 1 || p1 >= x.cols()) throw std::invalid_argument("CocaOperator: p1 out of range");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw std::invalid_argument("CocaOperator: rho must be finite and >= 0");
  if (x.cols() <= dense_cap) {
    assembled_ = true;
    gram_ = x.transpose() * x;
    Matrix system = gram_;
    system.topRightCorner(p1, x.cols() - p1) *= -1.0;
    system.bottomLeftCorner(x.cols() - p1, p1) *= -1.0;
    system *= rho;
    system.diagonal().array() += 1.0;
    factor_ = CholeskyFactor(system);
  }
}

Vector CocaOperator::flip(const Vector& v) const {
  Vector out = v;
  out.tail(out.size() - p1_) *= -1.0;
  return out;
}

Vector CocaOperator::gram_apply(const Vector& v) const {
  if (assembled_) return gram_ * v;
  return x_.transpose() * (x_ * v);
}

Vector CocaOperator::solve(const Vector& y) const {
  if (assembled_) return factor_.solve(y);
  const auto system = [this](const Vector& z) -> Vector {
    return z + rho_ * flip(x_.transpose() * (x_ * flip(z)));
  };
  CgResult cg = conjugate_gradient(system, y, 1e-13, 20 * static_cast<int>(x_.cols()) + 100);
  return cg.x;
}

Vector CocaOperator::operator()(const Vector& v) const { return solve(gram_apply(v)); }

// ---------------------------------------------------------------------------

double dense_objective(const Matrix& x, Index p1, const Vector& u, const Vector& v, double rho) {
  const double recon = (x - u * v.transpose()).squaredNorm();
  const double gap = (x.leftCols(p1) * v.head(p1) - x.rightCols(x.cols() - p1) * v.tail(x.cols() - p1)).squaredNorm();
  return 0.5 * recon + 0.5 * rho * gap;
}

double sparse_objective(const Matrix& x, Index p1, const Vector& u, const Vector& v, double rho, double lambda) {
  const double recon = (x - u * v.transpose()).squaredNorm();
  const double gap = (x.leftCols(p1) * v.head(p1) - x.rightCols(x.cols() - p1) * v.tail(x.cols() - p1)).squaredNorm();
  return recon + rho * gap + lambda * v.lpNorm<1>();
}

namespace {

void check_inputs(const Matrix& x, Index p1, double rho) {
  if (x.rows() < 1 || x.cols() < 2) throw std::invalid_argument("CoCA: data matrix too small");
  if (p1 < 1 || p1 >= x.cols()) throw std::invalid_argument("CoCA: p1 out of range");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw std::invalid_argument("CoCA: rho must be finite and >= 0");
  if (!x.allFinite()) throw std::invalid_argument("CoCA: non-finite data");
}

void common_warnings(const Matrix& x, double rho, std::vector<std::string>& warnings) {
  if (centering_defect(x) > 1e-8) warnings.emplace_back("data columns are not centered");
  if (rho > 0.0 && x.cols() >= x.rows()) {
    warnings.emplace_back("p >= n: the large-rho limit is not a canonical direction");
  }
}

void fill_scores(const Matrix& x, CocaModel& m) {
  m.scores1 = x.leftCols(m.p1) * m.v.head(m.p1);
  m.scores2 = x.rightCols(m.p2) * m.v.tail(m.p2);
  m.d = m.v.norm();
  m.direction = m.d > 0.0 ? Vector(m.v / m.d) : Vector::Zero(m.v.size());
}

}  // namespace

CocaModel fit_dense(const Matrix& x, Index p1, double rho, const DenseOptions& options) {
  check_inputs(x, p1, rho);
  const Index p = x.cols();

  CocaModel m;
  m.rho = rho;
  m.lambda = 0.0;
  m.p1 = p1;
  m.p2 = p - p1;
  m.convention = ObjectiveConvention::Halved;
  common_warnings(x, rho, m.warnings);

  EigenPair eig;
  try {
    const CocaOperator op(x, p1, rho, options.dense_cap);
    eig = leading_eigenvector([&op](const Vector& v) { return op(v); }, p,
                              IterationControl{options.tol, options.max_iter}, options.seed);
  } catch (const DegenerateInputError& e) {
    m.status = FitStatus::Degenerate;
    m.warnings.emplace_back(e.what());
    m.u = Vector::Zero(x.rows());
    m.v = Vector::Zero(p);
    fill_scores(x, m);
    return m;
  }

  const Vector xw = x * eig.vector;
  const double xw_norm = xw.norm();
  if (!(eig.value > 0.0) || xw_norm == 0.0) {
    m.status = FitStatus::Degenerate;
    m.warnings.emplace_back("leading eigenvalue is not positive");
    m.u = Vector::Zero(x.rows());
    m.v = Vector::Zero(p);
    fill_scores(x, m);
    return m;
  }

  m.eigenvalue = eig.value;
  m.v = eig.vector * (eig.value / xw_norm);  // ||X v|| = eigenvalue
  m.u = xw / xw_norm;
  m.iterations = eig.iterations;
  fill_scores(x, m);
  m.residual = eigen_residual(x, p1, m);
  m.objective = dense_objective(x, p1, m.u, m.v, rho);
  m.status = eig.converged ? FitStatus::Converged : FitStatus::NotConverged;
  return m;
}

CocaModel fit_dense(const MultiViewData& data, double rho, const DenseOptions& options) {
  return fit_dense(data.concat(), data.p1(), rho, options);
}

double eigen_residual(const Matrix& x, Index p1, const CocaModel& model) {
  const CocaOperator op(x, p1, model.rho);
  const double vnorm = model.v.norm();
  if (vnorm == 0.0 || model.eigenvalue == 0.0) return std::numeric_limits<double>::infinity();
  return (op(model.v) - model.eigenvalue * model.v).norm() / (std::abs(model.eigenvalue) * vnorm);
}

// ---------------------------------------------------------------------------

LassoProblem build_augmented(const Matrix& x, Index p1, double rho, const Vector& u, double lambda) {
  if (std::abs(u.norm() - 1.0) > 1e-8) throw std::invalid_argument("build_augmented: u must have unit norm");
  if (u.size() != x.rows()) throw std::invalid_argument("build_augmented: u has wrong length");
  if (!(rho >= 0.0)) throw std::invalid_argument("build_augmented: rho must be >= 0");
  const Index n = x.rows();
  const Index p = x.cols();
  LassoProblem prob;
  prob.lambda = lambda;
  prob.design = Matrix::Zero(p + n, p);
  prob.design.topRows(p).setIdentity();
  const double s = std::sqrt(rho);
  prob.design.bottomLeftCorner(n, p1) = s * x.leftCols(p1);
  prob.design.bottomRightCorner(n, p - p1) = -s * x.rightCols(p - p1);
  prob.response = Vector::Zero(p + n);
  prob.response.head(p) = x.transpose() * u;
  return prob;
}

LassoGram augmented_gram(const Matrix& x, const Matrix& xtx, Index p1, double rho, const Vector& u, double lambda) {
  const Index p = x.cols();
  LassoGram g;
  g.gram = xtx;
  g.gram.topRightCorner(p1, p - p1) *= -1.0;
  g.gram.bottomLeftCorner(p - p1, p1) *= -1.0;
  g.gram *= rho;
  g.gram.diagonal().array() += 1.0;
  g.cross = x.transpose() * u;
  g.response_sq = g.cross.squaredNorm();
  g.lambda = lambda;
  return g;
}

namespace {

// Alternating Lasso / u updates from one starting point.
CocaModel alternate(const Matrix& x, const Matrix& xtx, Index p1, double rho, double lambda, const SparseOptions& options,
                    Vector u, Vector v) {
  const Index p = x.cols();

  CocaModel m;
  m.rho = rho;
  m.lambda = lambda;
  m.p1 = p1;
  m.p2 = p - p1;
  m.convention = ObjectiveConvention::Unhalved;
  common_warnings(x, rho, m.warnings);

  LassoGram sub = augmented_gram(x, xtx, p1, rho, u, lambda);

  double obj = sparse_objective(x, p1, u, v, rho, lambda);
  m.objective_trace.push_back(obj);
  const auto slack = [&](double ref) { return options.monotone_slack * std::max(1.0, std::abs(ref)); };

  m.status = FitStatus::NotConverged;
  for (int it = 1; it <= options.max_iter; ++it) {
    m.iterations = it;

    // v-update: exact Lasso minimizer given u, warm-started from the current v.
    sub.cross = x.transpose() * u;
    sub.response_sq = sub.cross.squaredNorm();
    const LassoSolution sol = solve_lasso(sub, options.lasso, v);
    const Vector v_old = v;
    v = sol.beta;

    if (v.isZero(0.0)) {
      m.status = FitStatus::AllZero;
      obj = sparse_objective(x, p1, u, v, rho, lambda);
      m.objective_trace.push_back(obj);
      break;
    }

    const double obj_v = sparse_objective(x, p1, u, v, rho, lambda);
    if (obj_v > obj + slack(obj)) {
      m.status = FitStatus::NonMonotone;
      m.objective_trace.push_back(obj_v);
      m.warnings.emplace_back("objective increased in the v-update");
      break;
    }

    // u-update.
    const Vector xv = x * v;
    const double xv_norm = xv.norm();
    if (xv_norm == 0.0) {
      m.status = FitStatus::Degenerate;
      m.warnings.emplace_back("X v vanished for a nonzero v");
      break;
    }
    u = xv / xv_norm;
    const double obj_u = sparse_objective(x, p1, u, v, rho, lambda);
    if (obj_u > obj_v + slack(obj_v)) {
      m.status = FitStatus::NonMonotone;
      m.objective_trace.push_back(obj_u);
      m.warnings.emplace_back("objective increased in the u-update");
      break;
    }
    m.objective_trace.push_back(obj_u);

    const double rel_obj = std::abs(obj - obj_u) / std::max(std::abs(obj_u), 1e-300);
    const double rel_v = (v - v_old).norm() / std::max(v.norm(), 1e-300);
    obj = obj_u;
    m.residual = std::max(rel_obj, rel_v);
    if (rel_obj < options.tol && rel_v < options.v_tol) {
      m.status = FitStatus::Converged;
      break;
    }
  }

  if (m.status == FitStatus::AllZero) {
    m.v = Vector::Zero(p);
    m.u = u;
    m.objective = obj;
    m.eigenvalue = 0.0;
    fill_scores(x, m);
    return m;
  }

  Vector dir = v;
  if (canonicalize_sign(dir) < 0.0) {
    v = -v;
    u = -u;
  }
  m.v = v;
  m.u = u;
  m.eigenvalue = (x * v).norm();
  m.objective = sparse_objective(x, p1, u, v, rho, lambda);
  fill_scores(x, m);
  return m;
}

bool usable(const CocaModel& m) {
  return m.status == FitStatus::Converged || m.status == FitStatus::AllZero || m.status == FitStatus::NotConverged;
}

}  // namespace

CocaModel fit_sparse(const Matrix& x, Index p1, double rho, double lambda, const SparseOptions& options,
                     const std::optional<SparseStart>& start) {
  check_inputs(x, p1, rho);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("fit_sparse: lambda must be finite and >= 0");
  const Index n = x.rows();
  const Index p = x.cols();
  const Matrix xtx = x.transpose() * x;

  if (start && start->u.size() == n && start->u.norm() > 0.0) {
    Vector v = Vector::Zero(p);
    if (start->v && start->v->size() == p) v = *start->v;
    return alternate(x, xtx, p1, rho, lambda, options, start->u / start->u.norm(), v);
  }

  const SingularTriplet t = leading_singular_triplet(x);
  CocaModel best = alternate(x, xtx, p1, rho, lambda, options, t.u, Vector::Zero(p));
  if (!options.dense_start || rho == 0.0) return best;

  // Second start from the dense solution at the same rho; keep the lower objective.
  const CocaModel dense = fit_dense(x, p1, rho, DenseOptions{});
  if (dense.status == FitStatus::Degenerate) return best;
  CocaModel other = alternate(x, xtx, p1, rho, lambda, options, dense.u, Vector::Zero(p));
  const bool take = usable(other) && (!usable(best) || other.objective < best.objective ||
                                      (best.status == FitStatus::NotConverged && other.converged() &&
                                       other.objective <= best.objective));
  return take ? other : best;
}

CocaModel fit_sparse(const MultiViewData& data, double rho, double lambda, const SparseOptions& options,
                     const std::optional<SparseStart>& start) {
  return fit_sparse(data.concat(), data.p1(), rho, lambda, options, start);
}

// ---------------------------------------------------------------------------

PathDiagnostics diagnose(const Matrix& x, Index p1, const CocaModel& model) {
  PathDiagnostics d;
  const Vector xv = x * model.v;
  d.variance = xv.squaredNorm();
  d.sparsity = model.nonzeros();
  const double scale = xv.norm();
  if (scale > 0.0) {
    const Vector gap = x.leftCols(p1) * model.v.head(p1) - x.rightCols(x.cols() - p1) * model.v.tail(x.cols() - p1);
    d.agreement_gap = gap.norm() / scale;
  }
  return d;
}

namespace {

void check_grid(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw std::invalid_argument(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) {
      throw std::invalid_argument(std::string(name) + " grid values must be finite and >= 0");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument(std::string(name) + " grid must be strictly increasing");
    }
  }
}

}  // namespace

SolutionPath solution_path(const MultiViewData& data, const std::vector<double>& rho_grid,
                           const std::vector<double>& lambda_grid, const PathOptions& options) {
  check_grid(rho_grid, "rho");
  check_grid(lambda_grid, "lambda");
  const Matrix x = data.concat();
  const Index p1 = data.p1();

  SolutionPath path;
  std::optional<SparseStart> warm;
  for (double rho : rho_grid) {
    for (double lambda : lambda_grid) {
      PathCell cell;
      cell.rho = rho;
      cell.lambda = lambda;
      try {
        if (lambda == 0.0) {
          cell.model = fit_dense(x, p1, rho, options.dense);
        } else {
          cell.model = fit_sparse(x, p1, rho, lambda, options.sparse,
                                  options.warm_start ? warm : std::nullopt);
        }
        cell.diagnostics = diagnose(x, p1, cell.model);
        cell.failed = !cell.model.converged();
        if (cell.failed) cell.error = to_string(cell.model.status);
        if (options.warm_start && cell.model.u.size() == x.rows() && cell.model.u.norm() > 0.0) {
          warm = SparseStart{cell.model.u, cell.model.all_zero() ? std::nullopt : std::optional<Vector>(cell.model.v)};
        }
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
      }
      path.cells.push_back(std::move(cell));
    }
  }
  return path;
}

}  // namespace coca
