#include <coca/coca.hpp>
#include <coca/lasso.hpp>
#include <coca/linalg.hpp>
#include <coca/model_selection.hpp>
#include <coca/random.hpp>
#include <coca/simulate.hpp>

#include <benchmark/benchmark.h>

#include <cmath>

using namespace coca;

namespace {

Matrix normals(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

Matrix sparse_design(Index p_per_view, Index n) {
  const Matrix raw = draw(sparse_spec(p_per_view, 2, 2), n, 1).concat();
  return prepare(raw, true).x;
}

void BM_SpdSolve(benchmark::State& state) {
  const Index p = state.range(0);
  const Matrix a0 = normals(p + 5, p, 3);
  Matrix a = a0.transpose() * a0;
  a.diagonal().array() += 1.0;
  const Vector b = normals(p, 1, 4).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(spd_solve(a, b));
}
BENCHMARK(BM_SpdSolve)->Arg(20)->Arg(60)->Arg(200);

void BM_Lasso(benchmark::State& state) {
  const Index p = state.range(0);
  LassoProblem prob;
  prob.design = normals(2 * p, p, 5);
  prob.response = normals(2 * p, 1, 6).col(0);
  prob.lambda = 0.1 * lambda_max(prob);
  const LassoGram gram = LassoGram::from_problem(prob);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lasso(gram));
}
BENCHMARK(BM_Lasso)->Arg(20)->Arg(60)->Arg(200);

void BM_FitDense(benchmark::State& state) {
  const Index p = state.range(0);
  const Matrix x = sparse_design(p, 200);
  for (auto _ : state) benchmark::DoNotOptimize(fit_dense(x, p, 1.0));
}
BENCHMARK(BM_FitDense)->Arg(4)->Arg(30)->Arg(100);

void BM_FitSparse(benchmark::State& state) {
  const Index p = state.range(0);
  const Matrix x = sparse_design(p, 200);
  for (auto _ : state) benchmark::DoNotOptimize(fit_sparse(x, p, 1.0, 0.2));
}
BENCHMARK(BM_FitSparse)->Arg(4)->Arg(30)->Arg(100);

void BM_KfoldGrid(benchmark::State& state) {
  const MultiViewData d = draw(sparse_spec(30, 2, 2), 200, 2);
  const HyperGrid grid({0.0, 0.1, 1.0, 10.0}, {0.0, 0.1, 0.3});
  SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(kfold_unsupervised(d, grid, 5, cfg, 1));
}
BENCHMARK(BM_KfoldGrid)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
