// Microbenchmarks: hat-matrix construction and analytic vs naive CV.
#include <benchmark/benchmark.h>

#include "fastcv/fastcv_binary.hpp"
#include "fastcv/fastcv_multiclass.hpp"
#include "fastcv/lda_oracle.hpp"
#include "fastcv/lsq_core.hpp"
#include "fastcv/synthgen.hpp"

namespace {

using namespace fastcv;

constexpr std::uint64_t kSeed = 7;

void BM_hat_matrix(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int p = static_cast<int>(state.range(1));
  Dataset ds = make_synthetic(n, p, 2, kSeed);
  auto design = augment(ds.features);
  for (auto _ : state)
    benchmark::DoNotOptimize(hat_matrix(design, RidgeSpec{1.0}));
}
BENCHMARK(BM_hat_matrix)->Args({100, 10})->Args({100, 100})->Args({100, 1000});

void BM_analytic_binary_cv(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int p = static_cast<int>(state.range(1));
  Dataset ds = make_synthetic(n, p, 2, kSeed);
  FoldPartition part = make_folds(n, 10, kSeed, &ds.labels);
  auto hat = hat_matrix(augment(ds.features), RidgeSpec{1.0});
  Eigen::VectorXd y = labels_to_pm1(ds.labels);
  for (auto _ : state) {
    CvResult res = cv_decision_values(hat, y, part);
    adjust_bias(hat, y, part, res);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_analytic_binary_cv)
    ->Args({100, 10})
    ->Args({100, 100})
    ->Args({100, 1000});

void BM_naive_binary_cv(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int p = static_cast<int>(state.range(1));
  Dataset ds = make_synthetic(n, p, 2, kSeed);
  FoldPartition part = make_folds(n, 10, kSeed, &ds.labels);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        naive_crossval(ds, part, CvTask::binary_lda, 1.0));
}
BENCHMARK(BM_naive_binary_cv)
    ->Args({100, 10})
    ->Args({100, 100})
    ->Args({100, 1000});

void BM_analytic_multiclass_cv(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int p = static_cast<int>(state.range(1));
  Dataset ds = make_synthetic(n, p, 5, kSeed);
  FoldPartition part = make_folds(n, 10, kSeed, &ds.labels);
  auto hat = hat_matrix(augment(ds.features), RidgeSpec{1.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(multiclass_crossval(hat, ds.labels, 5, part));
}
BENCHMARK(BM_analytic_multiclass_cv)->Args({100, 10})->Args({100, 100});

void BM_naive_multiclass_cv(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int p = static_cast<int>(state.range(1));
  Dataset ds = make_synthetic(n, p, 5, kSeed);
  FoldPartition part = make_folds(n, 10, kSeed, &ds.labels);
  for (auto _ : state)
    benchmark::DoNotOptimize(naive_crossval(ds, part, CvTask::multiclass, 1.0));
}
BENCHMARK(BM_naive_multiclass_cv)->Args({100, 10})->Args({100, 100});

}  // namespace

BENCHMARK_MAIN();
