#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fastcv {

enum class BenchTask { binary, multiclass };

struct BenchCell {
  BenchTask task = BenchTask::binary;
  int n_samples = 0;
  int n_features = 0;
  int n_classes = 2;
  int n_folds = 0;        // 0 means leave-one-out (K = N)
  int n_permutations = 1; // total, including the unpermuted entry
  int repeat_index = 0;
  double lambda = -1.0;   // < 0 means auto: 1e-3 * trace(S_w)/P
};

struct BenchRecord {
  std::string method;  // "standard" | "analytic"
  std::string task;    // "binary" | "multiclass"
  int n_samples = 0, n_features = 0, n_classes = 0, n_folds = 0;
  int n_permutations = 0, repeat_index = 0;
  std::uint64_t seed = 0;
  double wall_time_seconds = 0.0;
  double performance_mean = 0.0;
  std::uint64_t input_hash = 0;  // same for both methods of a cell
  bool error = false;
  std::string error_message;
};

/// Times both methods on identical data, folds and permutations. The data is
/// generated once from a child seed hashed out of the cell coordinates; the
/// timed regions are single-threaded.
std::pair<BenchRecord, BenchRecord> run_bench_cell(const BenchCell& cell,
                                                   std::uint64_t master_seed);

/// The exact output header: method,task,n_samples,n_features,n_classes,
/// n_folds,n_permutations,repeat,seed,wall_time_seconds,performance_mean
std::string bench_csv_header();
std::string bench_csv_row(const BenchRecord& record);

}  // namespace fastcv
