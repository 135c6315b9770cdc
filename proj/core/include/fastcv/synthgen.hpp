#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace fastcv {

/// Feature matrix with integer class labels in {1..n_classes}.
struct Dataset {
  Eigen::MatrixXd features;  // N x P
  std::vector<int> labels;   // length N, values in {1..n_classes}
  int n_classes = 0;

  int n_samples() const { return static_cast<int>(features.rows()); }
  int n_features() const { return static_cast<int>(features.cols()); }
};

/// K disjoint test-index sets covering {0..N-1}, sizes differing by at most 1.
struct FoldPartition {
  std::vector<std::vector<int>> folds;
  int n_samples = 0;

  int n_folds() const { return static_cast<int>(folds.size()); }
};

/// Seeded schedule of label permutations; entry 0 is always the identity.
struct PermutationPlan {
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> permutations;  // each a bijection on {0..N-1}

  int size() const { return static_cast<int>(permutations.size()); }
};

/// Class centroids on the unit sphere, one shared Wishart-drawn covariance,
/// class-balanced Gaussian samples. Deterministic in seed.
Dataset make_synthetic(int n_samples, int n_features, int n_classes,
                       std::uint64_t seed);

/// Uniformly random partition into n_folds folds. With stratify_labels, each
/// fold's class counts deviate from proportional by at most one sample.
FoldPartition make_folds(int n_samples, int n_folds, std::uint64_t seed,
                         const std::vector<int>* stratify_labels = nullptr);

/// n_permutations bijections on {0..n_samples-1}; index 0 is the identity.
PermutationPlan make_permutation_plan(int n_permutations, int n_samples,
                                      std::uint64_t seed);

/// Reorders labels by permutation t of the plan: out[i] = labels[perm[i]].
std::vector<int> permute_labels(const std::vector<int>& labels,
                                const PermutationPlan& plan, int t);

/// Child seed for a grid cell, derived by hashing coordinates into the master.
std::uint64_t mix_seed(std::uint64_t master,
                       std::initializer_list<std::uint64_t> coords);

/// Extracts the sub-dataset at the given row indices (n_classes preserved).
Dataset subset(const Dataset& dataset, const std::vector<int>& indices);

/// Training indices: complement of partition.folds[fold] in {0..N-1}.
std::vector<int> training_indices(const FoldPartition& partition, int fold);

/// Maps binary labels {1,2} to a +1/-1 response vector (1 -> +1, 2 -> -1).
Eigen::VectorXd labels_to_pm1(const std::vector<int>& labels);

}  // namespace fastcv
