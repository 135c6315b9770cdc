#include "fastcv/synthgen.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "fastcv/errors.hpp"

namespace fastcv {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Every operation draws from its own stream so adding draws to one generator
// never perturbs another.
constexpr std::uint64_t kTagSynthetic = 0x53594e5448ULL;
constexpr std::uint64_t kTagFolds = 0x464f4c4453ULL;
constexpr std::uint64_t kTagPermutations = 0x5045524dULL;

std::mt19937_64 rng_for(std::uint64_t op_tag, std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(op_tag)));
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t master,
                       std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t c : coords) h = splitmix64(h ^ splitmix64(c));
  return h;
}

Dataset make_synthetic(int n_samples, int n_features, int n_classes,
                       std::uint64_t seed) {
  if (n_features < 1) throw ArgumentError("make_synthetic: n_features must be >= 1");
  if (n_classes < 2) throw ArgumentError("make_synthetic: n_classes must be >= 2");
  if (n_samples < n_classes)
    throw ArgumentError("make_synthetic: n_samples must be >= n_classes");

  auto rng = rng_for(kTagSynthetic, seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int p = n_features;
  const int c = n_classes;

  // Centroids uniform on the unit (P-1)-sphere.
  Eigen::MatrixXd centroids(c, p);
  for (int j = 0; j < c; ++j) {
    double norm = 0.0;
    do {
      for (int k = 0; k < p; ++k) centroids(j, k) = gauss(rng);
      norm = centroids.row(j).norm();
    } while (norm == 0.0);
    centroids.row(j) /= norm;
  }

  // Shared covariance ~ Wishart(df = P+1, scale = I/(P+1)), drawn via the
  // Bartlett decomposition so the expected covariance is the identity.
  Eigen::MatrixXd bartlett = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    std::chi_squared_distribution<double> chi2(static_cast<double>(p + 1 - i));
    bartlett(i, i) = std::sqrt(chi2(rng));
    for (int k = 0; k < i; ++k) bartlett(i, k) = gauss(rng);
  }
  Eigen::MatrixXd sigma =
      (bartlett * bartlett.transpose()) / static_cast<double>(p + 1);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw NumericalDegeneracyError("make_synthetic: Wishart draw not positive definite");
  Eigen::MatrixXd chol = llt.matrixL();

  // Class-balanced sizes; the first (N mod C) classes get one extra sample.
  Dataset ds;
  ds.features.resize(n_samples, p);
  ds.labels.resize(n_samples);
  ds.n_classes = c;
  int row = 0;
  Eigen::VectorXd z(p);
  for (int j = 0; j < c; ++j) {
    int size = n_samples / c + (j < n_samples % c ? 1 : 0);
    for (int i = 0; i < size; ++i, ++row) {
      for (int k = 0; k < p; ++k) z(k) = gauss(rng);
      ds.features.row(row) = centroids.row(j) + (chol * z).transpose();
      ds.labels[row] = j + 1;
    }
  }
  return ds;
}

FoldPartition make_folds(int n_samples, int n_folds, std::uint64_t seed,
                         const std::vector<int>* stratify_labels) {
  if (n_samples < 2) throw ArgumentError("make_folds: n_samples must be >= 2");
  if (n_folds < 2 || n_folds > n_samples)
    throw ArgumentError("make_folds: n_folds must be in [2, n_samples]");
  if (stratify_labels && static_cast<int>(stratify_labels->size()) != n_samples)
    throw ArgumentError("make_folds: stratify_labels length mismatch");

  auto rng = rng_for(kTagFolds, seed);
  FoldPartition part;
  part.n_samples = n_samples;
  part.folds.resize(n_folds);

  if (!stratify_labels) {
    std::vector<int> order(n_samples);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    // First (N mod K) folds get one extra sample.
    int pos = 0;
    for (int f = 0; f < n_folds; ++f) {
      int size = n_samples / n_folds + (f < n_samples % n_folds ? 1 : 0);
      part.folds[f].assign(order.begin() + pos, order.begin() + pos + size);
      pos += size;
    }
  } else {
    // Shuffle within each class, then deal one by one across folds with a
    // cursor that carries over between classes. Per-fold class counts and
    // fold sizes both end up within one of proportional.
    int max_label = *std::max_element(stratify_labels->begin(),
                                      stratify_labels->end());
    std::vector<std::vector<int>> by_class(max_label + 1);
    for (int i = 0; i < n_samples; ++i) {
      int l = (*stratify_labels)[i];
      if (l < 1) throw ArgumentError("make_folds: labels must be >= 1");
      by_class[l].push_back(i);
    }
    int cursor = 0;
    for (auto& members : by_class) {
      std::shuffle(members.begin(), members.end(), rng);
      for (int idx : members) {
        part.folds[cursor % n_folds].push_back(idx);
        ++cursor;
      }
    }
  }
  for (auto& fold : part.folds) std::sort(fold.begin(), fold.end());
  return part;
}

PermutationPlan make_permutation_plan(int n_permutations, int n_samples,
                                      std::uint64_t seed) {
  if (n_permutations < 1)
    throw ArgumentError("make_permutation_plan: need at least one permutation");
  if (n_samples < 1)
    throw ArgumentError("make_permutation_plan: n_samples must be >= 1");

  auto rng = rng_for(kTagPermutations, seed);
  PermutationPlan plan;
  plan.seed = seed;
  plan.permutations.resize(n_permutations);
  std::vector<int> identity(n_samples);
  std::iota(identity.begin(), identity.end(), 0);
  plan.permutations[0] = identity;
  for (int t = 1; t < n_permutations; ++t) {
    plan.permutations[t] = identity;
    std::shuffle(plan.permutations[t].begin(), plan.permutations[t].end(), rng);
  }
  return plan;
}

std::vector<int> permute_labels(const std::vector<int>& labels,
                                const PermutationPlan& plan, int t) {
  if (t < 0 || t >= plan.size())
    throw ArgumentError("permute_labels: permutation index out of range");
  const auto& perm = plan.permutations[t];
  if (perm.size() != labels.size())
    throw ArgumentError("permute_labels: plan size does not match labels");
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[perm[i]];
  return out;
}

Dataset subset(const Dataset& dataset, const std::vector<int>& indices) {
  Dataset out;
  out.n_classes = dataset.n_classes;
  out.features.resize(indices.size(), dataset.n_features());
  out.labels.resize(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = dataset.features.row(indices[i]);
    out.labels[i] = dataset.labels[indices[i]];
  }
  return out;
}

std::vector<int> training_indices(const FoldPartition& partition, int fold) {
  if (fold < 0 || fold >= partition.n_folds())
    throw ArgumentError("training_indices: fold index out of range");
  std::vector<char> is_test(partition.n_samples, 0);
  for (int i : partition.folds[fold]) is_test[i] = 1;
  std::vector<int> train;
  train.reserve(partition.n_samples - partition.folds[fold].size());
  for (int i = 0; i < partition.n_samples; ++i)
    if (!is_test[i]) train.push_back(i);
  return train;
}

Eigen::VectorXd labels_to_pm1(const std::vector<int>& labels) {
  Eigen::VectorXd y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1)
      y(static_cast<Eigen::Index>(i)) = 1.0;
    else if (labels[i] == 2)
      y(static_cast<Eigen::Index>(i)) = -1.0;
    else
      throw ArgumentError("labels_to_pm1: labels must be in {1, 2}");
  }
  return y;
}

}  // namespace fastcv
