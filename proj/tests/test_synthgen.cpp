#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "fastcv/errors.hpp"
#include "fastcv/synthgen.hpp"

using namespace fastcv;

TEST_CASE("make_synthetic is deterministic in the seed") {
  Dataset a = make_synthetic(20, 4, 3, 42);
  Dataset b = make_synthetic(20, 4, 3, 42);
  Dataset c = make_synthetic(20, 4, 3, 43);
  CHECK((a.features.array() == b.features.array()).all());
  CHECK(a.labels == b.labels);
  CHECK_FALSE((a.features.array() == c.features.array()).all());
}

TEST_CASE("make_synthetic balances classes, extras to the lowest labels") {
  Dataset ds = make_synthetic(10, 3, 3, 7);
  std::map<int, int> counts;
  for (int l : ds.labels) ++counts[l];
  CHECK(counts[1] == 4);
  CHECK(counts[2] == 3);
  CHECK(counts[3] == 3);
  CHECK(ds.n_classes == 3);
  CHECK(ds.features.allFinite());
}

TEST_CASE("make_synthetic rejects bad shapes") {
  CHECK_THROWS_AS(make_synthetic(0, 3, 2, 1), ArgumentError);
  CHECK_THROWS_AS(make_synthetic(10, 0, 2, 1), ArgumentError);
  CHECK_THROWS_AS(make_synthetic(10, 3, 1, 1), ArgumentError);
  CHECK_THROWS_AS(make_synthetic(3, 3, 4, 1), ArgumentError);
}

TEST_CASE("make_folds partitions all indices with sizes within one") {
  for (int k : {2, 3, 7, 23}) {
    FoldPartition part = make_folds(23, k, 5);
    std::set<int> seen;
    std::size_t lo = 23, hi = 0;
    for (const auto& fold : part.folds) {
      lo = std::min(lo, fold.size());
      hi = std::max(hi, fold.size());
      for (int i : fold) {
        CHECK(seen.insert(i).second);  // disjoint
        CHECK(std::is_sorted(fold.begin(), fold.end()));
      }
    }
    CHECK(seen.size() == 23);
    CHECK(hi - lo <= 1);
    CHECK(part.n_folds() == k);
  }
}

TEST_CASE("stratified folds keep per-class counts near proportional") {
  Dataset ds = make_synthetic(31, 2, 3, 9);
  FoldPartition part = make_folds(31, 4, 9, &ds.labels);
  for (int c = 1; c <= 3; ++c) {
    int total = static_cast<int>(
        std::count(ds.labels.begin(), ds.labels.end(), c));
    int lo = total, hi = 0;
    for (const auto& fold : part.folds) {
      int in_fold = 0;
      for (int i : fold)
        if (ds.labels[i] == c) ++in_fold;
      lo = std::min(lo, in_fold);
      hi = std::max(hi, in_fold);
    }
    CHECK(hi - lo <= 1);
  }
}

TEST_CASE("permutation plan starts with the identity, all bijections") {
  PermutationPlan plan = make_permutation_plan(5, 12, 3);
  REQUIRE(plan.size() == 5);
  for (int i = 0; i < 12; ++i) CHECK(plan.permutations[0][i] == i);
  for (const auto& perm : plan.permutations) {
    std::set<int> seen(perm.begin(), perm.end());
    CHECK(seen.size() == 12);
  }
  std::vector<int> labels = {1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3};
  CHECK(permute_labels(labels, plan, 0) == labels);
  auto shuffled = permute_labels(labels, plan, 1);
  std::multiset<int> a(labels.begin(), labels.end());
  std::multiset<int> b(shuffled.begin(), shuffled.end());
  CHECK(a == b);
}

TEST_CASE("labels_to_pm1 maps 1/2 and rejects anything else") {
  Eigen::VectorXd y = labels_to_pm1({1, 2, 2, 1});
  CHECK(y(0) == 1.0);
  CHECK(y(1) == -1.0);
  CHECK(y(2) == -1.0);
  CHECK(y(3) == 1.0);
  CHECK_THROWS_AS(labels_to_pm1({1, 2, 3}), ArgumentError);
}

TEST_CASE("training_indices complements the fold") {
  FoldPartition part = make_folds(10, 3, 1);
  for (int f = 0; f < 3; ++f) {
    auto tr = training_indices(part, f);
    CHECK(tr.size() + part.folds[f].size() == 10);
    for (int i : tr)
      CHECK(std::find(part.folds[f].begin(), part.folds[f].end(), i) ==
            part.folds[f].end());
  }
}

TEST_CASE("mix_seed separates coordinates") {
  CHECK(mix_seed(1, {2, 3}) != mix_seed(1, {3, 2}));
  CHECK(mix_seed(1, {2, 3}) != mix_seed(2, {2, 3}));
}

TEST_CASE("subset keeps rows and labels aligned") {
  Dataset ds = make_synthetic(8, 2, 2, 4);
  Dataset sub = subset(ds, {0, 3, 5});
  CHECK(sub.n_samples() == 3);
  CHECK(sub.features.row(1) == ds.features.row(3));
  CHECK(sub.labels[2] == ds.labels[5]);
  CHECK(sub.n_classes == 2);
}
