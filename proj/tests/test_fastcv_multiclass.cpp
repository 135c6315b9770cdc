#include <doctest.h>

#include <Eigen/Dense>

#include "fastcv/errors.hpp"
#include "fastcv/fastcv_binary.hpp"
#include "fastcv/fastcv_multiclass.hpp"
#include "fastcv/lda_oracle.hpp"
#include "fastcv/lsq_core.hpp"
#include "fastcv/synthgen.hpp"

using namespace fastcv;

namespace {

double abs_cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

}  // namespace

TEST_CASE("indicator matrix is one-hot") {
  IndicatorMatrix y = indicator_matrix({2, 1, 3, 3}, 3);
  REQUIRE(y.y.rows() == 4);
  REQUIRE(y.y.cols() == 3);
  CHECK((y.y.rowwise().sum().array() == 1.0).all());
  CHECK(y.y(0, 1) == 1.0);
  CHECK(y.y(1, 0) == 1.0);
  CHECK(y.y(2, 2) == 1.0);
}

TEST_CASE("step 1 columns reduce to the binary update rule") {
  Dataset ds = make_synthetic(12, 3, 2, 201);
  FoldPartition part = make_folds(12, 3, 201);
  auto hat = hat_matrix(augment(ds.features), RidgeSpec{0.5});
  IndicatorMatrix y_mat = indicator_matrix(ds.labels, 2);
  auto fits = os_step1_cv(hat, y_mat, part);
  for (int c = 0; c < 2; ++c) {
    CvResult col = cv_decision_values(hat, y_mat.y.col(c), part);
    for (const auto& fit : fits)
      for (std::size_t i = 0; i < fit.test_indices.size(); ++i)
        CHECK(fit.y_dot_te(static_cast<Eigen::Index>(i), c) ==
              doctest::Approx(col.decision_values(fit.test_indices[i]))
                  .epsilon(1e-12));
  }
}

TEST_CASE("step 1 equals a naive multivariate refit") {
  Dataset ds = make_synthetic(9, 3, 3, 211);
  FoldPartition part = make_folds(9, 3, 211, &ds.labels);
  double lambda = 0.5;
  auto design = augment(ds.features);
  auto hat = hat_matrix(design, RidgeSpec{lambda});
  IndicatorMatrix y_mat = indicator_matrix(ds.labels, 3);
  auto fits = os_step1_cv(hat, y_mat, part);
  for (const auto& fit : fits) {
    AugmentedDesign tr;
    tr.xa.resize(fit.train_indices.size(), design.xa.cols());
    Eigen::MatrixXd y_tr(fit.train_indices.size(), 3);
    for (std::size_t i = 0; i < fit.train_indices.size(); ++i) {
      tr.xa.row(static_cast<Eigen::Index>(i)) =
          design.xa.row(fit.train_indices[i]);
      y_tr.row(static_cast<Eigen::Index>(i)) = y_mat.y.row(fit.train_indices[i]);
    }
    Eigen::MatrixXd beta = fit_ridge(tr, y_tr, RidgeSpec{lambda}).beta;
    for (std::size_t i = 0; i < fit.test_indices.size(); ++i) {
      Eigen::RowVectorXd pred = design.xa.row(fit.test_indices[i]) * beta;
      CHECK((fit.y_dot_te.row(static_cast<Eigen::Index>(i)) - pred)
                .cwiseAbs()
                .maxCoeff() <= 1e-10);
    }
    // training-set fits too
    Eigen::MatrixXd pred_tr = tr.xa * beta;
    CHECK((fit.y_dot_tr - pred_tr).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("optimal scores are valid: alpha^2 in [0,1], descending") {
  Dataset ds = make_synthetic(30, 5, 4, 221);
  FoldPartition part = make_folds(30, 3, 221, &ds.labels);
  auto hat = hat_matrix(augment(ds.features), RidgeSpec{0.5});
  auto fits = os_step1_cv(hat, indicator_matrix(ds.labels, 4), part);
  for (const auto& fit : fits) {
    Eigen::MatrixXd y_tr(fit.train_indices.size(), 4);
    IndicatorMatrix y_mat = indicator_matrix(ds.labels, 4);
    for (std::size_t i = 0; i < fit.train_indices.size(); ++i)
      y_tr.row(static_cast<Eigen::Index>(i)) = y_mat.y.row(fit.train_indices[i]);
    OptimalScores os = os_step2(fit.y_dot_tr, y_tr);
    REQUIRE(os.alpha_sq.size() >= 1);
    for (Eigen::Index j = 0; j < os.alpha_sq.size(); ++j) {
      CHECK(os.alpha_sq(j) >= -1e-8);
      CHECK(os.alpha_sq(j) <= 1.0 + 1e-8);
      if (j > 0) CHECK(os.alpha_sq(j) <= os.alpha_sq(j - 1) + 1e-12);
    }
  }
}

TEST_CASE("full-data W = B Theta D is collinear with classical LDA") {
  Dataset ds = make_synthetic(36, 7, 3, 231);
  double lambda = 0.3;
  Eigen::MatrixXd w_os =
      optimal_scoring_full(augment(ds.features), ds.labels, 3, lambda);
  Eigen::MatrixXd w_cl = fit_multiclass_lda(ds, lambda).w_mat;
  REQUIRE(w_os.cols() == w_cl.cols());
  for (Eigen::Index j = 0; j < w_os.cols(); ++j)
    CHECK(abs_cosine(w_os.col(j), w_cl.col(j)) >= 1.0 - 1e-6);
}

TEST_CASE("analytical multiclass CV labels equal the naive oracle") {
  Dataset ds = make_synthetic(45, 6, 3, 241);
  FoldPartition part = make_folds(45, 5, 241, &ds.labels);
  double lambda = 0.5;
  auto hat = hat_matrix(augment(ds.features), RidgeSpec{lambda});
  CvResult fast = multiclass_crossval(hat, ds.labels, 3, part);
  CvResult naive = naive_crossval(ds, part, CvTask::multiclass, lambda);
  int mismatches = 0;
  for (int i = 0; i < 45; ++i) {
    if (std::min(fast.centroid_gap(i), naive.centroid_gap(i)) < 1e-9) continue;
    if (fast.predicted_labels[i] != naive.predicted_labels[i]) ++mismatches;
  }
  CHECK(mismatches == 0);
  CHECK(fast.mean_performance == doctest::Approx(naive.mean_performance));
}

TEST_CASE("nearest-centroid ties resolve to the smallest class") {
  DiscriminantScores s;
  s.scores.resize(1, 1);
  s.scores << 0.0;
  s.centroids.resize(2, 1);
  s.centroids << -1.0, 1.0;  // equidistant
  auto pred = classify_nearest_centroid(s);
  CHECK(pred == std::vector<int>{1});
}

TEST_CASE("multiclass permutation test equals the naive loop") {
  Dataset ds = make_synthetic(24, 4, 3, 251);
  FoldPartition part = make_folds(24, 3, 251, &ds.labels);
  PermutationPlan plan = make_permutation_plan(5, 24, 251);
  double lambda = 0.5;
  auto hat = hat_matrix(augment(ds.features), RidgeSpec{lambda});
  auto fast = permutation_test_multiclass(hat, ds.labels, 3, part, plan);
  auto naive =
      naive_permutation_test(ds, part, plan, CvTask::multiclass, lambda);
  REQUIRE(fast.size() == naive.size());
  for (std::size_t t = 0; t < fast.size(); ++t)
    CHECK(fast[t] == doctest::Approx(naive[t]).epsilon(1e-10));
}

TEST_CASE("threaded multiclass permutations match serial exactly") {
  Dataset ds = make_synthetic(24, 4, 3, 261);
  FoldPartition part = make_folds(24, 3, 261, &ds.labels);
  PermutationPlan plan = make_permutation_plan(7, 24, 261);
  auto hat = hat_matrix(augment(ds.features), RidgeSpec{0.4});
  auto serial = permutation_test_multiclass(hat, ds.labels, 3, part, plan, 1);
  auto threaded = permutation_test_multiclass(hat, ds.labels, 3, part, plan, 4);
  CHECK(serial == threaded);
}

TEST_CASE("pure-noise 4-class accuracy sits at chance level") {
  Dataset ds = make_synthetic(160, 8, 4, 271);
  // decouple labels from features by shuffling them with a permutation
  PermutationPlan scramble = make_permutation_plan(2, 160, 999);
  ds.labels = permute_labels(ds.labels, scramble, 1);
  FoldPartition part = make_folds(160, 8, 271, &ds.labels);
  PermutationPlan plan = make_permutation_plan(101, 160, 271);
  auto hat = hat_matrix(augment(ds.features), RidgeSpec{1.0});
  auto perf = permutation_test_multiclass(hat, ds.labels, 4, part, plan);
  double mean = 0.0;
  for (std::size_t t = 1; t < perf.size(); ++t) mean += perf[t];
  mean /= static_cast<double>(perf.size() - 1);
  CHECK(mean >= 0.2);
  CHECK(mean <= 0.3);
}
