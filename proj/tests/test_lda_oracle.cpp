#include <doctest.h>

#include <Eigen/Dense>

#include "fastcv/errors.hpp"
#include "fastcv/lda_oracle.hpp"
#include "fastcv/lsq_core.hpp"
#include "fastcv/synthgen.hpp"

using namespace fastcv;

namespace {

// Symmetric two-class toy: class 1 = {(1,1),(3,1)}, class 2 = {(-1,-1),(-3,-1)}.
Dataset toy_dataset() {
  Dataset ds;
  ds.features.resize(4, 2);
  ds.features << 1, 1, 3, 1, -1, -1, -3, -1;
  ds.labels = {1, 1, 2, 2};
  ds.n_classes = 2;
  return ds;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.dot(b) / (a.norm() * b.norm());
}

}  // namespace

TEST_CASE("scatter matrices on the symmetric toy") {
  ScatterPair sc = scatter_matrices(toy_dataset());
  CHECK(sc.s_w(0, 0) == doctest::Approx(4.0));
  CHECK(sc.s_w(0, 1) == doctest::Approx(0.0));
  CHECK(sc.s_w(1, 0) == doctest::Approx(0.0));
  CHECK(sc.s_w(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("binary S_b rank-1 formula agrees with the general C-class formula") {
  Dataset ds = make_synthetic(14, 3, 2, 21);
  ScatterPair sc = scatter_matrices(ds);  // general formula
  int n1 = 0;
  for (int l : ds.labels)
    if (l == 1) ++n1;
  int n2 = ds.n_samples() - n1;
  Eigen::VectorXd m1 = Eigen::VectorXd::Zero(3), m2 = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < ds.n_samples(); ++i)
    (ds.labels[i] == 1 ? m1 : m2) += ds.features.row(i).transpose();
  m1 /= n1;
  m2 /= n2;
  Eigen::VectorXd d = m1 - m2;
  Eigen::MatrixXd rank1 =
      static_cast<double>(n1) * n2 / ds.n_samples() * d * d.transpose();
  CHECK((sc.s_b - rank1).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("binary LDA on the toy with ridge lambda=1") {
  BinaryLdaModel model = fit_binary_lda(toy_dataset(), 1.0);
  // (S_w + I) w = m1 - m2 = (4, 2) with S_w + I = diag(5, 1)
  CHECK(model.w(0) == doctest::Approx(0.8));
  CHECK(model.w(1) == doctest::Approx(2.0));
  CHECK(model.b_lda == doctest::Approx(0.0));
  Eigen::VectorXd dvals = decision_values(model, toy_dataset().features);
  CHECK(dvals(0) > 0);
  CHECK(dvals(2) < 0);
}

TEST_CASE("binary LDA direction matches the ridge-regression path") {
  Dataset ds = make_synthetic(25, 6, 2, 31);
  double lambda = 0.7;
  Eigen::VectorXd w_cl = fit_binary_lda(ds, lambda).w;
  Eigen::VectorXd beta =
      fit_ridge(augment(ds.features), labels_to_pm1(ds.labels),
                RidgeSpec{lambda})
          .beta;
  CHECK(cosine(w_cl, beta.head(6)) >= 1.0 - 1e-8);  // positive factor
}

TEST_CASE("shrinkage mode blends toward the scaled identity") {
  Dataset ds = make_synthetic(20, 5, 2, 41);
  double nu = scatter_trace_scale(scatter_matrices(ds).s_w);
  Eigen::VectorXd w_s = fit_binary_lda(ds, 0.3, RegMode::shrinkage).w;
  Eigen::VectorXd w_r =
      fit_binary_lda(ds, shrink_to_ridge(0.3, nu), RegMode::ridge).w;
  CHECK(cosine(w_s, w_r) >= 1.0 - 1e-10);
}

TEST_CASE("multiclass LDA separates well-separated blobs perfectly") {
  Dataset ds = make_synthetic(30, 4, 3, 51);
  for (int i = 0; i < 30; ++i)
    ds.features(i, ds.labels[i] - 1) += 50.0;  // blow the classes apart
  MulticlassLdaModel model = fit_multiclass_lda(ds, 0.1);
  auto pred = predict_multiclass(model, ds.features);
  CHECK(pred == ds.labels);
  CHECK(model.w_mat.cols() == 2);
  CHECK(model.eigenvalues(0) >= model.eigenvalues(1));
}

TEST_CASE("multiclass LDA whitens the regularized within-class scatter") {
  Dataset ds = make_synthetic(40, 6, 4, 61);
  double lambda = 0.5;
  MulticlassLdaModel model = fit_multiclass_lda(ds, lambda);
  Eigen::MatrixXd s_reg =
      scatter_matrices(ds).s_w + lambda * Eigen::MatrixXd::Identity(6, 6);
  Eigen::MatrixXd gram = model.w_mat.transpose() * s_reg * model.w_mat;
  CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <=
        1e-8);
}

TEST_CASE("C=2 multiclass predictions match binary LDA predictions") {
  Dataset ds = make_synthetic(24, 5, 2, 71);
  Dataset test = make_synthetic(10, 5, 2, 72);
  double lambda = 0.4;
  auto multi = predict_multiclass(fit_multiclass_lda(ds, lambda), test.features);
  Eigen::VectorXd dvals =
      decision_values(fit_binary_lda(ds, lambda), test.features);
  for (int i = 0; i < 10; ++i)
    CHECK(multi[i] == (dvals(i) >= 0.0 ? 1 : 2));
}

TEST_CASE("predict_multiclass agrees with a brute-force distance oracle") {
  Dataset ds = make_synthetic(27, 4, 3, 81);
  MulticlassLdaModel model = fit_multiclass_lda(ds, 0.2);
  Eigen::MatrixXd proj = ds.features * model.w_mat;
  Eigen::VectorXd gap;
  auto pred = predict_multiclass(model, ds.features, &gap);
  for (int i = 0; i < 27; ++i) {
    int best = 1;
    double best_d = (proj.row(i) - model.centroids.row(0)).norm();
    for (int c = 2; c <= 3; ++c) {
      double dist = (proj.row(i) - model.centroids.row(c - 1)).norm();
      if (dist < best_d) {
        best_d = dist;
        best = c;
      }
    }
    CHECK(pred[i] == best);
    CHECK(gap(i) >= 0.0);
  }
}

TEST_CASE("naive_crossval flags a training fold missing a class") {
  Dataset ds = toy_dataset();
  FoldPartition part;
  part.n_samples = 4;
  part.folds = {{0, 1}, {2, 3}};  // each test fold removes one whole class
  CHECK_THROWS_AS(naive_crossval(ds, part, CvTask::binary_lda, 1.0),
                  DegenerateFoldError);
}

TEST_CASE("empty class raises DegenerateClassError") {
  Dataset ds = toy_dataset();
  ds.n_classes = 3;  // class 3 has no members
  CHECK_THROWS_AS(scatter_matrices(ds), DegenerateClassError);
}
