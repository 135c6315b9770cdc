#include "fastcv/lda_oracle.hpp"

#include <cmath>
#include <string>

#include "fastcv/errors.hpp"
#include "fastcv/lsq_core.hpp"

namespace fastcv {
namespace {

constexpr double kRcondThreshold = 1e-12;

struct ClassStats {
  std::vector<std::vector<int>> members;  // per class, row indices
  Eigen::MatrixXd means;                  // C x P
  Eigen::VectorXd grand_mean;             // P
};

ClassStats class_stats(const Dataset& ds) {
  ClassStats st;
  st.members.resize(ds.n_classes);
  for (int i = 0; i < ds.n_samples(); ++i) {
    int l = ds.labels[i];
    if (l < 1 || l > ds.n_classes)
      throw ArgumentError("label out of range {1..C}");
    st.members[l - 1].push_back(i);
  }
  st.means = Eigen::MatrixXd::Zero(ds.n_classes, ds.n_features());
  for (int c = 0; c < ds.n_classes; ++c) {
    if (st.members[c].empty())
      throw DegenerateClassError("class " + std::to_string(c + 1) +
                                 " has no samples");
    for (int i : st.members[c]) st.means.row(c) += ds.features.row(i);
    st.means.row(c) /= static_cast<double>(st.members[c].size());
  }
  st.grand_mean = ds.features.colwise().mean().transpose();
  return st;
}

void check_fold_classes(const Dataset& ds, const std::vector<int>& train_idx,
                        int fold) {
  std::vector<int> counts(ds.n_classes, 0);
  for (int i : train_idx) ++counts[ds.labels[i] - 1];
  for (int c = 0; c < ds.n_classes; ++c)
    if (counts[c] == 0)
      throw DegenerateFoldError("training fold " + std::to_string(fold) +
                                    " is missing class " + std::to_string(c + 1),
                                fold);
}

Eigen::LLT<Eigen::MatrixXd> factorize_within(const Eigen::MatrixXd& s_w_reg,
                                             bool unregularized) {
  Eigen::LLT<Eigen::MatrixXd> llt(s_w_reg);
  if (llt.info() != Eigen::Success) {
    Eigen::LDLT<Eigen::MatrixXd> probe(s_w_reg);
    throw SingularityError("within-class scatter not positive definite (rcond estimate " +
                               std::to_string(probe.rcond()) + ")",
                           probe.rcond());
  }
  if (unregularized) {
    Eigen::LDLT<Eigen::MatrixXd> probe(s_w_reg);
    double rc = probe.rcond();
    if (!(rc > kRcondThreshold))
      throw SingularityError("within-class scatter singular at lambda=0 (rcond estimate " +
                                 std::to_string(rc) + ")",
                             rc);
  }
  return llt;
}

}  // namespace

ScatterPair scatter_matrices(const Dataset& dataset) {
  auto st = class_stats(dataset);
  const int p = dataset.n_features();
  ScatterPair sc;
  sc.s_w = Eigen::MatrixXd::Zero(p, p);
  sc.s_b = Eigen::MatrixXd::Zero(p, p);
  for (int c = 0; c < dataset.n_classes; ++c) {
    Eigen::MatrixXd centered(st.members[c].size(), p);
    for (std::size_t i = 0; i < st.members[c].size(); ++i)
      centered.row(static_cast<Eigen::Index>(i)) =
          dataset.features.row(st.members[c][i]) - st.means.row(c);
    sc.s_w.noalias() += centered.transpose() * centered;
    Eigen::VectorXd d = st.means.row(c).transpose() - st.grand_mean;
    sc.s_b.noalias() += static_cast<double>(st.members[c].size()) * d * d.transpose();
  }
  sc.s_w = 0.5 * (sc.s_w + sc.s_w.transpose()).eval();
  sc.s_b = 0.5 * (sc.s_b + sc.s_b.transpose()).eval();
  return sc;
}

BinaryLdaModel fit_binary_lda(const Dataset& dataset, double lambda,
                              RegMode mode) {
  if (dataset.n_classes != 2)
    throw ArgumentError("fit_binary_lda: dataset must have exactly 2 classes");
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw ArgumentError("fit_binary_lda: lambda must be finite and >= 0");
  auto st = class_stats(dataset);
  auto sc = scatter_matrices(dataset);
  const int p = dataset.n_features();

  Eigen::MatrixXd reg;
  bool unregularized = false;
  if (mode == RegMode::ridge) {
    reg = sc.s_w + lambda * Eigen::MatrixXd::Identity(p, p);
    unregularized = lambda == 0.0;
  } else {
    if (lambda > 1.0)
      throw ArgumentError("fit_binary_lda: shrinkage lambda must be in [0, 1]");
    double nu = scatter_trace_scale(sc.s_w);
    reg = (1.0 - lambda) * sc.s_w +
          lambda * nu * Eigen::MatrixXd::Identity(p, p);
    unregularized = lambda == 0.0;
  }

  auto llt = factorize_within(reg, unregularized);
  BinaryLdaModel model;
  model.m1 = st.means.row(0).transpose();
  model.m2 = st.means.row(1).transpose();
  model.grand_mean = st.grand_mean;
  model.w = llt.solve(model.m1 - model.m2);
  model.b_lda = -0.5 * model.w.dot(model.m1 + model.m2);
  double n1 = static_cast<double>(st.members[0].size());
  double n2 = static_cast<double>(st.members[1].size());
  model.b_lr = (n1 - n2) / (n1 + n2) - model.grand_mean.dot(model.w);
  return model;
}

Eigen::VectorXd decision_values(const BinaryLdaModel& model,
                                const Eigen::MatrixXd& features) {
  if (features.cols() != model.w.size())
    throw ArgumentError("decision_values: feature width does not match model");
  return (features * model.w).array() + model.b_lda;
}

MulticlassLdaModel fit_multiclass_lda(const Dataset& dataset, double lambda) {
  if (dataset.n_classes < 2)
    throw ArgumentError("fit_multiclass_lda: need at least 2 classes");
  if (dataset.n_features() < dataset.n_classes - 1)
    throw ArgumentError("fit_multiclass_lda: need P >= C-1");
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw ArgumentError("fit_multiclass_lda: lambda must be finite and >= 0");

  auto st = class_stats(dataset);
  auto sc = scatter_matrices(dataset);
  const int p = dataset.n_features();
  const int c = dataset.n_classes;
  const int r = c - 1;

  Eigen::MatrixXd s_w_reg =
      sc.s_w + lambda * Eigen::MatrixXd::Identity(p, p);
  auto llt = factorize_within(s_w_reg, lambda == 0.0);

  // S_b = F F^T with F columns sqrt(n_c) (m_c - mbar). After the Cholesky
  // reduction the standard problem's non-null eigenvectors live in the span
  // of L^-1 F, so the eigenanalysis shrinks to the C x C Gram matrix.
  Eigen::MatrixXd f(p, c);
  for (int j = 0; j < c; ++j)
    f.col(j) = std::sqrt(static_cast<double>(st.members[j].size())) *
               (st.means.row(j).transpose() - st.grand_mean);
  Eigen::MatrixXd lf = llt.matrixL().solve(f);
  Eigen::MatrixXd gram = lf.transpose() * lf;
  gram = 0.5 * (gram + gram.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success)
    throw NumericalDegeneracyError("fit_multiclass_lda: eigensolver failed");

  MulticlassLdaModel model;
  model.w_mat.resize(p, r);
  model.eigenvalues.resize(r);
  double ev_max = es.eigenvalues().cwiseAbs().maxCoeff();
  for (int j = 0; j < r; ++j) {
    // eigenvalues ascending; take the largest C-1 in descending order
    int src = c - 1 - j;
    Eigen::VectorXd v = lf * es.eigenvectors().col(src);
    double norm = v.norm();
    if (!(norm > 1e-14 * std::max(1.0, ev_max)))
      throw NumericalDegeneracyError(
          "fit_multiclass_lda: degenerate between-class direction");
    v /= norm;  // W^T (S_w + lambda I) W = I
    Eigen::VectorXd w = llt.matrixL().transpose().solve(v);
    Eigen::Index imax;
    w.cwiseAbs().maxCoeff(&imax);
    if (w(imax) < 0.0) w = -w;
    model.w_mat.col(j) = w;
    model.eigenvalues(j) = es.eigenvalues()(src);
  }
  model.centroids = st.means * model.w_mat;  // C x (C-1)
  return model;
}

std::vector<int> predict_multiclass(const MulticlassLdaModel& model,
                                    const Eigen::MatrixXd& features,
                                    Eigen::VectorXd* centroid_gap) {
  if (features.cols() != model.w_mat.rows())
    throw ArgumentError("predict_multiclass: feature width does not match model");
  Eigen::MatrixXd proj = features * model.w_mat;
  const Eigen::Index m = proj.rows();
  const Eigen::Index c = model.centroids.rows();
  std::vector<int> labels(m);
  if (centroid_gap) centroid_gap->resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    double second = best;
    int arg = 0;
    for (Eigen::Index j = 0; j < c; ++j) {
      double d = (proj.row(i) - model.centroids.row(j)).norm();
      if (d < best) {
        second = best;
        best = d;
        arg = static_cast<int>(j);
      } else if (d < second) {
        second = d;
      }
    }
    labels[i] = arg + 1;
    if (centroid_gap) (*centroid_gap)(i) = second - best;
  }
  return labels;
}

CvResult naive_crossval(const Dataset& dataset, const FoldPartition& partition,
                        CvTask task, double lambda, Metric metric) {
  if (partition.n_samples != dataset.n_samples())
    throw ArgumentError("naive_crossval: partition does not match dataset");
  const int n = dataset.n_samples();
  const int c = dataset.n_classes;

  CvResult res;
  res.test_indices = partition.folds;
  if (task == CvTask::multiclass) {
    res.predicted_labels.assign(n, 0);
    res.scores = Eigen::MatrixXd::Zero(n, c - 1);
    res.centroid_gap = Eigen::VectorXd::Zero(n);
  } else {
    res.decision_values.resize(n);
  }

  for (int f = 0; f < partition.n_folds(); ++f) {
    const auto& te_idx = partition.folds[f];
    auto tr_idx = training_indices(partition, f);
    check_fold_classes(dataset, tr_idx, f);
    Dataset train = subset(dataset, tr_idx);
    Dataset test = subset(dataset, te_idx);

    switch (task) {
      case CvTask::binary_regressionform: {
        auto design = augment(train.features);
        auto weights =
            fit_ridge(design, labels_to_pm1(train.labels), RidgeSpec{lambda});
        auto test_design = augment(test.features);
        Eigen::VectorXd dvals = test_design.xa * weights.beta;
        for (std::size_t i = 0; i < te_idx.size(); ++i)
          res.decision_values(te_idx[i]) = dvals(static_cast<Eigen::Index>(i));
        res.fold_performance.push_back(
            binary_metric(metric, dvals, labels_to_pm1(test.labels)));
        break;
      }
      case CvTask::binary_lda: {
        auto model = fit_binary_lda(train, lambda, RegMode::ridge);
        Eigen::VectorXd dvals = decision_values(model, test.features);
        for (std::size_t i = 0; i < te_idx.size(); ++i)
          res.decision_values(te_idx[i]) = dvals(static_cast<Eigen::Index>(i));
        res.fold_performance.push_back(
            binary_metric(metric, dvals, labels_to_pm1(test.labels)));
        break;
      }
      case CvTask::multiclass: {
        auto model = fit_multiclass_lda(train, lambda);
        Eigen::VectorXd gap;
        auto pred = predict_multiclass(model, test.features, &gap);
        Eigen::MatrixXd proj = test.features * model.w_mat;
        for (std::size_t i = 0; i < te_idx.size(); ++i) {
          res.predicted_labels[te_idx[i]] = pred[i];
          res.scores.row(te_idx[i]).head(proj.cols()) =
              proj.row(static_cast<Eigen::Index>(i));
          res.centroid_gap(te_idx[i]) = gap(static_cast<Eigen::Index>(i));
        }
        res.fold_performance.push_back(accuracy(pred, test.labels));
        break;
      }
    }
  }
  double sum = 0.0;
  for (double v : res.fold_performance) sum += v;
  res.mean_performance = sum / res.fold_performance.size();
  return res;
}

std::vector<double> naive_permutation_test(const Dataset& dataset,
                                           const FoldPartition& partition,
                                           const PermutationPlan& plan,
                                           CvTask task, double lambda,
                                           Metric metric) {
  std::vector<double> out(plan.size());
  Dataset permuted = dataset;
  for (int t = 0; t < plan.size(); ++t) {
    permuted.labels = permute_labels(dataset.labels, plan, t);
    out[t] =
        naive_crossval(permuted, partition, task, lambda, metric).mean_performance;
  }
  return out;
}

}  // namespace fastcv
