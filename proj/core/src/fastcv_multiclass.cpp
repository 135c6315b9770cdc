#include "fastcv/fastcv_multiclass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "fastcv/errors.hpp"
#include "fastcv/metrics.hpp"

namespace fastcv {
namespace {

constexpr double kImagTol = 1e-8;
constexpr double kAlphaClamp = 1e-8;
constexpr double kTrivialCvTol = 1e-8;

Eigen::MatrixXd select(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(rows[i], cols[j]);
  return out;
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m,
                            const std::vector<int>& idx) {
  Eigen::MatrixXd out(idx.size(), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = m.row(idx[i]);
  return out;
}

}  // namespace

IndicatorMatrix indicator_matrix(const std::vector<int>& labels,
                                 int n_classes) {
  if (n_classes < 2) throw ArgumentError("indicator_matrix: need C >= 2");
  IndicatorMatrix ind;
  ind.y = Eigen::MatrixXd::Zero(labels.size(), n_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 1 || labels[i] > n_classes)
      throw ArgumentError("indicator_matrix: label out of range {1..C}");
    ind.y(static_cast<Eigen::Index>(i), labels[i] - 1) = 1.0;
  }
  return ind;
}

std::vector<FoldFits> os_step1_cv(const HatMatrix& hat,
                                  const IndicatorMatrix& y_mat,
                                  const FoldPartition& partition) {
  if (hat.h.rows() != y_mat.y.rows())
    throw ArgumentError("os_step1_cv: indicator matrix does not match hat matrix");
  if (partition.n_samples != static_cast<int>(y_mat.y.rows()))
    throw ArgumentError("os_step1_cv: partition does not match indicator matrix");

  Eigen::MatrixXd e_hat = y_mat.y - hat.h * y_mat.y;
  std::vector<FoldFits> fits(partition.n_folds());
  for (int f = 0; f < partition.n_folds(); ++f) {
    const auto& te = partition.folds[f];
    auto tr = training_indices(partition, f);

    Eigen::MatrixXd m =
        Eigen::MatrixXd::Identity(te.size(), te.size()) - select(hat.h, te, te);
    Eigen::FullPivLU<Eigen::MatrixXd> check(m);
    if (!check.isInvertible())
      throw SingularFoldError(
          "(I - H_Te) is singular on fold " + std::to_string(f), f);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);

    // One factorization shared across the C indicator columns.
    Eigen::MatrixXd e_dot_te = lu.solve(gather_rows(e_hat, te));
    Eigen::MatrixXd e_dot_tr =
        gather_rows(e_hat, tr) + select(hat.h, tr, te) * e_dot_te;

    fits[f].train_indices = tr;
    fits[f].test_indices = te;
    fits[f].y_dot_te = gather_rows(y_mat.y, te) - e_dot_te;
    fits[f].y_dot_tr = gather_rows(y_mat.y, tr) - e_dot_tr;
  }
  return fits;
}

OptimalScores os_step2(const Eigen::MatrixXd& y_dot_tr,
                       const Eigen::MatrixXd& y_tr) {
  const Eigen::Index n_tr = y_tr.rows();
  const Eigen::Index c = y_tr.cols();
  if (y_dot_tr.rows() != n_tr || y_dot_tr.cols() != c)
    throw ArgumentError("os_step2: fit and indicator shapes differ");
  if (n_tr <= c) throw ArgumentError("os_step2: need N_Tr > C");
  for (Eigen::Index j = 0; j < c; ++j)
    if (y_tr.col(j).sum() == 0.0)
      throw DegenerateFoldError(
          "class " + std::to_string(j + 1) + " missing from training fold", -1);

  // ASR eigenproblem: Y^T Y_dot theta = alpha^2 (Y^T Y) theta, with
  // Y^T Y = diag(class counts). The diag^-1 factor makes the trivial pair
  // exactly (1, constant vector) and keeps alpha^2 in [0, 1] for any class
  // balance.
  Eigen::VectorXd counts = y_tr.colwise().sum();
  Eigen::MatrixXd m = counts.cwiseInverse().asDiagonal() *
                      (y_tr.transpose() * y_dot_tr);
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);  // asymmetric under CV
  if (es.info() != Eigen::Success)
    throw NumericalDegeneracyError("os_step2: eigensolver failed");

  std::vector<double> vals(c);
  std::vector<Eigen::VectorXd> vecs(c);
  for (Eigen::Index j = 0; j < c; ++j) {
    if (std::abs(es.eigenvalues()(j).imag()) > kImagTol ||
        es.eigenvectors().col(j).imag().cwiseAbs().maxCoeff() > kImagTol)
      throw NumericalDegeneracyError(
          "os_step2: complex eigenstructure beyond tolerance");
    vals[j] = es.eigenvalues()(j).real();
    vecs[j] = es.eigenvectors().col(j).real();
  }

  // Trivial eigenpair: a constant score vector, i.e. theta with (near-)equal
  // entries. Fall back to the eigenvalue nearest 1 if roundoff hides it.
  int trivial = -1;
  double best_cv = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < c; ++j) {
    double mean = vecs[j].mean();
    double sd = std::sqrt((vecs[j].array() - mean).square().sum() /
                          static_cast<double>(c));
    double cv = sd / std::max(std::abs(mean), 1e-300);
    if (cv < best_cv) {
      best_cv = cv;
      if (cv < kTrivialCvTol) trivial = static_cast<int>(j);
    }
  }
  if (trivial < 0) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < c; ++j)
      if (std::abs(vals[j] - 1.0) < best) {
        best = std::abs(vals[j] - 1.0);
        trivial = static_cast<int>(j);
      }
  }

  std::vector<int> keep;
  for (int j = 0; j < c; ++j)
    if (j != trivial) keep.push_back(j);
  std::sort(keep.begin(), keep.end(),
            [&](int a, int b) { return vals[a] > vals[b]; });

  OptimalScores os;
  std::vector<int> retained;
  for (int j : keep) {
    double a2 = vals[j];
    if (a2 < -kAlphaClamp || a2 > 1.0 + kAlphaClamp)
      throw NumericalDegeneracyError("os_step2: alpha^2 = " +
                                     std::to_string(a2) + " outside [0, 1]");
    a2 = std::clamp(a2, 0.0, 1.0);
    if (a2 == 0.0 || a2 == 1.0) {
      // Perfect or null separation along this score direction makes the
      // scaling singular; the component is dropped.
      ++os.dropped;
      continue;
    }
    vals[j] = a2;
    retained.push_back(j);
  }

  os.theta.resize(c, retained.size());
  os.alpha_sq.resize(retained.size());
  os.d_scale.resize(retained.size());
  for (std::size_t k = 0; k < retained.size(); ++k) {
    int j = retained[k];
    Eigen::VectorXd v = vecs[j];
    Eigen::Index imax;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    // Unit-variance scores: theta^T (Y^T Y / N_Tr) theta = 1. This fixes the
    // free eigenvector scale so that W = B Theta D matches the classical
    // normalization W^T (S_w + lambda I) W = I, not just its direction.
    v /= std::sqrt(v.array().square().matrix().dot(counts) /
                   static_cast<double>(n_tr));
    os.theta.col(static_cast<Eigen::Index>(k)) = v;
    os.alpha_sq(static_cast<Eigen::Index>(k)) = vals[j];
    os.d_scale(static_cast<Eigen::Index>(k)) =
        1.0 / (std::sqrt(static_cast<double>(n_tr)) *
               std::sqrt(vals[j] * (1.0 - vals[j])));
  }
  return os;
}

DiscriminantScores discriminant_scores(const Eigen::MatrixXd& y_dot,
                                       const OptimalScores& os,
                                       const Eigen::MatrixXd& y_dot_tr,
                                       const std::vector<int>& labels_tr,
                                       int n_classes) {
  if (y_dot.cols() != os.theta.rows() || y_dot_tr.cols() != os.theta.rows())
    throw ArgumentError("discriminant_scores: shape mismatch");
  if (static_cast<Eigen::Index>(labels_tr.size()) != y_dot_tr.rows())
    throw ArgumentError("discriminant_scores: training labels do not match fits");

  Eigen::MatrixXd projection = os.theta * os.d_scale.asDiagonal();
  DiscriminantScores out;
  out.scores = y_dot * projection;
  Eigen::MatrixXd tr_scores = y_dot_tr * projection;

  out.centroids = Eigen::MatrixXd::Zero(n_classes, projection.cols());
  std::vector<int> counts(n_classes, 0);
  for (std::size_t i = 0; i < labels_tr.size(); ++i) {
    int cidx = labels_tr[i] - 1;
    if (cidx < 0 || cidx >= n_classes)
      throw ArgumentError("discriminant_scores: label out of range");
    out.centroids.row(cidx) += tr_scores.row(static_cast<Eigen::Index>(i));
    ++counts[cidx];
  }
  for (int cidx = 0; cidx < n_classes; ++cidx) {
    if (counts[cidx] == 0)
      throw DegenerateFoldError(
          "class " + std::to_string(cidx + 1) + " missing from training fold",
          -1);
    out.centroids.row(cidx) /= static_cast<double>(counts[cidx]);
  }
  return out;
}

std::vector<int> classify_nearest_centroid(const DiscriminantScores& ds,
                                           Eigen::VectorXd* centroid_gap) {
  const Eigen::Index m = ds.scores.rows();
  const Eigen::Index c = ds.centroids.rows();
  if (c == 0) throw ArgumentError("classify_nearest_centroid: no centroids");
  std::vector<int> labels(m);
  if (centroid_gap) centroid_gap->resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    double second = best;
    int arg = 0;
    for (Eigen::Index j = 0; j < c; ++j) {
      double d = (ds.scores.row(i) - ds.centroids.row(j)).norm();
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

CvResult multiclass_crossval(const HatMatrix& hat,
                             const std::vector<int>& labels, int n_classes,
                             const FoldPartition& partition) {
  auto y_mat = indicator_matrix(labels, n_classes);
  auto fits = os_step1_cv(hat, y_mat, partition);

  const int n = partition.n_samples;
  CvResult res;
  res.test_indices = partition.folds;
  res.predicted_labels.assign(n, 0);
  res.scores = Eigen::MatrixXd::Zero(n, n_classes - 1);
  res.centroid_gap = Eigen::VectorXd::Zero(n);

  for (const auto& fold : fits) {
    Eigen::MatrixXd y_tr = gather_rows(y_mat.y, fold.train_indices);
    auto os = os_step2(fold.y_dot_tr, y_tr);
    std::vector<int> labels_tr(fold.train_indices.size());
    for (std::size_t i = 0; i < fold.train_indices.size(); ++i)
      labels_tr[i] = labels[fold.train_indices[i]];
    auto ds = discriminant_scores(fold.y_dot_te, os, fold.y_dot_tr, labels_tr,
                                  n_classes);
    Eigen::VectorXd gap;
    auto pred = classify_nearest_centroid(ds, &gap);

    std::vector<int> truth(fold.test_indices.size());
    for (std::size_t i = 0; i < fold.test_indices.size(); ++i) {
      int idx = fold.test_indices[i];
      res.predicted_labels[idx] = pred[i];
      res.scores.row(idx).head(ds.scores.cols()) =
          ds.scores.row(static_cast<Eigen::Index>(i));
      res.centroid_gap(idx) = gap(static_cast<Eigen::Index>(i));
      truth[i] = labels[idx];
    }
    res.fold_performance.push_back(accuracy(pred, truth));
  }
  double sum = 0.0;
  for (double v : res.fold_performance) sum += v;
  res.mean_performance = sum / res.fold_performance.size();
  return res;
}

std::vector<double> permutation_test_multiclass(const HatMatrix& hat,
                                                const std::vector<int>& labels,
                                                int n_classes,
                                                const FoldPartition& partition,
                                                const PermutationPlan& plan,
                                                int n_threads) {
  const int t_total = plan.size();
  std::vector<double> out(t_total);
  auto run_one = [&](int t) {
    auto permuted = permute_labels(labels, plan, t);
    out[t] =
        multiclass_crossval(hat, permuted, n_classes, partition).mean_performance;
  };
  if (n_threads <= 1 || t_total <= 1) {
    for (int t = 0; t < t_total; ++t) run_one(t);
  } else {
    std::vector<std::thread> workers;
    int n_workers = std::min(n_threads, t_total);
    for (int w = 0; w < n_workers; ++w)
      workers.emplace_back([&, w] {
        for (int t = w; t < t_total; t += n_workers) run_one(t);
      });
    for (auto& th : workers) th.join();
  }
  return out;
}

Eigen::MatrixXd optimal_scoring_full(const AugmentedDesign& design,
                                     const std::vector<int>& labels,
                                     int n_classes, double lambda) {
  auto y_mat = indicator_matrix(labels, n_classes);
  auto weights = fit_ridge(design, y_mat.y, RidgeSpec{lambda});
  Eigen::MatrixXd y_hat = design.xa * weights.beta;
  auto os = os_step2(y_hat, y_mat.y);
  Eigen::MatrixXd b = weights.beta.topRows(design.p());  // bias row omitted
  return b * os.theta * os.d_scale.asDiagonal();
}

}  // namespace fastcv
