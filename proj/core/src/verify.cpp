#include "fastcv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "fastcv/fastcv_binary.hpp"
#include "fastcv/fastcv_multiclass.hpp"
#include "fastcv/lda_oracle.hpp"
#include "fastcv/lsq_core.hpp"
#include "fastcv/metrics.hpp"
#include "fastcv/synthgen.hpp"

namespace fastcv {
namespace {

double rel_dev(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

double max_rel_dev(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    worst = std::max(worst, rel_dev(a(i), b(i)));
  return worst;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.dot(b) / (a.norm() * b.norm());
}

// Two-class dataset with the requested class ratio, carved out of a larger
// balanced draw so both classes keep the same generating distribution.
Dataset make_unbalanced(int n_samples, int n_features, int ratio_num,
                        std::uint64_t seed) {
  int n1 = n_samples * ratio_num / (ratio_num + 1);
  int n2 = n_samples - n1;
  if (n2 < 2) {
    n2 = 2;
    n1 = n_samples - 2;
  }
  Dataset big = make_synthetic(2 * n1, n_features, 2, seed);
  std::vector<int> rows;
  for (int i = 0; i < n1; ++i) rows.push_back(i);
  for (int i = 0; i < n2; ++i) rows.push_back(n1 + i);
  return subset(big, rows);
}

// Random binary classification instance for the appendix properties.
Dataset random_binary(int n, int p, std::uint64_t seed) {
  return make_synthetic(n, p, 2, seed);
}

Eigen::VectorXd coded_response(const std::vector<int>& labels, double z1,
                               double z2) {
  Eigen::VectorXd y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    y(static_cast<Eigen::Index>(i)) = labels[i] == 1 ? z1 : z2;
  return y;
}

}  // namespace

PropertyReport check_binary_oracle_equivalence(const VerifyOptions& opt) {
  PropertyReport rep{"binary_oracle_equivalence", 0.0, 1e-8, false, ""};
  for (int n : {16, 60})
    for (int p : {2, 10, 40, 80})
      for (int k : {2, 5, n})
        for (double lambda : {0.01, 1.0, 10.0})
          for (int s = 0; s < 5; ++s) {
            auto seed = mix_seed(opt.seed, {1, static_cast<std::uint64_t>(n),
                                            static_cast<std::uint64_t>(p),
                                            static_cast<std::uint64_t>(k),
                                            static_cast<std::uint64_t>(s)});
            Dataset ds = make_synthetic(n, p, 2, seed);
            FoldPartition part = make_folds(n, k, seed);
            auto hat = hat_matrix(augment(ds.features), RidgeSpec{lambda});
            auto analytic =
                cv_decision_values(hat, labels_to_pm1(ds.labels), part);
            auto naive = naive_crossval(ds, part, CvTask::binary_regressionform,
                                        lambda);
            rep.max_deviation =
                std::max(rep.max_deviation,
                         max_rel_dev(analytic.decision_values,
                                     naive.decision_values));
          }
  rep.pass = rep.max_deviation <= rep.tolerance;
  return rep;
}

PropertyReport check_bias_adjustment_sign_agreement(const VerifyOptions& opt) {
  PropertyReport rep{"bias_adjustment_sign_agreement", 0.0, 0.0, false, ""};
  long mismatches = 0, compared = 0;
  for (int n : {16, 60})
    for (int p : {2, 10, 40, 80})
      for (int k : {2, 5, n})
        for (double lambda : {0.01, 1.0, 10.0})
          for (int ratio : {1, 3, 7})
            for (int s = 0; s < 5; ++s) {
              auto seed = mix_seed(opt.seed,
                                   {2, static_cast<std::uint64_t>(n),
                                    static_cast<std::uint64_t>(p),
                                    static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(ratio),
                                    static_cast<std::uint64_t>(s)});
              Dataset ds = make_unbalanced(n, p, ratio, seed);
              FoldPartition part =
                  make_folds(ds.n_samples(), std::min(k, ds.n_samples()), seed,
                             &ds.labels);
              auto hat = hat_matrix(augment(ds.features), RidgeSpec{lambda});
              auto analytic =
                  cv_decision_values(hat, labels_to_pm1(ds.labels), part);
              if (!opt.skip_bias_adjust)
                adjust_bias(hat, labels_to_pm1(ds.labels), part, analytic);
              const Eigen::VectorXd& vals = opt.skip_bias_adjust
                                                ? analytic.decision_values
                                                : analytic.adjusted_values;
              auto oracle =
                  naive_crossval(ds, part, CvTask::binary_lda, lambda);
              for (Eigen::Index i = 0; i < vals.size(); ++i) {
                if (std::abs(vals(i)) <= 1e-10) continue;
                ++compared;
                bool a = vals(i) >= 0.0;
                bool b = oracle.decision_values(i) >= 0.0;
                if (a != b) ++mismatches;
              }
            }
  rep.max_deviation = static_cast<double>(mismatches);
  rep.pass = mismatches == 0;
  std::ostringstream detail;
  detail << mismatches << " sign mismatches over " << compared << " samples";
  rep.detail = detail.str();
  return rep;
}

PropertyReport check_multiclass_label_equivalence(const VerifyOptions& opt) {
  PropertyReport rep{"multiclass_label_equivalence", 0.0, 0.0, false, ""};
  long mismatches = 0, excluded = 0, total = 0;
  for (int n : {30, 90})
    for (int p : {4, 20, 60})
      for (int c : {3, 5})
        for (int k : {3, 5})
          for (double lambda : {0.1, 1.0})
            for (int s = 0; s < 5; ++s) {
              auto seed = mix_seed(opt.seed,
                                   {3, static_cast<std::uint64_t>(n),
                                    static_cast<std::uint64_t>(p),
                                    static_cast<std::uint64_t>(c),
                                    static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(s)});
              Dataset ds = make_synthetic(n, p, c, seed);
              FoldPartition part = make_folds(n, k, seed, &ds.labels);
              auto hat = hat_matrix(augment(ds.features), RidgeSpec{lambda});
              auto analytic = multiclass_crossval(hat, ds.labels, c, part);
              auto naive =
                  naive_crossval(ds, part, CvTask::multiclass, lambda);
              for (int i = 0; i < n; ++i) {
                ++total;
                if (std::min(analytic.centroid_gap(i), naive.centroid_gap(i)) <
                    1e-9) {
                  ++excluded;
                  continue;
                }
                if (analytic.predicted_labels[i] != naive.predicted_labels[i])
                  ++mismatches;
              }
            }
  rep.max_deviation = static_cast<double>(mismatches);
  bool exclusion_ok = excluded * 100 < total;
  rep.pass = mismatches == 0 && exclusion_ok;
  std::ostringstream detail;
  detail << mismatches << " label mismatches, " << excluded << "/" << total
         << " samples excluded as ambiguous";
  rep.detail = detail.str();
  return rep;
}

PropertyReport check_os_lda_full_data_identity(const VerifyOptions& opt) {
  PropertyReport rep{"os_lda_full_data_identity", 0.0, 1e-6, false, ""};
  const double lambdas[] = {0.0, 0.1, 1.0};
  for (int i = 0; i < 20; ++i) {
    int c = 3 + i % 3;
    int p = 6 + (i % 4) * 5;
    int n = 60;
    double lambda = lambdas[i % 3];
    auto seed = mix_seed(opt.seed, {4, static_cast<std::uint64_t>(i)});
    Dataset ds = make_synthetic(n, p, c, seed);
    Eigen::MatrixXd w_os =
        optimal_scoring_full(augment(ds.features), ds.labels, c, lambda);
    Eigen::MatrixXd w_cl = fit_multiclass_lda(ds, lambda).w_mat;
    for (Eigen::Index j = 0; j < std::min(w_os.cols(), w_cl.cols()); ++j) {
      double cos = std::abs(cosine(w_os.col(j), w_cl.col(j)));
      rep.max_deviation = std::max(rep.max_deviation, 1.0 - cos);
    }
  }
  rep.pass = rep.max_deviation <= rep.tolerance;
  return rep;
}

PropertyReport check_permutation_path_equality(const VerifyOptions& opt) {
  PropertyReport rep{"permutation_path_equality", 0.0, 1e-8, false, ""};
  bool hat_identical = true;

  {  // binary, accuracy and AUC
    auto seed = mix_seed(opt.seed, {5, 0});
    Dataset ds = make_synthetic(40, 10, 2, seed);
    FoldPartition part = make_folds(40, 5, seed, &ds.labels);
    PermutationPlan plan = make_permutation_plan(50, 40, seed);
    auto design = augment(ds.features);
    auto hat = hat_matrix(design, RidgeSpec{0.5});
    for (Metric metric : {Metric::accuracy, Metric::auc}) {
      auto analytic = permutation_test_binary(hat, labels_to_pm1(ds.labels),
                                              part, plan, metric,
                                              /*adjust=*/false);
      auto naive = naive_permutation_test(ds, part, plan,
                                          CvTask::binary_regressionform, 0.5,
                                          metric);
      for (std::size_t t = 0; t < analytic.size(); ++t)
        rep.max_deviation =
            std::max(rep.max_deviation, rel_dev(analytic[t], naive[t]));
    }
    // H depends on the features alone: recomputing after a permutation must
    // reproduce it bit for bit.
    auto hat2 = hat_matrix(design, RidgeSpec{0.5});
    hat_identical = (hat.h.array() == hat2.h.array()).all() &&
                    (hat.s.array() == hat2.s.array()).all();
  }
  {  // multiclass
    auto seed = mix_seed(opt.seed, {5, 1});
    Dataset ds = make_synthetic(45, 8, 3, seed);
    FoldPartition part = make_folds(45, 3, seed, &ds.labels);
    PermutationPlan plan = make_permutation_plan(50, 45, seed);
    auto hat = hat_matrix(augment(ds.features), RidgeSpec{0.5});
    auto analytic = permutation_test_multiclass(hat, ds.labels, 3, part, plan);
    auto naive =
        naive_permutation_test(ds, part, plan, CvTask::multiclass, 0.5);
    for (std::size_t t = 0; t < analytic.size(); ++t)
      rep.max_deviation =
          std::max(rep.max_deviation, rel_dev(analytic[t], naive[t]));
  }
  rep.pass = rep.max_deviation <= rep.tolerance && hat_identical;
  rep.detail = hat_identical ? "hat matrix recompute bit-identical"
                             : "hat matrix recompute differs";
  return rep;
}

PropertyReport check_lemma1_eigen_structure(const VerifyOptions& opt) {
  PropertyReport rep{"lemma1_eigen_structure", 0.0, 1e-8, false, ""};
  std::mt19937_64 rng(mix_seed(opt.seed, {6}));
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> size_dist(2, 20);
  for (int trial = 0; trial < 100; ++trial) {
    int p = 2 + trial % 9;
    Eigen::MatrixXd a(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) a(i, j) = gauss(rng);
    Eigen::MatrixXd s_w =
        a.transpose() * a + 0.1 * Eigen::MatrixXd::Identity(p, p);
    Eigen::VectorXd m1(p), m2(p);
    for (int i = 0; i < p; ++i) {
      m1(i) = gauss(rng);
      m2(i) = gauss(rng);
    }
    double n1 = size_dist(rng), n2 = size_dist(rng);
    Eigen::VectorXd d = m1 - m2;
    Eigen::MatrixXd s_b = n1 * n2 / (n1 + n2) * d * d.transpose();

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s_b, s_w);
    double ev_max = es.eigenvalues()(p - 1);
    double expected = n1 * n2 / (n1 + n2) * d.dot(s_w.ldlt().solve(d));
    rep.max_deviation = std::max(
        rep.max_deviation, std::abs(ev_max - expected) / std::abs(expected));
    if (!(ev_max > 0.0)) rep.max_deviation = std::max(rep.max_deviation, 1.0);
    for (int j = 0; j + 1 < p; ++j)
      rep.max_deviation = std::max(
          rep.max_deviation, std::abs(es.eigenvalues()(j)) / ev_max);
    double cos = std::abs(
        cosine(es.eigenvectors().col(p - 1), s_w.ldlt().solve(d)));
    rep.max_deviation = std::max(rep.max_deviation, 1.0 - cos);
  }
  rep.pass = rep.max_deviation <= rep.tolerance;
  return rep;
}

PropertyReport check_appendix_a_collinearity(const VerifyOptions& opt) {
  PropertyReport rep{"appendix_a_collinearity", 0.0, 1e-8, false, ""};
  for (int trial = 0; trial < 50; ++trial) {
    auto seed = mix_seed(opt.seed, {7, static_cast<std::uint64_t>(trial)});
    Dataset ds = random_binary(30, 5, seed);
    auto design = augment(ds.features);

    Eigen::VectorXd beta_pm =
        fit_ridge(design, labels_to_pm1(ds.labels), RidgeSpec{0.0}).beta;
    Eigen::VectorXd w_reg = beta_pm.head(5);
    Eigen::VectorXd w_cl = fit_binary_lda(ds, 0.0).w;

    double cos = cosine(w_reg, w_cl);
    rep.max_deviation = std::max(rep.max_deviation, 1.0 - cos);  // positive factor

    // Class codes change scale and bias but not the direction of w.
    Eigen::VectorXd beta_z =
        fit_ridge(design, coded_response(ds.labels, 3.0, -0.7), RidgeSpec{0.0})
            .beta;
    double cos_code = std::abs(cosine(beta_z.head(5), w_reg));
    rep.max_deviation = std::max(rep.max_deviation, 1.0 - cos_code);
  }
  rep.pass = rep.max_deviation <= rep.tolerance;
  return rep;
}

PropertyReport check_appendix_b_ridge_correspondence(const VerifyOptions& opt) {
  PropertyReport rep{"appendix_b_ridge_correspondence", 0.0, 1e-8, false, ""};
  for (int trial = 0; trial < 50; ++trial) {
    auto seed = mix_seed(opt.seed, {8, static_cast<std::uint64_t>(trial)});
    int p = 4 + trial % 5;
    Dataset ds = random_binary(24, p, seed);
    for (double lambda : {0.1, 1.0, 10.0}) {
      Eigen::VectorXd beta =
          fit_ridge(augment(ds.features), labels_to_pm1(ds.labels),
                    RidgeSpec{lambda})
              .beta;
      Eigen::VectorXd w_cl = fit_binary_lda(ds, lambda).w;
      double cos = cosine(beta.head(p), w_cl);  // positive factor required
      rep.max_deviation = std::max(rep.max_deviation, 1.0 - cos);
    }
  }
  rep.pass = rep.max_deviation <= rep.tolerance;
  return rep;
}

PropertyReport check_shrinkage_ridge_direction(const VerifyOptions& opt) {
  PropertyReport rep{"shrinkage_ridge_direction", 0.0, 1e-8, false, ""};
  for (int trial = 0; trial < 50; ++trial) {
    auto seed = mix_seed(opt.seed, {9, static_cast<std::uint64_t>(trial)});
    Dataset ds = random_binary(20, 6, seed);
    double nu = scatter_trace_scale(scatter_matrices(ds).s_w);
    for (double ls : {0.1, 0.5, 0.9}) {
      Eigen::VectorXd w_shrink =
          fit_binary_lda(ds, ls, RegMode::shrinkage).w;
      Eigen::VectorXd w_ridge =
          fit_binary_lda(ds, shrink_to_ridge(ls, nu), RegMode::ridge).w;
      double cos = std::abs(cosine(w_shrink, w_ridge));
      rep.max_deviation = std::max(rep.max_deviation, 1.0 - cos);
    }
  }
  rep.pass = rep.max_deviation <= rep.tolerance;
  return rep;
}

PropertyReport check_statistical_sanity(const VerifyOptions& opt) {
  PropertyReport rep{"statistical_sanity", 0.0, 0.0, false, ""};

  // Pure noise: labels decoupled from the features.
  auto seed = mix_seed(opt.seed, {10});
  Dataset noise = make_synthetic(200, 20, 2, seed);
  std::mt19937_64 rng(mix_seed(opt.seed, {10, 1}));
  std::shuffle(noise.labels.begin(), noise.labels.end(), rng);
  FoldPartition part = make_folds(200, 10, seed, &noise.labels);
  PermutationPlan plan = make_permutation_plan(101, 200, seed);
  double lambda = 1e-3 * scatter_trace_scale(scatter_matrices(noise).s_w);
  auto hat = hat_matrix(augment(noise.features), RidgeSpec{lambda});
  auto perf = permutation_test_binary(hat, labels_to_pm1(noise.labels), part,
                                      plan, Metric::accuracy, /*adjust=*/true);
  double mean_acc = 0.0;
  for (std::size_t t = 1; t < perf.size(); ++t) mean_acc += perf[t];
  mean_acc /= static_cast<double>(perf.size() - 1);
  bool chance_ok = mean_acc >= 0.45 && mean_acc <= 0.55;

  // Separable data must reach the p-value floor 1/(T+1).
  Dataset sep = make_synthetic(60, 5, 2, mix_seed(opt.seed, {10, 2}));
  for (int i = 0; i < sep.n_samples(); ++i)
    sep.features(i, 0) += sep.labels[i] == 1 ? 10.0 : -10.0;
  FoldPartition sep_part = make_folds(60, 5, seed, &sep.labels);
  PermutationPlan sep_plan = make_permutation_plan(101, 60, seed);
  double sep_lambda = 1e-3 * scatter_trace_scale(scatter_matrices(sep).s_w);
  auto sep_hat = hat_matrix(augment(sep.features), RidgeSpec{sep_lambda});
  auto sep_perf =
      permutation_test_binary(sep_hat, labels_to_pm1(sep.labels), sep_part,
                              sep_plan, Metric::accuracy, /*adjust=*/true);
  int ge = 0;
  for (std::size_t t = 1; t < sep_perf.size(); ++t)
    if (sep_perf[t] >= sep_perf[0]) ++ge;
  double p_value = (1.0 + ge) / static_cast<double>(sep_perf.size());
  bool p_ok = p_value == 1.0 / 101.0;

  rep.max_deviation = std::abs(mean_acc - 0.5);
  rep.pass = chance_ok && p_ok;
  std::ostringstream detail;
  detail << "noise mean accuracy " << mean_acc << ", separable p-value "
         << p_value;
  rep.detail = detail.str();
  return rep;
}

std::vector<PropertyReport> run_verification(const VerifyOptions& opt) {
  return {
      check_binary_oracle_equivalence(opt),
      check_bias_adjustment_sign_agreement(opt),
      check_multiclass_label_equivalence(opt),
      check_os_lda_full_data_identity(opt),
      check_permutation_path_equality(opt),
      check_lemma1_eigen_structure(opt),
      check_appendix_a_collinearity(opt),
      check_appendix_b_ridge_correspondence(opt),
      check_shrinkage_ridge_direction(opt),
      check_statistical_sanity(opt),
  };
}

}  // namespace fastcv
