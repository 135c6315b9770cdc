#include "fastcv/fastcv_binary.hpp"

#include <cmath>
#include <string>
#include <thread>

#include "fastcv/errors.hpp"

namespace fastcv {
namespace {

Eigen::MatrixXd select(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(rows[i], cols[j]);
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = v(idx[i]);
  return out;
}

// Factorization of (I - H_Te) for one fold; throws if singular.
Eigen::PartialPivLU<Eigen::MatrixXd> factor_test_block(const HatMatrix& hat,
                                                       const std::vector<int>& te,
                                                       int fold) {
  Eigen::MatrixXd m =
      Eigen::MatrixXd::Identity(te.size(), te.size()) - select(hat.h, te, te);
  Eigen::FullPivLU<Eigen::MatrixXd> check(m);
  if (!check.isInvertible())
    throw SingularFoldError(
        "(I - H_Te) is singular on fold " + std::to_string(fold), fold);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(m);
}

void validate_pm1(const Eigen::VectorXd& y) {
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y(i) != 1.0 && y(i) != -1.0)
      throw ArgumentError("labels must be +1/-1 in classification mode");
}

}  // namespace

CvResult cv_decision_values(const HatMatrix& hat,
                            const Eigen::VectorXd& response,
                            const FoldPartition& partition) {
  if (hat.h.rows() != response.size())
    throw ArgumentError("cv_decision_values: response does not match hat matrix");
  if (partition.n_samples != static_cast<int>(response.size()))
    throw ArgumentError("cv_decision_values: partition does not match response");
  if (!response.allFinite())
    throw ArgumentError("cv_decision_values: non-finite response");

  Eigen::VectorXd y_hat = hat.h * response;
  Eigen::VectorXd e_hat = response - y_hat;

  CvResult res;
  res.test_indices = partition.folds;
  res.decision_values.resize(response.size());
  for (int f = 0; f < partition.n_folds(); ++f) {
    const auto& te = partition.folds[f];
    auto lu = factor_test_block(hat, te, f);
    // e_dot = (I - H_Te)^-1 e_hat; y_dot = y_Te - e_dot
    Eigen::VectorXd e_dot = lu.solve(gather(e_hat, te));
    for (std::size_t i = 0; i < te.size(); ++i)
      res.decision_values(te[i]) =
          response(te[i]) - e_dot(static_cast<Eigen::Index>(i));
  }
  return res;
}

void adjust_bias(const HatMatrix& hat, const Eigen::VectorXd& labels_pm1,
                 const FoldPartition& partition, CvResult& raw) {
  validate_pm1(labels_pm1);
  if (raw.decision_values.size() != labels_pm1.size())
    throw ArgumentError("adjust_bias: raw result does not match labels");

  Eigen::VectorXd e_hat = labels_pm1 - hat.h * labels_pm1;
  raw.adjusted_values = raw.decision_values;

  for (int f = 0; f < partition.n_folds(); ++f) {
    const auto& te = partition.folds[f];
    auto tr = training_indices(partition, f);
    auto lu = factor_test_block(hat, te, f);
    Eigen::VectorXd x = lu.solve(gather(e_hat, te));

    // Training-set decision values without refitting:
    // e_dot_Tr = e_hat_Tr + H_Tr,Te (I - H_Te)^-1 e_hat_Te
    Eigen::VectorXd e_dot_tr = gather(e_hat, tr) + select(hat.h, tr, te) * x;
    Eigen::VectorXd y_dot_tr = gather(labels_pm1, tr) - e_dot_tr;

    double sum1 = 0.0, sum2 = 0.0;
    int n1 = 0, n2 = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      if (labels_pm1(tr[i]) > 0) {
        sum1 += y_dot_tr(static_cast<Eigen::Index>(i));
        ++n1;
      } else {
        sum2 += y_dot_tr(static_cast<Eigen::Index>(i));
        ++n2;
      }
    }
    if (n1 == 0 || n2 == 0)
      throw DegenerateFoldError(
          "training fold " + std::to_string(f) + " is missing a class", f);

    // b_LR from the class counts; projected class means from class-wise
    // averages of y_dot_Tr with b_LR removed; b_LDA as the negated midpoint.
    double b_lr = static_cast<double>(n1 - n2) / static_cast<double>(tr.size());
    double mu1 = sum1 / n1 - b_lr;
    double mu2 = sum2 / n2 - b_lr;
    double b_lda = -0.5 * (mu1 + mu2);
    double shift = b_lda - b_lr;
    for (int i : te) raw.adjusted_values(i) += shift;
  }
}

std::vector<double> permutation_test_binary(const HatMatrix& hat,
                                            const Eigen::VectorXd& labels_pm1,
                                            const FoldPartition& partition,
                                            const PermutationPlan& plan,
                                            Metric metric, bool adjust,
                                            int n_threads) {
  validate_pm1(labels_pm1);
  const int t_total = plan.size();
  std::vector<double> out(t_total);

  auto run_one = [&](int t) {
    const auto& perm = plan.permutations[t];
    Eigen::VectorXd y(labels_pm1.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = labels_pm1(perm[i]);
    CvResult res = cv_decision_values(hat, y, partition);
    if (adjust) adjust_bias(hat, y, partition, res);
    const Eigen::VectorXd& vals = adjust ? res.adjusted_values
                                         : res.decision_values;
    double sum = 0.0;
    for (const auto& te : partition.folds)
      sum += binary_metric(metric, gather(vals, te), gather(y, te));
    out[t] = sum / partition.n_folds();
  };

  if (n_threads <= 1 || t_total <= 1) {
    for (int t = 0; t < t_total; ++t) run_one(t);
  } else {
    // Permutations are independent; each writes its own slot, so the output
    // is identical for any worker count.
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

}  // namespace fastcv
