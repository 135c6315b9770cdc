#include "fastcv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fastcv/errors.hpp"

namespace fastcv {

double accuracy(const Eigen::VectorXd& decision_values,
                const Eigen::VectorXd& true_labels_pm1) {
  if (decision_values.size() != true_labels_pm1.size())
    throw ArgumentError("accuracy: length mismatch");
  if (decision_values.size() == 0)
    throw ArgumentError("accuracy: empty input");
  int correct = 0;
  for (Eigen::Index i = 0; i < decision_values.size(); ++i) {
    double predicted = decision_values(i) >= 0.0 ? 1.0 : -1.0;
    if (predicted == true_labels_pm1(i)) ++correct;
  }
  return static_cast<double>(correct) / decision_values.size();
}

double accuracy(const std::vector<int>& predicted,
                const std::vector<int>& truth) {
  if (predicted.size() != truth.size())
    throw ArgumentError("accuracy: length mismatch");
  if (predicted.empty()) throw ArgumentError("accuracy: empty input");
  int correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == truth[i]) ++correct;
  return static_cast<double>(correct) / predicted.size();
}

double auc(const Eigen::VectorXd& decision_values,
           const Eigen::VectorXd& true_labels_pm1) {
  if (decision_values.size() != true_labels_pm1.size())
    throw ArgumentError("auc: length mismatch");
  const Eigen::Index n = decision_values.size();
  Eigen::Index n_pos = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (true_labels_pm1(i) > 0) ++n_pos;
  Eigen::Index n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw UndefinedMetricError("auc: both classes must be present");

  // Average ranks for ties, then the Mann-Whitney statistic.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return decision_values(a) < decision_values(b);
  });
  std::vector<double> rank(n);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n &&
           decision_values(order[j + 1]) == decision_values(order[i]))
      ++j;
    double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  double rank_sum_pos = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (true_labels_pm1(k) > 0) rank_sum_pos += rank[k];
  double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * (n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double binary_metric(Metric metric, const Eigen::VectorXd& decision_values,
                     const Eigen::VectorXd& true_labels_pm1) {
  return metric == Metric::accuracy
             ? accuracy(decision_values, true_labels_pm1)
             : auc(decision_values, true_labels_pm1);
}

double relative_efficiency(double time_standard, double time_analytic) {
  if (!(time_standard > 0.0) || !(time_analytic > 0.0))
    throw ArgumentError("relative_efficiency: times must be positive");
  return std::log10(time_standard / time_analytic);
}

}  // namespace fastcv
