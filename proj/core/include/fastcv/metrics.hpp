#pragma once

#include <vector>

#include <Eigen/Dense>

namespace fastcv {

enum class Metric { accuracy, auc };

/// Fraction of correct sign predictions; a decision value of exactly 0
/// counts as class +1.
double accuracy(const Eigen::VectorXd& decision_values,
                const Eigen::VectorXd& true_labels_pm1);

/// Fraction of matching labels.
double accuracy(const std::vector<int>& predicted,
                const std::vector<int>& truth);

/// Rank-based (Mann-Whitney) AUC; ties contribute 1/2. Both classes must be
/// present in true_labels_pm1.
double auc(const Eigen::VectorXd& decision_values,
           const Eigen::VectorXd& true_labels_pm1);

double binary_metric(Metric metric, const Eigen::VectorXd& decision_values,
                     const Eigen::VectorXd& true_labels_pm1);

/// log10 of time(standard) / time(analytic); 1.0 means a 10x speedup.
double relative_efficiency(double time_standard, double time_analytic);

}  // namespace fastcv
