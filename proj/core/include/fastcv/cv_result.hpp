#pragma once

#include <vector>

#include <Eigen/Dense>

namespace fastcv {

/// Cross-validated predictions assembled across folds. Binary paths fill
/// decision_values (and adjusted_values after bias adjustment); the
/// multiclass paths fill predicted_labels, scores and centroid_gap.
struct CvResult {
  std::vector<std::vector<int>> test_indices;  // per fold

  Eigen::VectorXd decision_values;  // binary: length N
  Eigen::VectorXd adjusted_values;  // binary, size 0 until adjust_bias

  std::vector<int> predicted_labels;  // multiclass: length N
  Eigen::MatrixXd scores;             // multiclass: N x (C-1)
  Eigen::VectorXd centroid_gap;       // gap between two closest centroids

  std::vector<double> fold_performance;
  double mean_performance = 0.0;
};

}  // namespace fastcv
