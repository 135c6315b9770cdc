#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fastcv/cv_result.hpp"
#include "fastcv/lsq_core.hpp"
#include "fastcv/metrics.hpp"
#include "fastcv/synthgen.hpp"

namespace fastcv {

/// Cross-validated decision values from the single full-data fit:
/// per fold, e_dot = (I - H_Te)^-1 e_hat and y_dot = y_Te - e_dot.
/// The model is never refit. Works for +/-1 labels or continuous responses.
CvResult cv_decision_values(const HatMatrix& hat,
                            const Eigen::VectorXd& response,
                            const FoldPartition& partition);

/// Replaces the regression bias by the LDA centroid-midpoint bias per fold,
/// using cross-validated training-set fits recovered without refitting.
/// Fills raw.adjusted_values. Requires +/-1 labels.
void adjust_bias(const HatMatrix& hat, const Eigen::VectorXd& labels_pm1,
                 const FoldPartition& partition, CvResult& raw);

/// Per-permutation fold-averaged performance; H is computed once by the
/// caller and reused. Entry 0 is the unpermuted result. Results are
/// bit-identical regardless of n_threads.
std::vector<double> permutation_test_binary(const HatMatrix& hat,
                                            const Eigen::VectorXd& labels_pm1,
                                            const FoldPartition& partition,
                                            const PermutationPlan& plan,
                                            Metric metric, bool adjust,
                                            int n_threads = 1);

}  // namespace fastcv
