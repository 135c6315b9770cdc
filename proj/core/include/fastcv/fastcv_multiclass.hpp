#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fastcv/cv_result.hpp"
#include "fastcv/lsq_core.hpp"
#include "fastcv/synthgen.hpp"

namespace fastcv {

/// One-hot class indicator matrix; each row sums to exactly 1.
struct IndicatorMatrix {
  Eigen::MatrixXd y;  // N x C
};

/// Optimal-score eigenvectors and the diagonal scaling built from them.
struct OptimalScores {
  Eigen::MatrixXd theta;     // C x R, R <= C-1
  Eigen::VectorXd alpha_sq;  // descending, in [0, 1]
  Eigen::VectorXd d_scale;   // entries 1 / (sqrt(N_tr) sqrt(a2 (1 - a2)))
  int dropped = 0;           // components with degenerate alpha^2 in {0, 1}
};

/// Cross-validated multivariate regression fits for one fold.
struct FoldFits {
  std::vector<int> train_indices, test_indices;
  Eigen::MatrixXd y_dot_tr;  // N_tr x C
  Eigen::MatrixXd y_dot_te;  // N_te x C
};

struct DiscriminantScores {
  Eigen::MatrixXd scores;     // M x R
  Eigen::MatrixXd centroids;  // C x R, class means of training scores
};

IndicatorMatrix indicator_matrix(const std::vector<int>& labels,
                                 int n_classes);

/// Step 1 without refitting: the binary update rule applied column-wise to
/// E_hat = Y - HY, one (I - H_Te) factorization shared across the C columns.
std::vector<FoldFits> os_step1_cv(const HatMatrix& hat,
                                  const IndicatorMatrix& y_mat,
                                  const FoldPartition& partition);

/// Step 2: the C x C score eigenproblem Y_tr^T Y_dot_tr theta =
/// alpha^2 diag(class counts) theta. Removes the trivial constant-score
/// eigenpair, sorts by descending alpha^2, clamps roundoff and drops
/// components with alpha^2 in {0, 1}.
OptimalScores os_step2(const Eigen::MatrixXd& y_dot_tr,
                       const Eigen::MatrixXd& y_tr);

/// scores = Y_dot Theta D; centroids are class-wise means of the training
/// scores. The intercept's constant row shift cancels in centroid distances.
DiscriminantScores discriminant_scores(const Eigen::MatrixXd& y_dot,
                                       const OptimalScores& os,
                                       const Eigen::MatrixXd& y_dot_tr,
                                       const std::vector<int>& labels_tr,
                                       int n_classes);

/// Nearest centroid in discriminant space; ties go to the smallest class.
/// centroid_gap, when given, receives the distance gap between the two
/// closest centroids per row.
std::vector<int> classify_nearest_centroid(const DiscriminantScores& scores,
                                           Eigen::VectorXd* centroid_gap = nullptr);

/// Full analytical multiclass cross-validation (steps 1 and 2 per fold).
CvResult multiclass_crossval(const HatMatrix& hat,
                             const std::vector<int>& labels, int n_classes,
                             const FoldPartition& partition);

/// Per-permutation fold-averaged accuracy; H computed once by the caller.
std::vector<double> permutation_test_multiclass(const HatMatrix& hat,
                                                const std::vector<int>& labels,
                                                int n_classes,
                                                const FoldPartition& partition,
                                                const PermutationPlan& plan,
                                                int n_threads = 1);

/// Full-data optimal scoring: W = B Theta D, column-collinear with the
/// classical discriminant coordinates.
Eigen::MatrixXd optimal_scoring_full(const AugmentedDesign& design,
                                     const std::vector<int>& labels,
                                     int n_classes, double lambda);

}  // namespace fastcv
