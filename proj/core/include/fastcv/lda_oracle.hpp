#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fastcv/cv_result.hpp"
#include "fastcv/metrics.hpp"
#include "fastcv/synthgen.hpp"

namespace fastcv {

enum class RegMode { ridge, shrinkage };

enum class CvTask { binary_regressionform, binary_lda, multiclass };

struct ScatterPair {
  Eigen::MatrixXd s_w;  // within-class scatter, P x P
  Eigen::MatrixXd s_b;  // between-classes scatter, P x P, rank <= C-1
};

struct BinaryLdaModel {
  Eigen::VectorXd w;
  double b_lda = 0.0;  // centroid-midpoint bias: -w^T (m1 + m2) / 2
  double b_lr = 0.0;   // regression bias: (N1 - N2)/N - mbar^T w
  Eigen::VectorXd m1, m2, grand_mean;
};

struct MulticlassLdaModel {
  Eigen::MatrixXd w_mat;        // P x (C-1), scaled so W^T (S_w + l I) W = I
  Eigen::VectorXd eigenvalues;  // descending
  Eigen::MatrixXd centroids;    // C x (C-1), projected class means
};

ScatterPair scatter_matrices(const Dataset& dataset);

/// Classical binary LDA. Ridge mode solves (S_w + lambda I) w = m1 - m2;
/// shrinkage mode uses (1-lambda) S_w + lambda nu I with nu = tr(S_w)/P.
BinaryLdaModel fit_binary_lda(const Dataset& dataset, double lambda,
                              RegMode mode = RegMode::ridge);

/// X w + b_lda; predicted class is +1 where the value is >= 0.
Eigen::VectorXd decision_values(const BinaryLdaModel& model,
                                const Eigen::MatrixXd& features);

/// Classical multi-class LDA: the generalized eigenproblem S_b W = S_w W L,
/// solved by factorizing S_w + lambda I and reducing to a symmetric standard
/// problem. Keeps the C-1 largest-eigenvalue directions.
MulticlassLdaModel fit_multiclass_lda(const Dataset& dataset, double lambda);

/// Nearest projected centroid; ties go to the smallest class index.
std::vector<int> predict_multiclass(const MulticlassLdaModel& model,
                                    const Eigen::MatrixXd& features,
                                    Eigen::VectorXd* centroid_gap = nullptr);

/// Retrains from scratch on each training fold (the "standard approach").
/// Serves as the correctness oracle and the benchmark baseline.
CvResult naive_crossval(const Dataset& dataset, const FoldPartition& partition,
                        CvTask task, double lambda,
                        Metric metric = Metric::accuracy);

/// Per-permutation fold-averaged performance using naive_crossval.
std::vector<double> naive_permutation_test(const Dataset& dataset,
                                           const FoldPartition& partition,
                                           const PermutationPlan& plan,
                                           CvTask task, double lambda,
                                           Metric metric = Metric::accuracy);

}  // namespace fastcv
