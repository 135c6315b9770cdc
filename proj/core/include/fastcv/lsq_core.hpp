#pragma once

#include <Eigen/Dense>

namespace fastcv {

/// Design matrix with a trailing column of ones for the intercept.
struct AugmentedDesign {
  Eigen::MatrixXd xa;  // N x (P+1), last column all ones

  int n() const { return static_cast<int>(xa.rows()); }
  int p() const { return static_cast<int>(xa.cols()) - 1; }
};

/// Ridge penalty; the intercept (last diagonal entry) is never penalized.
struct RidgeSpec {
  double lambda = 0.0;
};

/// Regression weights, one column per response.
struct ModelWeights {
  Eigen::MatrixXd beta;  // (P+1) x n_responses
};

/// H = Xa S Xa^T with S = (Xa^T Xa + lambda I0)^-1. Both are materialized
/// once per dataset and shared read-only across folds and permutations.
struct HatMatrix {
  Eigen::MatrixXd h;  // N x N, symmetric
  Eigen::MatrixXd s;  // (P+1) x (P+1)
};

AugmentedDesign augment(const Eigen::MatrixXd& features);

/// Minimizer of ||Xa b - y||^2 + lambda ||b||^2_I0 via an LDLT solve.
/// At lambda = 0 the system must be well conditioned (rcond > 1e-12).
ModelWeights fit_ridge(const AugmentedDesign& design,
                       const Eigen::MatrixXd& response, const RidgeSpec& ridge);

HatMatrix hat_matrix(const AugmentedDesign& design, const RidgeSpec& ridge);

/// Training-set inverse scatter from the full one via the matrix inversion
/// lemma: S + S Xte^T (I - Xte S Xte^T)^-1 Xte S. Exposed for property
/// testing; the cross-validation hot path never forms it.
Eigen::MatrixXd woodbury_train_inverse(const Eigen::MatrixXd& s_full,
                                       const Eigen::MatrixXd& design_test);

/// Ridge penalty equivalent to a given shrinkage parameter:
/// lambda_shrink / (1 - lambda_shrink) * nu.
double shrink_to_ridge(double lambda_shrink, double nu);

/// nu = trace(S_w) / P, the scale that equalises trace(S_w) and trace(nu I).
double scatter_trace_scale(const Eigen::MatrixXd& within_scatter);

}  // namespace fastcv
