#include "fastcv/lsq_core.hpp"

#include <cmath>
#include <string>

#include "fastcv/errors.hpp"

namespace fastcv {
namespace {

constexpr double kRcondThreshold = 1e-12;

void validate_ridge(const RidgeSpec& ridge) {
  if (!std::isfinite(ridge.lambda) || ridge.lambda < 0.0)
    throw ArgumentError("ridge lambda must be finite and non-negative");
}

// Regularized scatter Xa^T Xa + lambda I0; the intercept entry is exempt.
Eigen::MatrixXd regularized_scatter(const AugmentedDesign& design,
                                    const RidgeSpec& ridge) {
  Eigen::MatrixXd a = design.xa.transpose() * design.xa;
  a.diagonal().head(design.p()).array() += ridge.lambda;
  return a;
}

Eigen::LDLT<Eigen::MatrixXd> factorize_scatter(const AugmentedDesign& design,
                                               const RidgeSpec& ridge) {
  validate_ridge(ridge);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(regularized_scatter(design, ridge));
  if (ridge.lambda == 0.0) {
    // rcond() is only meaningful when the factorization succeeded.
    double rc = ldlt.info() == Eigen::Success ? ldlt.rcond() : 0.0;
    if (!(rc > kRcondThreshold))
      throw SingularityError(
          "scatter matrix singular at lambda=0 (rcond estimate " +
              std::to_string(rc) + ")",
          rc);
  }
  return ldlt;
}

}  // namespace

AugmentedDesign augment(const Eigen::MatrixXd& features) {
  if (features.rows() == 0)
    throw ArgumentError("augment: empty feature matrix");
  if (!features.allFinite())
    throw ArgumentError("augment: non-finite feature values");
  AugmentedDesign design;
  design.xa.resize(features.rows(), features.cols() + 1);
  design.xa.leftCols(features.cols()) = features;
  design.xa.col(features.cols()).setOnes();
  return design;
}

ModelWeights fit_ridge(const AugmentedDesign& design,
                       const Eigen::MatrixXd& response,
                       const RidgeSpec& ridge) {
  if (response.rows() != design.xa.rows())
    throw ArgumentError("fit_ridge: response length does not match design");
  auto ldlt = factorize_scatter(design, ridge);
  ModelWeights weights;
  weights.beta = ldlt.solve(design.xa.transpose() * response);
  return weights;
}

HatMatrix hat_matrix(const AugmentedDesign& design, const RidgeSpec& ridge) {
  HatMatrix hat;
  const Eigen::Index d = design.p() + 1;
  if (ridge.lambda > 0.0) {
    // H = W W^T with W = Xa L^-T: W's rows are bounded (|row_i|^2 = h_ii <= 1)
    // and its forward error scales with sqrt(cond), so H stays accurate even
    // when (I - H_Te) is nearly singular downstream.
    validate_ridge(ridge);
    Eigen::LLT<Eigen::MatrixXd> llt(regularized_scatter(design, ridge));
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd w = design.xa;
      llt.matrixU().solveInPlace<Eigen::OnTheRight>(w);
      hat.h = Eigen::MatrixXd::Zero(design.n(), design.n());
      hat.h.selfadjointView<Eigen::Lower>().rankUpdate(w);
      hat.h = hat.h.selfadjointView<Eigen::Lower>();
      hat.s = llt.solve(Eigen::MatrixXd::Identity(d, d));
      hat.s = 0.5 * (hat.s + hat.s.transpose()).eval();
      return hat;
    }
  }
  auto ldlt = factorize_scatter(design, ridge);
  hat.s = ldlt.solve(Eigen::MatrixXd::Identity(d, d));
  hat.s = 0.5 * (hat.s + hat.s.transpose()).eval();
  hat.h = design.xa * hat.s * design.xa.transpose();
  hat.h = 0.5 * (hat.h + hat.h.transpose()).eval();
  return hat;
}

Eigen::MatrixXd woodbury_train_inverse(const Eigen::MatrixXd& s_full,
                                       const Eigen::MatrixXd& design_test) {
  if (design_test.rows() == 0) return s_full;
  if (design_test.cols() != s_full.rows())
    throw ArgumentError("woodbury_train_inverse: dimension mismatch");
  const Eigen::Index m = design_test.rows();
  Eigen::MatrixXd h_te = design_test * s_full * design_test.transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(m, m) - h_te);
  if (!lu.isInvertible())
    throw SingularFoldError("woodbury_train_inverse: (I - H_Te) is singular", -1);
  return s_full +
         s_full * design_test.transpose() * lu.solve(design_test * s_full);
}

double shrink_to_ridge(double lambda_shrink, double nu) {
  if (!(lambda_shrink >= 0.0) || lambda_shrink >= 1.0)
    throw ArgumentError("shrink_to_ridge: lambda_shrink must be in [0, 1)");
  if (!(nu > 0.0)) throw ArgumentError("shrink_to_ridge: nu must be positive");
  return lambda_shrink / (1.0 - lambda_shrink) * nu;
}

double scatter_trace_scale(const Eigen::MatrixXd& within_scatter) {
  if (within_scatter.rows() != within_scatter.cols() ||
      within_scatter.rows() == 0)
    throw ArgumentError("scatter_trace_scale: matrix must be square");
  return within_scatter.trace() / static_cast<double>(within_scatter.rows());
}

}  // namespace fastcv
