#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fastcv {

struct PropertyReport {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  // Negative-control switch: disables the bias adjustment so the
  // sign-agreement property must fail. Test harness use only.
  bool skip_bias_adjust = false;
};

// Grid-based equivalence and property checks. Each runs its full parameter
// grid and reports the worst deviation observed.
PropertyReport check_binary_oracle_equivalence(const VerifyOptions& opt);
PropertyReport check_bias_adjustment_sign_agreement(const VerifyOptions& opt);
PropertyReport check_multiclass_label_equivalence(const VerifyOptions& opt);
PropertyReport check_os_lda_full_data_identity(const VerifyOptions& opt);
PropertyReport check_permutation_path_equality(const VerifyOptions& opt);
PropertyReport check_lemma1_eigen_structure(const VerifyOptions& opt);
PropertyReport check_appendix_a_collinearity(const VerifyOptions& opt);
PropertyReport check_appendix_b_ridge_correspondence(const VerifyOptions& opt);
PropertyReport check_shrinkage_ridge_direction(const VerifyOptions& opt);
PropertyReport check_statistical_sanity(const VerifyOptions& opt);

/// Runs every registered property in a fixed order.
std::vector<PropertyReport> run_verification(const VerifyOptions& opt);

}  // namespace fastcv
