#pragma once

// Exact-identity checks shared by `mhkz verify` and the acceptance suite.
// Each check reports the largest deviation it saw against its tolerance.

#include <string>
#include <vector>

#include "mhk/smolyak.hpp"

namespace mhk {

struct CheckResult {
  std::string name;
  double tolerance = 0.0;
  double measured = 0.0;
  bool passed = false;
};

/// max |A^T A - 2^m I| over m = 1..max_level.
CheckResult check_gram_identity(int max_level, double tolerance = 1e-9);

/// max |<Psi(c), w> - smolyak_eval(c)| over all cell centers c, m = 1..max_level
/// and the given registry functions. weight_perturbation is added to w[0]
/// (mutation testing only).
CheckResult check_exactness(int max_level, const std::vector<std::string>& functions,
                            WeightExponent exponent = WeightExponent::half_width,
                            double weight_perturbation = 0.0, double tolerance = 1e-10);

/// Fine-rectangle count (m+1) 2^m and, per width, disjoint unit coverage.
/// Measured is the total count mismatch plus coverage defects.
CheckResult check_rectangle_counts(int max_level);

/// Every located rectangle contains its point (random points, each level).
CheckResult check_locate_consistency(int max_level, std::size_t points_per_level);

/// Relative residual of the sampled row after one sparse Kaczmarz step.
CheckResult check_single_step_projection(int max_level, double tolerance = 1e-12);

/// integrate(model) against the mean of evaluate over all cell centers.
CheckResult check_integration_consistency(int max_level, double tolerance = 1e-10);

/// Cross terms E[xi_k1 xi_k2 v_beta_k1 v_beta_k2], k1 != k2, over all cells.
CheckResult check_martingale_orthogonality(int max_level, double tolerance = 1e-12);

struct VerifyOptions {
  int max_level = 5;
  WeightExponent exponent = WeightExponent::half_width;
  double weight_perturbation = 0.0;
};

std::vector<CheckResult> run_exact_checks(const VerifyOptions& options = {});

/// Functions used by the exactness check by default.
const std::vector<std::string>& exactness_functions();

}  // namespace mhk
