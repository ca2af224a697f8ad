// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace ftkl {

// One boundary-approach sample: rho < 0 is the defining-function value at
// the sample point, y the scalar being expanded (kernel value, density, ...).
struct FitSample {
  double rho = 0.0;
  double y = 0.0;
};

struct Coefficient {
  double value = 0.0;
  // Data-consistent interval half-width. Infinite when the coefficient
  // mixes into a null direction of the design matrix (unresolved).
  double halfwidth = 0.0;
  bool resolved = true;
};

struct FitResult {
  int r = 0;
  // Coefficients of (-rho)^{-(2+2/r)+j/r}, j = 0..J.
  std::vector<Coefficient> a;
  // Coefficients of (-rho)^j * log(-rho), j = 0..J_log.
  std::vector<Coefficient> b;
  double residual = 0.0;  // max relative residual over the fitted samples
  double condition = 0.0; // singular-value condition of the weighted design
  double exponent_estimate = 0.0;
  bool rank_deficient = false;
};

struct ExponentEstimate {
  double exponent = 0.0;    // p in y ~ (-rho)^{-p}
  double uncertainty = 0.0; // spread of the last three accelerants
  std::vector<double> slopes;
  bool monotone = true;
};

// Weighted least squares (each sample normalized to unit relative scale)
// in the power-log ladder above. Samples with -rho < 1e-8 are dropped as
// series-truncation noise; at least J + J_log + 2 samples spanning two
// decades of -rho must survive.
FitResult fit_power_log(const std::vector<FitSample>& samples, int r,
                        int J = 4, int J_log = 1);

// Successive log-log slopes, accelerated; order-agnostic, so it applies
// to any sample set with a power-law leading term. Non-monotone data
// yields monotone = false and the raw slopes without acceleration.
ExponentEstimate estimate_leading_exponent(std::vector<FitSample> samples);

} // namespace ftkl
