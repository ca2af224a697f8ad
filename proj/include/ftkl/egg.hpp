// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace ftkl::egg {

// Domain |z1|^2 + |z2|^(2k) < 1 in C^2, coordinates u = |z1|^2, v = |z2|^2.
// Monomial norms are exact Beta integrals:
//   ||z1^a z2^b||^2 = pi^2 B((b+1)/k, a+2) / (k (a+1)).
double log_monomial_normsq(int k, int a, int b);

struct DiagValue {
  double value = 0.0;
  double bound = 0.0; // rigorous bound on the truncation remainder
  long terms = 0;
};

// Kernel on the diagonal: sum_{a,b} u^a v^b / N(a,b).  Rows are summed
// with geometric tail bounds (the term ratios are monotone), and the row
// sums themselves have a closed form that bounds the b-tail, so the
// reported bound is rigorous.  tol is relative to the running value.
DiagValue diagonal_value(int k, double u, double v, double tol = 1e-10);

// Exact closed form on the z2 = 0 axis: a0(k) (1 - u)^{-(2 + 1/k)}.
double axis_exponent(int k);  // 2 + 1/k
double axis_prefactor(int k); // k Gamma(2 + 1/k) / (pi^2 Gamma(1/k))
double axis_diagonal(int k, double u);

enum class BoundaryPath {
  axis,    // (u, v) = (1 + rho, 0): approach through the degenerate point
  generic, // v = 1/4, u = 1 - v^k + rho: strongly pseudoconvex point
};

struct Samples {
  std::vector<double> rho;   // negative, increasing toward 0
  std::vector<double> value; // diagonal kernel values
  std::vector<double> bound; // truncation remainder bounds, one per value
};

Samples boundary_samples(int k, BoundaryPath path,
                         const std::vector<double> &rho, double tol = 1e-10);

} // namespace ftkl::egg
