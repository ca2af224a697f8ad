// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

namespace ftkl::bundle {

// Circle-invariant Fourier modes over the affine chart, realized as the
// Bergman density of H_m = {polynomials f : integral |f|^2 e^{-m psi} dA
// finite} against chart Lebesgue measure.  The default potential
// psi = log(1 + |w|^r) has exact Beta-integral norms and curvature
// vanishing to order r - 2 at w = 0.  All reported constants are relative
// to this fixed chart measure; the expansion coefficients change with the
// volume convention, so outputs carry it.
struct BundleMetric {
  int r = 2;
  int m = 1;
  // Optional radial potential F(u), u = |w|^2, replacing log(1 + u^{r/2});
  // norms then fall back to doubling quadrature.
  std::function<double(double)> potential;

  double s() const { return r / 2.0; }
};

// (u F'(u))' for the default family: s^2 u^{s-1} / (1 + u^s)^2.
double curvature_density(int r, double u);

struct SectionNorms {
  std::vector<double> lognormsq; // monomial w^n, n = 0..dimension-1
  int dimension = 0;
};

// ||w^n||^2 = (pi/s) B((n+1)/s, m - (n+1)/s), finite exactly when
// n + 1 < s m; the dimension is the count of finite norms.
SectionNorms section_norms(const BundleMetric& metric);

// sum_n |w|^{2n} e^{-m psi} / ||w^n||^2 at u = |w|^2.
double szego_density(const BundleMetric& metric, double u);
double density_at_zero(const BundleMetric& metric);

// (m-1)/(pi (1+u)^2): the r = 2 family collapses by the binomial theorem.
double closed_form_r2(int m, double u);

struct AsymptoticsReport {
  std::vector<int> m_list;
  std::vector<double> values; // density at the degenerate point w = 0
  double exponent = 0.0;      // fitted leading power of m; target 2/r
  double exponent_uncertainty = 0.0;
  double prefactor = 0.0;        // fitted; target (r/2)/(pi Gamma(2/r))
  double prefactor_closed = 0.0; // the target value
  // Density at the largest m over the matching model-weight prediction
  // (m/2)^{2/r} B_1(0,0); tends to 1.
  double model_ratio = 0.0;
};

AsymptoticsReport degenerate_point_asymptotics(int r,
                                               const std::vector<int>& m_list);

struct PscCoefficients {
  double c0_hat = 0.0;
  double c1_hat = 0.0;
  double c2_hat = 0.0;
  double residual = 0.0;       // max relative fit residual
  double c0_curvature = 0.0;   // curvature_density(u) / pi, the c0 target
};

// Fit density(m) = c0 m + c1 + c2/m at a point u with nonvanishing
// curvature.  Pinned convention: the r = 2 closed form fixes the
// curvature-to-c0 normalization.
PscCoefficients strongly_psc_coefficients(int r, double u,
                                          const std::vector<int>& m_list);

// Stabilizer phase: s if s divides m, else 0, realized three ways.
int phase_factor(int s, int m);            // arithmetic definition
int phase_factor_character(int s, int m);  // rounded root-of-unity sum
int phase_factor_restricted(int s, int m); // monomial-basis realization

} // namespace ftkl::bundle
