// SPDX-License-Identifier: Apache-2.0
#include "ftkl/bundle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "ftkl/errors.hpp"
#include "ftkl/fitter.hpp"
#include "ftkl/fock.hpp"
#include "ftkl/quadrature.hpp"

namespace ftkl::bundle {

namespace {

void check_metric(const BundleMetric& metric) {
  if (metric.r < 2 || metric.r % 2 != 0)
    fail_usage("bundle: r must be an even integer >= 2");
  if (metric.m < 1) fail_usage("bundle: tensor power m must be positive");
  if (metric.m * metric.s() <= 1.0)
    fail_domain("bundle: no finite-norm sections at this tensor power");
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// integral_0^inf u^n e^{-m F(u)} du over doubling geometric segments.
// Finiteness is certified by three consecutive segments decaying by at
// least half; per-segment values come from node-doubled Gauss-Legendre.
double quadrature_lognormsq(const BundleMetric& metric, int n) {
  auto segment = [&](double a, double b) {
    auto val = [&](int nodes) {
      quadrature::Rule g = quadrature::gauss_legendre(nodes, a, b);
      double acc = 0.0;
      for (size_t i = 0; i < g.x.size(); ++i)
        acc += g.w[i] * std::exp(n * std::log(g.x[i]) -
                                 metric.m * metric.potential(g.x[i]));
      return acc;
    };
    quadrature::Refined ref = quadrature::refine(val, 24, 1e-13, 400);
    if (!ref.converged)
      fail_accuracy("bundle: segment quadrature did not converge");
    return ref.value;
  };
  double total = segment(1e-30, 1.0); // u^n integrable at 0 for n >= 0
  double prev = total;
  int decaying = 0;
  double lo = 1.0;
  for (int k = 0; k < 200; ++k) {
    double hi = lo * 2.0;
    double piece = segment(lo, hi);
    total += piece;
    decaying = piece < 0.5 * prev ? decaying + 1 : 0;
    if (decaying >= 3 && piece < 1e-16 * total) {
      // Geometric tail certificate: remaining segments are below
      // piece * sum 2^{-j}.
      return std::log(M_PI) + std::log(total + piece);
    }
    prev = piece;
    lo = hi;
  }
  fail_domain("bundle: norm integral shows no decay (section not in H_m)");
}

} // namespace

double curvature_density(int r, double u) {
  if (r < 2 || r % 2 != 0) fail_usage("bundle: r must be an even integer >= 2");
  if (u < 0.0) fail_domain("bundle: u = |w|^2 must be nonnegative");
  double s = r / 2.0;
  double us = std::pow(u, s);
  double num = s * s * (s >= 1.5 && u == 0.0 ? 0.0 : std::pow(u, s - 1.0));
  return num / ((1.0 + us) * (1.0 + us));
}

SectionNorms section_norms(const BundleMetric& metric) {
  check_metric(metric);
  double s = metric.s();
  SectionNorms out;
  out.dimension = (int)std::ceil(s * metric.m) - 1;
  out.lognormsq.resize(out.dimension);
  for (int n = 0; n < out.dimension; ++n) {
    if (metric.potential) {
      out.lognormsq[n] = quadrature_lognormsq(metric, n);
    } else {
      double a = (n + 1) / s;
      out.lognormsq[n] = std::log(M_PI / s) + log_beta(a, metric.m - a);
    }
  }
  return out;
}

double szego_density(const BundleMetric& metric, double u) {
  if (u < 0.0) fail_domain("bundle: u = |w|^2 must be nonnegative");
  SectionNorms norms = section_norms(metric);
  double s = metric.s();
  double psi = metric.potential ? metric.potential(u) : std::log1p(std::pow(u, s));
  double acc = 0.0;
  for (int n = 0; n < norms.dimension; ++n) {
    double lnterm = (n == 0 && u == 0.0 ? 0.0 : n * std::log(u)) -
                    metric.m * psi - norms.lognormsq[n];
    acc += std::exp(lnterm);
    if (u == 0.0) break; // higher monomials vanish at the fixed point
  }
  return acc;
}

double density_at_zero(const BundleMetric& metric) {
  return szego_density(metric, 0.0);
}

double closed_form_r2(int m, double u) {
  return (m - 1.0) / (M_PI * (1.0 + u) * (1.0 + u));
}

namespace {

void check_m_list(const std::vector<int>& m_list) {
  if (m_list.size() < 4) fail_usage("bundle: need at least 4 tensor powers");
  for (size_t i = 0; i + 1 < m_list.size(); ++i)
    if (m_list[i + 1] <= m_list[i])
      fail_usage("bundle: tensor powers must be strictly increasing");
  // Canonical ladders run in powers of two (16..1024), so the span
  // requirement is six octaves.
  if (m_list.back() < 64 * m_list.front())
    fail_usage("bundle: tensor powers must span six octaves");
}

} // namespace

AsymptoticsReport degenerate_point_asymptotics(int r,
                                               const std::vector<int>& m_list) {
  check_m_list(m_list);
  AsymptoticsReport rep;
  rep.m_list = m_list;
  std::vector<FitSample> samples;
  for (int m : m_list) {
    BundleMetric metric{r, m, nullptr};
    double v = density_at_zero(metric);
    rep.values.push_back(v);
    samples.push_back({-1.0 / m, v});
  }
  ExponentEstimate est = estimate_leading_exponent(samples);
  rep.exponent = est.exponent;
  rep.exponent_uncertainty = est.uncertainty;
  // Prefactor at the fitted-family exponent 2/r: linear model in 1/m for
  // the scaled values picks off the limit with its first correction.
  Eigen::MatrixXd A(m_list.size(), 2);
  Eigen::VectorXd y(m_list.size());
  for (size_t i = 0; i < m_list.size(); ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = 1.0 / m_list[i];
    y(i) = rep.values[i] * std::pow(double(m_list[i]), -2.0 / r);
  }
  Eigen::Vector2d cf = A.colPivHouseholderQr().solve(y);
  rep.prefactor = cf(0);
  rep.prefactor_closed = (r / 2.0) / (M_PI * std::tgamma(2.0 / r));
  double model = std::pow(m_list.back() / 2.0, 2.0 / r) *
                 fock::model_constant_c0_closed(r);
  rep.model_ratio = rep.values.back() / model;
  return rep;
}

PscCoefficients strongly_psc_coefficients(int r, double u,
                                          const std::vector<int>& m_list) {
  check_m_list(m_list);
  if (!(curvature_density(r, u) > 0.0))
    fail_domain("bundle: curvature vanishes at this point");
  PscCoefficients out;
  out.c0_curvature = curvature_density(r, u) / M_PI;
  Eigen::MatrixXd A(m_list.size(), 3);
  Eigen::VectorXd y(m_list.size());
  std::vector<double> vals;
  for (size_t i = 0; i < m_list.size(); ++i) {
    BundleMetric metric{r, m_list[i], nullptr};
    double v = szego_density(metric, u);
    vals.push_back(v);
    double w = 1.0 / v; // unit relative scale per sample
    A(i, 0) = w * m_list[i];
    A(i, 1) = w;
    A(i, 2) = w / m_list[i];
    y(i) = 1.0;
  }
  Eigen::Vector3d cf = A.colPivHouseholderQr().solve(y);
  out.c0_hat = cf(0);
  out.c1_hat = cf(1);
  out.c2_hat = cf(2);
  Eigen::VectorXd res = A * cf - y;
  out.residual = res.cwiseAbs().maxCoeff();
  return out;
}

int phase_factor(int s, int m) {
  if (s < 1 || m < 0) fail_usage("bundle: phase needs s >= 1, m >= 0");
  return m % s == 0 ? s : 0;
}

int phase_factor_character(int s, int m) {
  if (s < 1 || m < 0) fail_usage("bundle: phase needs s >= 1, m >= 0");
  std::complex<double> acc{0.0, 0.0};
  for (int l = 0; l < s; ++l) {
    double arg = 2.0 * M_PI * l * (m % s) / double(s);
    acc += std::complex<double>{std::cos(arg), std::sin(arg)};
  }
  if (std::abs(acc.imag()) > 1e-9)
    fail_certification("bundle: character sum is not real");
  long rounded = std::lround(acc.real());
  if (std::abs(acc.real() - rounded) > 1e-9)
    fail_certification("bundle: character sum is not an integer");
  return (int)rounded;
}

int phase_factor_restricted(int s, int m) {
  if (s < 1 || m < 0) fail_usage("bundle: phase needs s >= 1, m >= 0");
  // Invariant monomials satisfy n + m = 0 mod s; the density at the fixed
  // point keeps only n = 0, present exactly when s divides m, and the
  // quotient chart carries s copies of the fundamental domain.
  int nmin = (s - m % s) % s;
  return nmin == 0 ? s : 0;
}

} // namespace ftkl::bundle
