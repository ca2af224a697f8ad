// SPDX-License-Identifier: Apache-2.0
#include "ftkl/fitter.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ftkl/errors.hpp"

namespace ftkl {

namespace {

constexpr double kRhoFloor = 1e-8;

// One Aitken step; flat stretches pass through unchanged so exact power
// laws (zero second difference) are not divided by zero.
std::vector<double> accelerate(const std::vector<double>& x) {
  std::vector<double> out;
  out.reserve(x.size() - 2);
  for (size_t i = 0; i + 2 < x.size(); ++i) {
    double d1 = x[i + 1] - x[i];
    double d2 = x[i + 2] - x[i + 1];
    double den = d2 - d1;
    double scale = std::abs(x[i]) + std::abs(x[i + 1]) + std::abs(x[i + 2]);
    if (std::abs(den) <= 1e-14 * (scale + 1.0))
      out.push_back(x[i + 2]);
    else
      out.push_back(x[i + 2] - d2 * d2 / den);
  }
  return out;
}

} // namespace

ExponentEstimate estimate_leading_exponent(std::vector<FitSample> samples) {
  samples.erase(std::remove_if(samples.begin(), samples.end(),
                               [](const FitSample& s) {
                                 return !(s.rho < 0.0) || -s.rho < kRhoFloor;
                               }),
                samples.end());
  if (samples.size() < 3)
    fail_usage("exponent estimate: need at least 3 samples with rho < 0");
  for (const FitSample& s : samples)
    if (!(s.y > 0.0))
      fail_domain("exponent estimate: samples must be positive");
  // Approach order: -rho strictly decreasing toward the boundary.
  std::sort(samples.begin(), samples.end(),
            [](const FitSample& p, const FitSample& q) { return p.rho < q.rho; });
  for (size_t i = 0; i + 1 < samples.size(); ++i)
    if (samples[i + 1].rho <= samples[i].rho)
      fail_usage("exponent estimate: duplicate rho values");

  ExponentEstimate est;
  for (size_t i = 0; i + 1 < samples.size(); ++i) {
    double dly = std::log(samples[i + 1].y) - std::log(samples[i].y);
    double dlr = std::log(-samples[i + 1].rho) - std::log(-samples[i].rho);
    est.slopes.push_back(-dly / dlr);
  }
  for (size_t i = 0; i + 1 < samples.size(); ++i)
    if ((samples[i + 1].y - samples[i].y) * (samples[1].y - samples[0].y) <= 0.0)
      est.monotone = false;
  if (!est.monotone || est.slopes.size() < 3) {
    est.exponent = est.slopes.back();
    double lo = *std::min_element(est.slopes.begin(), est.slopes.end());
    double hi = *std::max_element(est.slopes.begin(), est.slopes.end());
    est.uncertainty = hi - lo;
    return est;
  }
  // Iterated acceleration; the best estimate per level is its last entry,
  // and the spread of the deepest three levels is the quoted uncertainty.
  std::vector<double> level = est.slopes;
  std::vector<double> finals{level.back()};
  while (level.size() >= 3) {
    level = accelerate(level);
    finals.push_back(level.back());
  }
  est.exponent = finals.back();
  size_t n = finals.size();
  double lo = finals[n - 1], hi = finals[n - 1];
  for (size_t i = n - std::min<size_t>(3, n); i < n; ++i) {
    lo = std::min(lo, finals[i]);
    hi = std::max(hi, finals[i]);
  }
  est.uncertainty = hi - lo;
  return est;
}

FitResult fit_power_log(const std::vector<FitSample>& samples, int r, int J,
                        int J_log) {
  if (r < 1 || J < 0 || J_log < 0) fail_usage("power-log fit: bad arguments");
  std::vector<FitSample> pts;
  for (const FitSample& s : samples)
    if (s.rho < 0.0 && -s.rho >= kRhoFloor && std::isfinite(s.y) && s.y != 0.0)
      pts.push_back(s);
  int n = (J + 1) + (J_log + 1);
  if ((int)pts.size() < J + J_log + 2)
    fail_usage("power-log fit: too few usable samples for the requested order");
  double rmin = -pts[0].rho, rmax = -pts[0].rho;
  for (const FitSample& s : pts) {
    rmin = std::min(rmin, -s.rho);
    rmax = std::max(rmax, -s.rho);
  }
  if (rmax < 100.0 * rmin * (1.0 - 1e-12))
    fail_usage("power-log fit: samples must span two decades of -rho");

  int m = (int)pts.size();
  double p0 = 2.0 + 2.0 / r;
  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    double x = -pts[i].rho;
    double w = 1.0 / std::abs(pts[i].y);
    for (int j = 0; j <= J; ++j)
      A(i, j) = w * std::pow(x, -p0 + double(j) / r);
    for (int j = 0; j <= J_log; ++j)
      A(i, J + 1 + j) = w * std::pow(x, j) * std::log(x);
    rhs(i) = w * pts[i].y;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double smax = sv(0);
  double smin = sv(n - 1);
  double thresh = double(m) * std::numeric_limits<double>::epsilon() * smax;

  FitResult out;
  out.r = r;
  out.condition = smin > 0.0 ? smax / smin
                             : std::numeric_limits<double>::infinity();
  out.rank_deficient = smin <= thresh;

  // Minimal-norm solution over the resolved directions only.
  Eigen::VectorXd utb = svd.matrixU().transpose() * rhs;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  for (int d = 0; d < n; ++d)
    if (sv(d) > thresh)
      c += (utb(d) / sv(d)) * svd.matrixV().col(d);

  Eigen::VectorXd res = A * c - rhs;
  out.residual = res.cwiseAbs().maxCoeff();

  // Sensitivity intervals: components along resolved directions carry the
  // usual residual/singular-value bound; any overlap with a discarded
  // direction leaves the coefficient undetermined by the data.
  double rnorm = res.norm();
  std::vector<Coefficient> coeffs(n);
  for (int j = 0; j < n; ++j) {
    double var = 0.0, nullmass = 0.0;
    for (int d = 0; d < n; ++d) {
      double vjd = svd.matrixV()(j, d);
      if (sv(d) > thresh)
        var += (vjd / sv(d)) * (vjd / sv(d));
      else
        nullmass += vjd * vjd;
    }
    coeffs[j].value = c(j);
    if (nullmass > 1e-16) {
      coeffs[j].resolved = false;
      coeffs[j].halfwidth = std::numeric_limits<double>::infinity();
    } else {
      coeffs[j].halfwidth = rnorm * std::sqrt(var);
    }
  }
  out.a.assign(coeffs.begin(), coeffs.begin() + (J + 1));
  out.b.assign(coeffs.begin() + (J + 1), coeffs.end());

  if ((int)pts.size() >= 3) {
    bool positive = true;
    for (const FitSample& s : pts) positive = positive && s.y > 0.0;
    if (positive)
      out.exponent_estimate = estimate_leading_exponent(pts).exponent;
  }
  return out;
}

} // namespace ftkl
