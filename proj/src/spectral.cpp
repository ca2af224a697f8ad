// SPDX-License-Identifier: Apache-2.0
#include "ftkl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ftkl/errors.hpp"

namespace ftkl::spectral {

Tridiag sector_operator(int r, double t, int ell, double rho_max, int cells) {
  if (r < 2 || t <= 0.0 || rho_max <= 0.0 || cells < 8)
    fail_domain("sector: bad arguments");
  double h = rho_max / cells;
  bool keep0 = (ell == 0);
  // Unknowns: nodes 1..cells-1, plus node 0 when kept.
  int n = cells - 1 + (keep0 ? 1 : 0);
  int base = keep0 ? 0 : 1; // node index of unknown 0
  std::vector<double> K(n, 0.0), E(n > 0 ? n - 1 : 0, 0.0), M(n, 0.0);
  // Exact masses of int rho drho over the node boxes: [0, h/2] for node 0,
  // width h around interior nodes.
  for (int i = 0; i < n; ++i) {
    int node = base + i;
    M[i] = node == 0 ? h * h / 8.0 : h * (node * h);
  }
  for (int cell = 0; cell < cells; ++cell) {
    double mid = (cell + 0.5) * h;
    double C = -double(ell) / mid + t * r * std::pow(mid, r - 1);
    double bl = -1.0 / h + 0.5 * C; // weight on the left node
    double br = 1.0 / h + 0.5 * C;  // weight on the right node
    double fac = 0.25 * mid * h;
    int li = cell - base;     // unknown index of the left node
    int ri = cell + 1 - base; // right node
    bool lok = li >= 0 && li < n;
    bool rok = ri >= 0 && ri < n;
    if (lok) K[li] += fac * bl * bl;
    if (rok) K[ri] += fac * br * br;
    if (lok && rok) E[li] += fac * bl * br;
  }
  Tridiag T;
  T.diag.resize(n);
  T.off.resize(n > 0 ? n - 1 : 0);
  for (int i = 0; i < n; ++i) T.diag[i] = K[i] / M[i];
  for (int i = 0; i + 1 < n; ++i) T.off[i] = E[i] / std::sqrt(M[i] * M[i + 1]);
  return T;
}

namespace {

// Number of eigenvalues of T strictly below x (Sturm sequence count).
// Near-zero pivots are clamped to -pivmin after each step so that exact
// hits on minor eigenvalues count as below.
int count_below(const Tridiag &T, double x) {
  int n = int(T.diag.size());
  double scale = std::abs(x);
  for (double d : T.diag) scale = std::max(scale, std::abs(d));
  for (double e : T.off) scale = std::max(scale, e * e);
  double pivmin = std::max(scale, 1.0) * 1e-30;
  int cnt = 0;
  double q = T.diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++cnt;
  for (int i = 1; i < n; ++i) {
    q = T.diag[i] - x - T.off[i - 1] * T.off[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++cnt;
  }
  return cnt;
}

} // namespace

std::vector<double> lowest_eigenvalues(const Tridiag &T, int k, double tol) {
  int n = int(T.diag.size());
  if (k < 1 || k > n) fail_domain("eigenvalues: bad count");
  double lo = T.diag[0], hi = T.diag[0];
  for (int i = 0; i < n; ++i) {
    double e = (i > 0 ? std::abs(T.off[i - 1]) : 0.0) +
               (i + 1 < n ? std::abs(T.off[i]) : 0.0);
    lo = std::min(lo, T.diag[i] - e);
    hi = std::max(hi, T.diag[i] + e);
  }
  std::vector<double> out(k);
  for (int j = 0; j < k; ++j) {
    double a = lo, b = hi;
    // smallest x with count_below(x) >= j+1
    for (int it = 0; it < 200; ++it) {
      double m = 0.5 * (a + b);
      if (count_below(T, m) >= j + 1)
        b = m;
      else
        a = m;
      if (b - a <= tol * std::max(1.0, std::abs(b))) break;
    }
    out[j] = 0.5 * (a + b);
  }
  return out;
}

namespace {

double gap_eigenvalue(int r, double t, int ell, double rho_max, int cells,
                      bool skip_zero) {
  Tridiag T = sector_operator(r, t, ell, rho_max, cells);
  auto ev = lowest_eigenvalues(T, skip_zero ? 2 : 1);
  return skip_zero ? ev[1] : ev[0];
}

} // namespace

GapReport gap(int r, double t, const GapConfig &cfg) {
  if (r < 2 || t <= 0.0) fail_domain("gap: bad arguments");
  if (cfg.sector_range < 2) fail_usage("gap: sector range too small");
  GapReport rep;
  rep.rho_max =
      cfg.rho_pad * std::pow((cfg.sector_range + 12.0) / t, 1.0 / r);
  rep.zero_threshold = cfg.zero_threshold_factor * std::pow(t, 2.0 / r);
  double scale = std::pow(t, 2.0 / r);
  rep.min_nonzero = 1e300;
  rep.max_zero = 0.0;
  for (int ell = -cfg.sector_range; ell <= cfg.sector_range; ++ell) {
    Tridiag T = sector_operator(r, t, ell, rep.rho_max, cfg.cells);
    auto ev = lowest_eigenvalues(T, 2);
    SectorSummary s;
    s.ell = ell;
    s.lam0 = ev[0];
    s.lam1 = ev[1];
    s.zero_mode = ev[0] < rep.zero_threshold;
    if (s.zero_mode != (ell >= 0))
      fail_certification("gap: zero-mode pattern broken in sector " +
                         std::to_string(ell) + " (lambda0 = " +
                         std::to_string(ev[0] / scale) + " t^{2/r})");
    double nonzero = s.zero_mode ? ev[1] : ev[0];
    if (s.zero_mode) rep.max_zero = std::max(rep.max_zero, ev[0]);
    if (nonzero < rep.min_nonzero) {
      rep.min_nonzero = nonzero;
      rep.argmin_ell = ell;
    }
    rep.sectors.push_back(s);
  }
  // Unambiguous classification: zero modes and the gap must straddle the
  // threshold with a factor of two on each side.
  if (!(rep.max_zero < 0.5 * rep.zero_threshold &&
        rep.min_nonzero > 2.0 * rep.zero_threshold))
    fail_certification("gap: zero-mode threshold is ambiguous");
  // The scan must bracket the minimum: eigenvalues grow toward both ends.
  auto nonzero_of = [&](int idx) {
    const auto &s = rep.sectors[idx];
    return s.zero_mode ? s.lam1 : s.lam0;
  };
  // Negative sectors grow like 2t|ell|, so the left end must be strictly
  // above its neighbor and must not attain the minimum.  Positive sectors
  // can be exactly flat (quadratic model), so the right end only needs to
  // be non-decreasing within a percent.
  int last = int(rep.sectors.size()) - 1;
  if (rep.argmin_ell <= -cfg.sector_range || !(nonzero_of(0) > nonzero_of(1)))
    fail_certification("gap: minimum not bracketed below; widen the sector range");
  if (nonzero_of(last) < 0.99 * nonzero_of(last - 1))
    fail_certification("gap: eigenvalues still falling at the top sector; widen the sector range");
  rep.gap = rep.min_nonzero;
  // Mesh certificate on the achieved gap.
  bool skip = rep.argmin_ell >= 0;
  double fine =
      gap_eigenvalue(r, t, rep.argmin_ell, rep.rho_max, 2 * cfg.cells, skip);
  rep.mesh_change = std::abs(fine - rep.gap) / std::abs(fine);
  if (rep.mesh_change > cfg.mesh_tol)
    fail_accuracy("gap: mesh not converged (relative change " +
                  std::to_string(rep.mesh_change) + ")");
  rep.gap = fine; // report the finer value
  rep.min_nonzero = fine;
  return rep;
}

ScalingFit gap_scaling(int r, const std::vector<double> &t_values,
                       const GapConfig &cfg) {
  if (t_values.size() < 2) fail_usage("gap scaling: need at least two t values");
  ScalingFit fit;
  for (double t : t_values) {
    auto rep = gap(r, t, cfg);
    fit.t_values.push_back(t);
    fit.gaps.push_back(rep.gap);
  }
  // Least squares line through (log t, log gap).
  size_t n = fit.t_values.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    double x = std::log(fit.t_values[i]), y = std::log(fit.gaps[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double den = n * sxx - sx * sx;
  if (den <= 0.0) fail_usage("gap scaling: t values must be distinct");
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

} // namespace ftkl::spectral
