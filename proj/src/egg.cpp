// SPDX-License-Identifier: Apache-2.0
#include "ftkl/egg.hpp"

#include <cmath>

#include "ftkl/errors.hpp"

namespace ftkl::egg {

double log_monomial_normsq(int k, int a, int b) {
  if (k < 1 || a < 0 || b < 0) fail_domain("egg norms: bad arguments");
  double c = (b + 1.0) / k;
  double lnB = std::lgamma(c) + std::lgamma(a + 2.0) - std::lgamma(c + a + 2.0);
  return 2.0 * std::log(M_PI) - std::log(double(k)) - std::log(a + 1.0) + lnB;
}

namespace {

// Exact row sum over a at fixed b, in logs to survive deep-boundary points:
//   sum_a u^a v^b / N(a, b)
//     = (k / pi^2) c (c+1) (1-u)^{-(c+2)} v^b,  c = (b+1)/k.
double log_row_sum_exact(int k, double ln1mu, double lnv, int b) {
  double c = (b + 1.0) / k;
  return std::log(k / (M_PI * M_PI)) + std::log(c) + std::log(c + 1.0) -
         (c + 2.0) * ln1mu + (b == 0 ? 0.0 : b * lnv);
}

} // namespace

DiagValue diagonal_value(int k, double u, double v, double tol) {
  if (k < 1 || u < 0.0 || v < 0.0) fail_domain("egg diagonal: bad arguments");
  double slack = 1.0 - u - std::pow(v, k);
  if (slack <= 0.0)
    fail_domain("egg diagonal: point is not inside the domain");
  DiagValue out;
  constexpr long term_budget = 2'000'000'000;
  double lnu = u > 0.0 ? std::log(u) : 0.0; // used only when u > 0
  double lnv = v > 0.0 ? std::log(v) : 0.0;
  double ln1mu = std::log1p(-u);
  // Limit of consecutive exact-row-sum ratios; < 1 inside the domain.
  double vfac = v * std::exp(-ln1mu / k);
  for (int b = 0;; ++b) {
    double c = (b + 1.0) / k;
    double ln_eta = log_row_sum_exact(k, ln1mu, lnv, b);
    if (!(ln_eta < 709.0))
      fail_accuracy("egg diagonal: value too large to represent");
    double eta = std::exp(ln_eta); // exact row sum; 0 if it underflows
    double thr = 0.25 * tol * eta + 1e-300;
    // Row b with term recurrence T(a+1)/T(a) = u (c+a+2)/(a+1), summed
    // outward from the peak so deep-boundary rows neither underflow at
    // a = 0 nor overflow the budget on the flat stretch before the peak.
    // Per-row truncation is held to a fraction of eta, which keeps the
    // accumulated bound below tol times the total.
    double row = 0.0, rowtail = 0.0;
    if (eta > 0.0) {
      long row_terms = 0;
      long ap = 0;
      if (u > 0.0)
        ap = std::lround(std::max(0.0, (u * (c + 2.0) - 1.0) / (1.0 - u)));
      if (ap >= 1'000'000'000)
        fail_accuracy("egg diagonal: term budget exhausted this close to the boundary");
      double lnT = ap * lnu + (b == 0 ? 0.0 : b * lnv) -
                   log_monomial_normsq(k, int(ap), b);
      double term = std::exp(lnT);
      for (long a = ap;;) {
        row += term;
        ++row_terms;
        if (++out.terms > term_budget)
          fail_accuracy("egg diagonal: term budget exhausted this close to the boundary");
        double ratio = u * (c + a + 2.0) / (a + 1.0);
        double next = term * ratio;
        if (ratio < 1.0) {
          // Later ratios only decrease, so the tail is geometric.
          double tail = next / (1.0 - ratio);
          if (tail <= thr) {
            rowtail += tail;
            break;
          }
        }
        term = next;
        ++a;
      }
      term = std::exp(lnT);
      for (long a = ap - 1; a >= 0; --a) {
        term *= (a + 1.0) / (u * (c + a + 2.0));
        row += term;
        ++row_terms;
        if (++out.terms > term_budget)
          fail_accuracy("egg diagonal: term budget exhausted this close to the boundary");
        // Terms fall monotonically below the peak, so the a remaining
        // ones are bounded by a * term.
        if (a > 0 && term * a <= thr) {
          rowtail += term * a;
          break;
        }
      }
      // The truncated row must agree with its closed form within the bound.
      // The seed exp(lnT) carries ulp-level lgamma error that scales the
      // whole row, and summation rounding grows with the row length, so
      // the comparison tolerance tracks both.
      double lg_scale = (ap + b + 2.0) * std::log(ap + b + 2.0);
      double eps_row = 4e-16 * (std::abs(double(ap) * lnu) +
                                std::abs(double(b) * lnv) + 3.0 * lg_scale) +
                       2e-16 * double(row_terms) + 1e-12;
      if (std::abs(row - eta) > 2.0 * rowtail + eps_row * eta)
        fail_certification("egg diagonal: row sum drifted from its closed form");
    }
    out.bound += rowtail;
    out.value += row;
    if (v == 0.0) return out; // all later rows vanish
    // b-tail via the exact row sums: eta_{b+1}/eta_b decreases toward
    // v (1-u)^{-1/k}, so once below one the remainder is geometric.
    double eta_next = std::exp(log_row_sum_exact(k, ln1mu, lnv, b + 1));
    double rho_next =
        vfac * ((c + 1.0 / k) * (c + 1.0 / k + 1.0)) / (c * (c + 1.0));
    if (rho_next < 1.0) {
      double btail = eta_next / (1.0 - rho_next);
      if (btail <= 0.5 * tol * out.value) {
        out.bound += btail;
        return out;
      }
    }
  }
}

double axis_exponent(int k) {
  if (k < 1) fail_domain("egg axis: bad k");
  return 2.0 + 1.0 / k;
}

double axis_prefactor(int k) {
  if (k < 1) fail_domain("egg axis: bad k");
  return k * std::tgamma(2.0 + 1.0 / k) / (M_PI * M_PI * std::tgamma(1.0 / k));
}

double axis_diagonal(int k, double u) {
  if (u < 0.0 || u >= 1.0) fail_domain("egg axis: u outside [0, 1)");
  return axis_prefactor(k) * std::pow(1.0 - u, -axis_exponent(k));
}

Samples boundary_samples(int k, BoundaryPath path,
                         const std::vector<double> &rho, double tol) {
  if (rho.empty()) fail_usage("egg samples: empty rho list");
  Samples s;
  for (double r : rho) {
    if (r >= 0.0) fail_domain("egg samples: rho must be negative");
    double u, v;
    if (path == BoundaryPath::axis) {
      u = 1.0 + r;
      v = 0.0;
      if (u < 0.0) fail_domain("egg samples: rho below -1 on the axis path");
    } else {
      v = 0.25;
      u = 1.0 - std::pow(v, k) + r;
      if (u < 0.0) fail_domain("egg samples: rho too negative on the generic path");
    }
    s.rho.push_back(r);
    DiagValue dv = diagonal_value(k, u, v, tol);
    s.value.push_back(dv.value);
    s.bound.push_back(dv.bound);
  }
  return s;
}

} // namespace ftkl::egg
