// SPDX-License-Identifier: Apache-2.0
#include "ftkl/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "ftkl/errors.hpp"

namespace ftkl::quadrature {

Rule gauss_legendre(int n) {
  if (n < 1) fail_usage("quadrature: need at least one node");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  // Roots come in +- pairs; Newton from the Chebyshev-angle initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.x[i] = -x;
    r.w[i] = w;
    r.x[n - 1 - i] = x;
    r.w[n - 1 - i] = w;
  }
  return r;
}

Rule gauss_legendre(int n, double a, double b) {
  Rule r = gauss_legendre(n);
  double m = 0.5 * (b - a), c = 0.5 * (b + a);
  for (int i = 0; i < n; ++i) {
    r.x[i] = c + m * r.x[i];
    r.w[i] *= m;
  }
  return r;
}

Rule trapezoid_circle(int n) {
  if (n < 1) fail_usage("quadrature: need at least one node");
  Rule r;
  r.x.resize(n);
  r.w.assign(n, 2.0 * std::numbers::pi / n);
  for (int i = 0; i < n; ++i) r.x[i] = 2.0 * std::numbers::pi * i / n;
  return r;
}

Refined refine(const std::function<double(int)> &f, int n0, double tol, int cap) {
  Refined out;
  int n = n0;
  double prev = f(n);
  out.nodes = n;
  out.value = prev;
  while (2 * n <= cap) {
    n *= 2;
    double cur = f(n);
    out.err = std::abs(cur - prev);
    out.value = cur;
    out.nodes = n;
    if (out.err <= tol * (1.0 + std::abs(cur))) {
      out.converged = true;
      return out;
    }
    prev = cur;
  }
  return out;
}

} // namespace ftkl::quadrature
