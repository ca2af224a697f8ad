// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

namespace ftkl::quadrature {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n.
Rule gauss_legendre(int n);
// The same rule mapped to [a,b].
Rule gauss_legendre(int n, double a, double b);

// Periodic trapezoid nodes on [0, 2pi): uniform with weight 2pi/n, which is
// spectrally accurate for smooth periodic integrands.
Rule trapezoid_circle(int n);

// Doubling driver: evaluates f at n, 2n, 4n, ... nodes until successive
// values differ by less than tol (absolute + relative mix) or n exceeds cap.
// Returns the last value; err is the last observed change and converged
// tells whether tol was met.
struct Refined {
  double value = 0.0;
  double err = 0.0;
  bool converged = false;
  int nodes = 0;
};
Refined refine(const std::function<double(int)> &f, int n0, double tol, int cap);

} // namespace ftkl::quadrature
