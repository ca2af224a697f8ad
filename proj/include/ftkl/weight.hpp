// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace ftkl::fock {

// Real polynomial in two variables with double coefficients; used for the
// homogeneous weight phi0 and the perturbation polynomial.
struct Poly2 {
  struct Term {
    int a = 0, b = 0;
    double c = 0.0;
  };
  std::vector<Term> terms;

  double eval(double p1, double p2) const;
  Poly2 dx() const;
  Poly2 dy() const;
  bool empty() const { return terms.empty(); }
};

// Parses "c*x1^a*x2^b +- ..." with rational or decimal coefficients; x/p
// and y are accepted variable aliases.
Poly2 parse_poly2(const std::string &text);

// C-infinity cutoff: 1 for s <= 1/2, 0 for s >= 1.
double smooth_cutoff(double s);

// Homogeneous weight phi0 of degree r >= 2.  Radial means |p|^r, which
// bypasses the polynomial (r may be odd); otherwise phi0 is a polynomial
// validated at construction: homogeneous of degree r term by term,
// elliptic (min over circle > 1e-6) and subharmonic on a sampled circle.
struct HomogeneousWeight {
  int r = 2;
  bool radial = true;
  Poly2 phi0;
  double ellipticity = 1.0; // min of phi0 on the unit circle

  static HomogeneousWeight make_radial(int r);
  static HomogeneousWeight make_poly(int r, const Poly2 &phi0);

  double eval(double p1, double p2) const;
  double g(double theta) const; // restriction to the unit circle
};

// Compactly supported perturbation phi1 = q(p) * chi(|p|/R0).
struct Perturbation {
  Poly2 q;
  double R0 = 1.0;

  double eval(double p1, double p2) const;
};

} // namespace ftkl::fock
