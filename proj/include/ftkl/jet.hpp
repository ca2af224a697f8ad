// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ftkl/errors.hpp"

namespace ftkl::jets {

using Rat = boost::multiprecision::cpp_rational;

// Complex number with exact rational real/imaginary parts.  All jet
// arithmetic runs over this type so recursion residuals can be certified
// as exact zeros rather than small doubles.
struct CRat {
  Rat re{0};
  Rat im{0};

  CRat() = default;
  CRat(long n) : re(n) {}
  CRat(const Rat &r) : re(r) {}
  CRat(const Rat &r, const Rat &i) : re(r), im(i) {}

  bool is_zero() const { return re == 0 && im == 0; }
  CRat conj() const { return CRat(re, -im); }
  std::complex<double> to_complex() const {
    return {re.convert_to<double>(), im.convert_to<double>()};
  }
};

CRat operator+(const CRat &a, const CRat &b);
CRat operator-(const CRat &a, const CRat &b);
CRat operator-(const CRat &a);
CRat operator*(const CRat &a, const CRat &b);
CRat operator/(const CRat &a, const CRat &b);
bool operator==(const CRat &a, const CRat &b);
inline bool operator!=(const CRat &a, const CRat &b) { return !(a == b); }

inline CRat crat_i() { return CRat(Rat(0), Rat(1)); } // the imaginary unit

// Truncated formal power series ("jet") in 2 or 3 variables with a total
// degree cap.  Coefficients are stored densely in graded order: all
// monomials of degree 0, then degree 1, ... up to maxdeg.  Within a degree
// block monomials are ordered by descending a1, then descending a2.
//
// The optional weights record the Christ normal-form grading (1,1,r); they
// only affect weighted_order queries, never arithmetic.
struct Jet {
  int nvars = 2; // 2 or 3
  int maxdeg = 0;
  std::vector<CRat> c;
  bool exact = true; // false when built from floating-point data
  std::optional<std::array<int, 3>> weights;

  Jet() = default;
  Jet(int nv, int md);

  int size() const { return static_cast<int>(c.size()); }
  bool is_zero() const;
  // Index of the monomial x1^a1 x2^a2 (x3^a3); exponents must fit the cap.
  int index(int a1, int a2, int a3 = 0) const;
  std::array<int, 3> exponents(int idx) const;
  int degree_of(int idx) const;

  const CRat &coeff(int a1, int a2, int a3 = 0) const;
  void set_coeff(int a1, int a2, int a3, const CRat &v);
  void set_coeff(int a1, int a2, const CRat &v) { set_coeff(a1, a2, 0, v); }
};

// Number of monomials of total degree <= d in nv variables.
int graded_size(int nv, int d);

Jet jet_zero(int nv, int md);
Jet jet_const(int nv, int md, const CRat &v);
Jet jet_var(int nv, int md, int j); // the coordinate monomial x_{j+1}

Jet add(const Jet &a, const Jet &b);
Jet sub(const Jet &a, const Jet &b);
Jet scale(const Jet &a, const CRat &s);
Jet mul(const Jet &a, const Jet &b);   // truncated at maxdeg
Jet derive(const Jet &a, int j);       // d/dx_{j+1}
Jet truncate(const Jet &a, int deg);   // drop monomials of degree > deg
Jet homogeneous_part(const Jet &a, int deg);

// Substitute subs[j] for variable j.  Every substitution jet must live in a
// common target space and have zero constant term; the result is exact
// through the common maxdeg.
Jet compose(const Jet &f, const std::vector<Jet> &subs);

// Minimal weighted order over nonzero monomials (weights default to the
// jet's stored weights, else (1,1,1)).  Zero jet reports maxdeg+1.
int weighted_order(const Jet &a, std::optional<std::array<int, 3>> w = std::nullopt);
int total_order(const Jet &a); // ordinary vanishing order

// Solve (1/2)(d/dx1 + i d/dx2) f = g for f, treating x3 (if present) as a
// parameter.  Gauge kill_zeta_pure: with zeta = x1 + i*x2 and
// eta = x1 - i*x2 the kernel of the operator consists of series in zeta,
// and the returned f contains no monomial with eta-exponent zero.  The
// identity holds exactly through degree maxdeg-1; degree-maxdeg source
// terms would need degree maxdeg+1 in f and are dropped.
enum class dbar_gauge { kill_zeta_pure };
Jet dbar_solve(const Jet &g, dbar_gauge gauge = dbar_gauge::kill_zeta_pure);

// Coefficients of f rewritten on the (zeta, eta[, x3]) monomial basis and
// back.  Linear changes of basis, exact in both directions.
Jet to_zeta_eta(const Jet &f);
Jet from_zeta_eta(const Jet &f);

std::complex<double> eval(const Jet &f, const std::array<std::complex<double>, 3> &x);

bool has_imag_part(const Jet &f);              // any coefficient with im != 0
Jet conj_coeffs(const Jet &f);                 // coefficient-wise conjugate
std::string nonzero_witness(const Jet &f);     // "" when zero, else one term

// Text serialization: header line "jet <nvars> <maxdeg> <exact>" followed
// by one nonzero term per line "a1 a2 a3 re im" with rational re, im.
// Round-trips exactly.
std::string to_text(const Jet &f);
Jet from_text(const std::string &text, size_t *consumed = nullptr);

} // namespace ftkl::jets
