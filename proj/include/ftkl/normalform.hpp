// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "ftkl/jet.hpp"

namespace ftkl::normalform {

using jets::CRat;
using jets::Jet;
using jets::Rat;

// First-order differential operator sum_j t_j d/dx_j on 3-variable jets.
struct VectorField {
  std::array<Jet, 3> t;

  static VectorField zero(int maxdeg);
};

Jet apply(const VectorField &V, const Jet &f);
// [V,W]_k = V(w_k) - W(v_k).  Component k is exact through maxdeg-1.
VectorField bracket(const VectorField &V, const VectorField &W);

// One certified fact: ok means the quantity vanished exactly (or the stated
// inequality held); witness names a violating coefficient when it did not.
struct Cert {
  bool ok = true;
  std::string witness;
};

// Input data for the normal form at a weakly pseudoconvex point of finite
// type r: the model field
//   Z = (1/2)[d1 + (d2 p) d3 + i(d2 - (d1 p) d3 + R)],
// with p a real homogeneous polynomial of degree r, Delta p >= 0, and
// R = sum r_j d_j a real remainder of weight >= 0 in the (1,1,r) grading
// (so w(r1) >= 1, w(r2) >= 1, w(r3) >= r).
struct ChristData {
  int r = 2;
  int maxdeg = 4; // default 2r set by make()
  Jet p;          // 3-variable jet, x3-independent
  std::array<Jet, 3> R;

  // Validates and normalizes; maxdeg <= 0 means "use 2r".
  static ChristData make(int r, const Jet &p, const std::array<Jet, 3> &R,
                         int maxdeg = 0);
  static ChristData make(int r, const Jet &p, int maxdeg = 0); // R = 0
};

// Coefficients of Z for the given data.
VectorField Z_field(const ChristData &d);

struct CommutingField {
  VectorField T; // t = (0,0,1) + higher order
  Cert bracket_zero;
};

// Degree-by-degree solve of [T,Z] = 0: at each degree the new coefficients
// enter only through (1/2)(d1+i d2), inverted by dbar_solve in the
// kill_zeta_pure gauge.
CommutingField solve_commuting_T(const ChristData &d);

struct Coordinates {
  std::array<Jet, 3> w;      // T w1 = T w2 = 0, T w3 = 1 through maxdeg-1
  std::array<Jet, 3> ztilde; // straightened coordinates, linear part identity
  std::array<Jet, 2> a12;    // 2-variable jets, constants 1/2 and i/2
  Jet a3;                    // 2-variable jet in (ztilde1, ztilde2)
  Cert w_defect;             // defects of the w equations
  Cert a_w3_independent;     // transported coefficients do not see w3
  Cert a_constants;          // a1(0) = 1/2, a2(0) = i/2
  Cert straighten_defect;    // a1 d1 wt_j + a2 d2 wt_j = const defects
  Cert reconstruction;       // Z in ztilde coordinates has the normal shape
};

// Two-stage coordinate straightening: first w with T = d/dw3 exactly
// through order (integration constants fixed to zero, so corrections are
// multiples of z3), then a further (w1,w2)-change making the first two
// coefficients of Z constant.
Coordinates almost_analytic_coordinates(const ChristData &d, const VectorField &T);

struct Potential {
  Jet phi;  // 2-variable jet, a3 = -(i/2)(d1 + i d2) phi through maxdeg-1
  Jet phi0; // homogeneous degree-r part
  Cert residual;
  Cert phi0_real;
  Cert phi0_subharmonic; // Laplacian >= 0 on a 360-point circle grid
  double min_laplacian = 0.0;
};

// Solves dbar phi = i a3 in the kill_zeta_pure gauge, except that the one
// free pure-zeta coefficient in degree r is completed Hermitianly (set to
// the conjugate of the eta^r coefficient), the only gauge choice under
// which the degree-r part can be real.  Realness is certified, never
// enforced:
// if the mixed zeta/eta coefficients of degree r are not conjugate-paired
// the phi0_real certificate fails and the run reports it.
Potential extract_potential(const ChristData &d, const Jet &a3);

struct NormalFormResult {
  ChristData data;
  CommutingField T;
  Coordinates coords;
  Potential pot;
  bool all_ok() const;
};

NormalFormResult normal_form(const ChristData &d);

// Inverse of a formal coordinate change x -> x + higher order; exact
// through the cap.  Throws a certification error if the round trip fails.
std::vector<Jet> invert_map(const std::vector<Jet> &w);

// Repack an x3-independent 3-variable jet as a 2-variable jet.
Jet drop_x3(const Jet &f);
Jet lift_to_3vars(const Jet &f);

} // namespace ftkl::normalform
