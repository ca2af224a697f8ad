// SPDX-License-Identifier: Apache-2.0
#include "ftkl/normalform.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ftkl::normalform {

using jets::crat_i;
using jets::dbar_solve;
using jets::jet_const;
using jets::jet_var;

VectorField VectorField::zero(int maxdeg) {
  return {std::array<Jet, 3>{Jet(3, maxdeg), Jet(3, maxdeg), Jet(3, maxdeg)}};
}

Jet apply(const VectorField &V, const Jet &f) {
  Jet r = mul(V.t[0], derive(f, 0));
  r = add(r, mul(V.t[1], derive(f, 1)));
  r = add(r, mul(V.t[2], derive(f, 2)));
  return r;
}

VectorField bracket(const VectorField &V, const VectorField &W) {
  VectorField B = VectorField::zero(V.t[0].maxdeg);
  for (int k = 0; k < 3; ++k) B.t[k] = sub(apply(V, W.t[k]), apply(W, V.t[k]));
  return B;
}

namespace {

Cert cert_zero_through(const Jet &f, int deg, const std::string &what) {
  Jet t = truncate(f, deg);
  if (t.is_zero()) return {};
  return {false, what + " nonzero: " + jets::nonzero_witness(t)};
}

Cert merge(const Cert &a, const Cert &b) {
  if (!a.ok) return a;
  return b;
}

// Antiderivative in x3 with integration constant zero: every output
// monomial carries a positive x3 power.
Jet integrate_x3(const Jet &g) {
  Jet r(3, g.maxdeg);
  r.exact = g.exact;
  for (int i = 0; i < g.size(); ++i) {
    if (g.c[i].is_zero()) continue;
    auto e = g.exponents(i);
    if (e[0] + e[1] + e[2] >= g.maxdeg) continue;
    int k = r.index(e[0], e[1], e[2] + 1);
    r.c[k] = g.c[i] / CRat(e[2] + 1);
  }
  return r;
}

} // namespace

ChristData ChristData::make(int r, const Jet &p, const std::array<Jet, 3> &R,
                            int maxdeg) {
  if (r < 2) fail_domain("normalform: type r must be >= 2");
  ChristData d;
  d.r = r;
  d.maxdeg = maxdeg > 0 ? maxdeg : 2 * r;
  if (d.maxdeg < r) fail_domain("normalform: maxdeg must be at least r");

  if (p.nvars != 3 || p.maxdeg != d.maxdeg)
    fail_usage("normalform: p must be a 3-variable jet at the working maxdeg");
  for (int i = 0; i < p.size(); ++i) {
    if (p.c[i].is_zero()) continue;
    auto e = p.exponents(i);
    if (e[2] != 0) fail_domain("normalform: p must not depend on x3");
    if (e[0] + e[1] != r) fail_domain("normalform: p must be homogeneous of degree r");
    if (p.c[i].im != 0) fail_domain("normalform: p must have real coefficients");
  }
  // Subharmonicity of p on a sampled circle; Delta p is homogeneous so the
  // circle determines the sign everywhere.
  Jet lap = add(derive(derive(p, 0), 0), add(derive(derive(p, 1), 1), Jet(3, d.maxdeg)));
  for (int s = 0; s < 360; ++s) {
    double th = 2.0 * std::numbers::pi * s / 360.0;
    double v = jets::eval(lap, {std::cos(th), std::sin(th), 0.0}).real();
    if (v < -1e-12) fail_domain("normalform: Delta p < 0 at a sampled circle point");
  }

  std::array<int, 3> wts{1, 1, r};
  int wmin[3] = {1, 1, r};
  for (int j = 0; j < 3; ++j) {
    const Jet &rj = R[j];
    if (rj.nvars != 3 || rj.maxdeg != d.maxdeg)
      fail_usage("normalform: R components must be 3-variable jets at maxdeg");
    if (jets::has_imag_part(rj))
      fail_domain("normalform: R must have real coefficients");
    if (!rj.is_zero() && jets::weighted_order(rj, wts) < wmin[j])
      fail_domain("normalform: R violates the weight conditions w(r1),w(r2) >= 1, w(r3) >= r");
  }
  d.p = p;
  d.R = R;
  for (auto &rj : d.R) rj.weights = wts;
  d.p.weights = wts;
  return d;
}

ChristData ChristData::make(int r, const Jet &p, int maxdeg) {
  int md = maxdeg > 0 ? maxdeg : 2 * r;
  std::array<Jet, 3> R{Jet(3, md), Jet(3, md), Jet(3, md)};
  return make(r, p, R, md);
}

VectorField Z_field(const ChristData &d) {
  int md = d.maxdeg;
  CRat half(Rat(1, 2)), ihalf(Rat(0), Rat(1, 2)), mihalf(Rat(0), Rat(-1, 2));
  VectorField Z = VectorField::zero(md);
  Z.t[0] = add(jet_const(3, md, half), scale(d.R[0], ihalf));
  Z.t[1] = add(jet_const(3, md, ihalf), scale(d.R[1], ihalf));
  Z.t[2] = add(add(scale(derive(d.p, 1), half), scale(derive(d.p, 0), mihalf)),
               scale(d.R[2], ihalf));
  return Z;
}

CommutingField solve_commuting_T(const ChristData &d) {
  int md = d.maxdeg;
  VectorField Z = Z_field(d);
  VectorField T = VectorField::zero(md);
  T.t[2] = jet_const(3, md, CRat(1));

  // Defect correction: killing the degree-e part of [T,Z] needs degree
  // e+1 corrections of t, which enter the bracket only through
  // -(1/2)(d1+i d2) t_k at degree e; everything else they touch sits in
  // higher degrees, so each pass settles one degree for good.
  for (int e = 0; e <= md - 1; ++e) {
    VectorField B = bracket(T, Z);
    bool clean = true;
    for (int k = 0; k < 3; ++k) {
      Jet Bk = homogeneous_part(B.t[k], e);
      if (Bk.is_zero()) continue;
      clean = false;
      T.t[k] = add(T.t[k], dbar_solve(Bk));
    }
    (void)clean;
  }

  CommutingField out;
  out.T = T;
  VectorField B = bracket(T, Z);
  Cert c;
  for (int k = 0; k < 3; ++k)
    c = merge(c, cert_zero_through(B.t[k], md - 1, "[T,Z] component " + std::to_string(k + 1)));
  out.bracket_zero = c;
  return out;
}

std::vector<Jet> invert_map(const std::vector<Jet> &w) {
  int n = static_cast<int>(w.size());
  int nv = w[0].nvars, md = w[0].maxdeg;
  if (n != nv) fail_usage("normalform: invert_map needs one jet per variable");
  std::vector<Jet> id, hot;
  for (int k = 0; k < n; ++k) {
    id.push_back(jet_var(nv, md, k));
    hot.push_back(sub(w[k], id[k]));
    if (!w[k].c[0].is_zero() || jets::total_order(hot[k]) < 2)
      fail_usage("normalform: invert_map needs maps of the form x + higher order");
  }
  std::vector<Jet> g = id;
  for (int pass = 0; pass <= md; ++pass)
    for (int k = 0; k < n; ++k) g[k] = sub(id[k], compose(hot[k], g));
  for (int k = 0; k < n; ++k) {
    Jet round = compose(w[k], g);
    if (!sub(round, id[k]).is_zero())
      fail_certification("normalform: coordinate inversion failed to close");
  }
  return g;
}

Jet drop_x3(const Jet &f) {
  if (f.nvars != 3) fail_usage("normalform: drop_x3 expects a 3-variable jet");
  Jet r(2, f.maxdeg);
  r.exact = f.exact;
  for (int i = 0; i < f.size(); ++i) {
    if (f.c[i].is_zero()) continue;
    auto e = f.exponents(i);
    if (e[2] != 0) fail_usage("normalform: drop_x3 found x3 dependence");
    r.set_coeff(e[0], e[1], 0, f.c[i]);
  }
  return r;
}

Jet lift_to_3vars(const Jet &f) {
  if (f.nvars != 2) fail_usage("normalform: lift_to_3vars expects a 2-variable jet");
  Jet r(3, f.maxdeg);
  r.exact = f.exact;
  for (int i = 0; i < f.size(); ++i) {
    if (f.c[i].is_zero()) continue;
    auto e = f.exponents(i);
    r.set_coeff(e[0], e[1], 0, f.c[i]);
  }
  return r;
}

Coordinates almost_analytic_coordinates(const ChristData &d, const VectorField &T) {
  int md = d.maxdeg;
  Coordinates out;

  // Stage 1: w with T w_j = delta_{j3} through maxdeg-1.  The defect at
  // degree e is removed by a degree e+1 correction with d/dz3 equal to
  // minus the defect; the integration constant (a series in z1,z2) is set
  // to zero, so corrections are multiples of z3.
  for (int j = 0; j < 3; ++j) {
    Jet wj = jet_var(3, md, j);
    Jet target = j == 2 ? jet_const(3, md, CRat(1)) : Jet(3, md);
    for (int e = 0; e <= md - 1; ++e) {
      Jet D = homogeneous_part(sub(apply(T, wj), target), e);
      if (D.is_zero()) continue;
      wj = sub(wj, integrate_x3(D));
    }
    out.w[j] = wj;
  }
  {
    Cert c;
    for (int j = 0; j < 3; ++j) {
      Jet target = j == 2 ? jet_const(3, md, CRat(1)) : Jet(3, md);
      c = merge(c, cert_zero_through(sub(apply(T, out.w[j]), target), md - 1,
                                     "T(w" + std::to_string(j + 1) + ") defect"));
    }
    out.w_defect = c;
  }

  // Transport Z: its coefficients in the w chart are Z(w_k) pulled back
  // through the inverse map.
  VectorField Z = Z_field(d);
  std::vector<Jet> winv = invert_map({out.w[0], out.w[1], out.w[2]});
  std::array<Jet, 3> aw;
  for (int k = 0; k < 3; ++k) aw[k] = compose(apply(Z, out.w[k]), winv);

  // [T,Z] = 0 and T = d/dw3 force the transported coefficients to be
  // w3-independent through maxdeg-1; certify, then discard the top-degree
  // remainder which the truncation cannot determine.
  {
    Cert c;
    for (int k = 0; k < 3; ++k) {
      Jet dep(3, md);
      for (int i = 0; i < aw[k].size(); ++i) {
        auto e = aw[k].exponents(i);
        if (e[2] > 0) dep.c[i] = aw[k].c[i];
      }
      c = merge(c, cert_zero_through(dep, md - 1,
                                     "w3 dependence of a" + std::to_string(k + 1)));
    }
    out.a_w3_independent = c;
    for (int k = 0; k < 3; ++k) {
      Jet t = truncate(aw[k], md - 1);
      for (int i = 0; i < t.size(); ++i) {
        auto e = t.exponents(i);
        if (e[2] > 0) t.c[i] = CRat();
      }
      aw[k] = t;
    }
  }

  CRat half(Rat(1, 2)), ihalf(Rat(0), Rat(1, 2));
  {
    Cert c;
    if (aw[0].c[0] != half) c = {false, "a1(0) != 1/2"};
    if (c.ok && aw[1].c[0] != ihalf) c = {false, "a2(0) != i/2"};
    out.a_constants = c;
  }

  // Stage 2: straighten in the first two variables only.  Solve
  // a1 d1 wt + a2 d2 wt = const; the unknown degree enters through
  // (1/2)(d1 + i d2), inverted by dbar_solve.
  Jet a1 = drop_x3(aw[0]), a2 = drop_x3(aw[1]), a3w = drop_x3(aw[2]);
  std::array<Jet, 2> wt;
  std::array<CRat, 2> cst{half, ihalf};
  for (int j = 0; j < 2; ++j) {
    Jet wj = jet_var(2, md, j);
    Jet target = jet_const(2, md, cst[j]);
    auto L = [&](const Jet &f) {
      return add(mul(a1, derive(f, 0)), mul(a2, derive(f, 1)));
    };
    for (int e = 0; e <= md - 1; ++e) {
      Jet D = homogeneous_part(sub(L(wj), target), e);
      if (D.is_zero()) continue;
      wj = add(wj, dbar_solve(scale(D, CRat(-1))));
    }
    wt[j] = wj;
    out.straighten_defect = merge(
        out.straighten_defect,
        cert_zero_through(sub(L(wj), target), md - 1,
                          "straightening defect " + std::to_string(j + 1)));
  }

  // Assemble ztilde over the original variables and transport a3 to the
  // final chart (it only involves the first two coordinates).
  std::vector<Jet> wt_inv = invert_map({wt[0], wt[1]});
  out.a3 = truncate(compose(a3w, wt_inv), md - 1);
  out.a12 = {truncate(compose(a1, wt_inv), md - 1), truncate(compose(a2, wt_inv), md - 1)};

  std::vector<Jet> w12{out.w[0], out.w[1], out.w[2]};
  out.ztilde[0] = compose(lift_to_3vars(wt[0]), {out.w[0], out.w[1], jet_var(3, md, 2)});
  out.ztilde[1] = compose(lift_to_3vars(wt[1]), {out.w[0], out.w[1], jet_var(3, md, 2)});
  out.ztilde[2] = out.w[2];

  // Independent reconstruction: transport Z to the ztilde chart from
  // scratch and compare with the normal shape.
  {
    std::vector<Jet> zinv = invert_map({out.ztilde[0], out.ztilde[1], out.ztilde[2]});
    Jet b1 = compose(apply(Z, out.ztilde[0]), zinv);
    Jet b2 = compose(apply(Z, out.ztilde[1]), zinv);
    Jet b3 = compose(apply(Z, out.ztilde[2]), zinv);
    Cert c = cert_zero_through(sub(b1, jet_const(3, md, half)), md - 1,
                               "reconstructed a1 - 1/2");
    c = merge(c, cert_zero_through(sub(b2, jet_const(3, md, ihalf)), md - 1,
                                   "reconstructed a2 - i/2"));
    c = merge(c, cert_zero_through(sub(b3, lift_to_3vars(out.a3)), md - 1,
                                   "reconstructed a3 mismatch"));
    out.reconstruction = c;
  }
  return out;
}

Potential extract_potential(const ChristData &d, const Jet &a3) {
  if (a3.nvars != 2) fail_usage("normalform: a3 must be a 2-variable jet");
  int md = a3.maxdeg;
  Potential out;

  // a3 = -(i/2)(d1 + i d2) phi, i.e. dbar phi = i a3.
  Jet source = scale(a3, crat_i());
  Jet phi = dbar_solve(source);

  // Hermitian completion of the one gauge-free coefficient in degree r:
  // the pure zeta^r slot (killed by the gauge) is set to the conjugate of
  // the eta^r coefficient.  The remaining degree-r structure carries no
  // freedom, so its realness is certified below, not arranged.
  {
    Jet hz = jets::to_zeta_eta(homogeneous_part(phi, d.r));
    CRat ceta = hz.coeff(0, d.r);
    Jet addt(2, md);
    addt.set_coeff(d.r, 0, 0, ceta.conj());
    phi = add(phi, jets::from_zeta_eta(addt));
  }

  out.phi = phi;
  out.phi0 = homogeneous_part(phi, d.r);

  Jet dbar_phi = scale(add(derive(phi, 0), scale(derive(phi, 1), crat_i())),
                       CRat(Rat(1, 2)));
  out.residual = cert_zero_through(sub(dbar_phi, source), md - 1,
                                   "dbar phi - i a3");
  if (jets::has_imag_part(out.phi0)) {
    out.phi0_real = {false, "phi0 imaginary part: " +
                                jets::nonzero_witness(sub(out.phi0, jets::conj_coeffs(out.phi0)))};
  }

  Jet lap = add(derive(derive(out.phi0, 0), 0), derive(derive(out.phi0, 1), 1));
  double mn = 0.0;
  for (int s = 0; s < 360; ++s) {
    double th = 2.0 * std::numbers::pi * s / 360.0;
    double v = jets::eval(lap, {std::cos(th), std::sin(th), 0.0}).real();
    mn = std::min(mn, v);
  }
  out.min_laplacian = mn;
  if (mn < -1e-10)
    out.phi0_subharmonic = {false, "Delta phi0 < 0 on the circle grid"};
  return out;
}

bool NormalFormResult::all_ok() const {
  return T.bracket_zero.ok && coords.w_defect.ok && coords.a_w3_independent.ok &&
         coords.a_constants.ok && coords.straighten_defect.ok &&
         coords.reconstruction.ok && pot.residual.ok && pot.phi0_real.ok &&
         pot.phi0_subharmonic.ok;
}

NormalFormResult normal_form(const ChristData &d) {
  NormalFormResult r;
  r.data = d;
  r.T = solve_commuting_T(d);
  r.coords = almost_analytic_coordinates(d, r.T.T);
  r.pot = extract_potential(d, r.coords.a3);
  return r;
}

} // namespace ftkl::normalform
