// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ftkl/weight.hpp"

namespace ftkl::fock {

using cxd = std::complex<double>;

// ln ||z^n||^2 for the radial weight |z|^r at parameter t:
//   ||z^n||^2 = (2 pi / r) (2t)^{-(2n+2)/r} Gamma((2n+2)/r).
double log_radial_normsq(int r, double t, int n);

struct GramResult {
  Eigen::MatrixXcd G;
  double err_est = 0.0; // max relative entry change at the last doubling
  int theta_nodes = 0;
  int corr_radial_nodes = 0;
};

// Monomial Gram matrix G[m][n] = <z^m, z^n> in A^2(C, e^{-2t(phi0+phi1)}),
// indices 0..nmax.  The homogeneous part reduces exactly to a 1-d angular
// integral (the radial integral is a Gamma function); the compactly
// supported perturbation is added by polar quadrature over its support.
// Both quadratures double until the entry change passes tol.
GramResult gram_matrix(const HomogeneousWeight &w, double t, int nmax,
                       const Perturbation *phi1 = nullptr, double tol = 1e-12);

enum class BasisRoute { automatic, gram, radial };

// Orthonormal basis of span{z^n : n <= nmax}, either via closed-form norms
// (radial route, diagonal) or via an equilibrated Cholesky factor of the
// Gram matrix.  Sections are the weighted frame s_k(p) = e_k(p) e^{-t phi(p)};
// the Bergman kernel of the weighted space is B(p,q) = sum_k s_k(p)
// conj(s_k(q)).
struct FockBasis {
  HomogeneousWeight w;
  std::optional<Perturbation> phi1;
  double t = 1.0;
  int nmax = 0;
  bool diagonal = true;
  std::vector<double> lognormsq; // diagonal route
  Eigen::MatrixXcd transform;    // gram route: row k = coefficients of e_k
  double err_est = 0.0;          // quadrature error carried from the Gram
  double ortho_defect = 0.0;     // max |T G T^H - I|

  std::vector<cxd> sections(cxd p) const;
};

FockBasis build_basis(const HomogeneousWeight &w, double t, int nmax,
                      BasisRoute route = BasisRoute::automatic,
                      const Perturbation *phi1 = nullptr, double tol = 1e-12);

// Smallest nmax from {n0, 2 n0, ...} such that the kernel stops moving at
// the given point (relative change below tol), capped at ncap.
int choose_nmax(const HomogeneousWeight &w, double t, cxd corner,
                double tol = 1e-10, int n0 = 16, int ncap = 512,
                BasisRoute route = BasisRoute::automatic);

struct KernelValue {
  cxd value{0.0, 0.0};
  double err_est = 0.0; // truncation tail estimate plus basis error
};

KernelValue bergman_eval(const FockBasis &b, cxd p, cxd q);

// B(0,0) of the model weight at t = 1, computed through the Gram route so
// the quadrature pipeline is exercised even for radial weights.
double model_constant_c0(int r);
// Closed form r 2^{2/r} / (2 pi Gamma(2/r)) for the radial model.
double model_constant_c0_closed(int r);

struct ScalingReport {
  std::vector<double> t_values;
  std::vector<double> deviation_per_t; // max over the pair grid
  double deviation = 0.0;              // max over everything
  double err_est = 0.0;
  int nmax_ref = 0;
};

// Checks t^{-2/r} B_t(t^{-1/r} p, t^{-1/r} q) = B_1(p, q) on a grid of
// points with |Re|,|Im| <= extent (grid_n points per axis, all pairs).
// The truncated space is dilation invariant and the angular Gram integrals
// do not involve t, so the identity holds exactly at every truncation
// order; the deviation measures quadrature and round-off consistency, and
// nmax (0: default 64) only needs the Gram comfortably conditioned.
ScalingReport scaling_deviation(const HomogeneousWeight &w,
                                const std::vector<double> &t_values,
                                double extent = 1.0, int grid_n = 5,
                                double tol = 1e-12, int nmax = 0);

struct NeumannOptions {
  int nmax_terms = 3;      // corrections B-tilde-1 .. B-tilde-N
  double box_halfwidth = 0.0; // 0: chosen from R0 and the Gaussian tail
  int box_nodes = 48;      // Gauss-Legendre nodes per axis
  double test_extent = 0.5;
  int test_n = 5;
  double tol = 1e-12;
};

struct NeumannReport {
  std::vector<double> deltas;  // sup |corrected_N - direct| per N = 1..
  double antiherm_defect = 0.0; // max |R(x,y) + conj(R(y,x))|
  double err_est = 0.0;         // quadrature sensitivity of corrected_N
  double box_halfwidth = 0.0;
  int nmax_used = 0;
};

// Conjugated Neumann series for the kernel of e^{-2t(phi0+phi1)} seeded by
// the unperturbed kernel.  With the oblique projection
// Bs(x,y) = e^{t phi1(x)} B0(x,y) e^{-t phi1(y)} and the anti-Hermitian
// remainder R(x,y) = -2 sinh(t(phi1(x) - phi1(y))) B0(x,y), the full
// kernel is sum_k R^k Bs; corrected_N keeps k < N.  Compared against the
// directly orthonormalized full-weight kernel on the test grid; deviations
// are relative to the diagonal kernel scale.
NeumannReport neumann_corrected_kernel(const HomogeneousWeight &w,
                                       const Perturbation &phi1, double t,
                                       const NeumannOptions &opt = {});

} // namespace ftkl::fock
