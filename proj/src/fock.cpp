// SPDX-License-Identifier: Apache-2.0
#include "ftkl/fock.hpp"

#include <cmath>
#include <cstdlib>

#include "ftkl/errors.hpp"
#include "ftkl/parallel.hpp"
#include "ftkl/quadrature.hpp"

namespace ftkl::fock {

double log_radial_normsq(int r, double t, int n) {
  if (r < 2 || t <= 0.0 || n < 0) fail_domain("radial norms: bad arguments");
  double c = (2.0 * n + 2.0) / r;
  return std::log(2.0 * M_PI / r) - c * std::log(2.0 * t) + std::lgamma(c);
}

namespace {

// Homogeneous part of the Gram matrix at a fixed angular node count.
// G[m][n] = Gamma(c)/(r (2t)^c) * sum_j e^{i(m-n)theta_j} g(theta_j)^{-c},
// c = (m+n+2)/r.  For radial weights the angular sum is exactly
// 2 pi delta_{mn} once ntheta > 2 nmax.
Eigen::MatrixXcd gram_homog(const HomogeneousWeight &w, double t, int nmax,
                            int ntheta) {
  int n1 = nmax + 1;
  Eigen::MatrixXcd G(n1, n1);
  std::vector<double> lng(ntheta);
  for (int j = 0; j < ntheta; ++j)
    lng[j] = std::log(w.g(2.0 * M_PI * j / ntheta));
  double wtheta = 2.0 * M_PI / ntheta;
  // Radial factor depends on s = m+n only.
  std::vector<double> lnrad(2 * nmax + 1);
  for (int s = 0; s <= 2 * nmax; ++s) {
    double c = (s + 2.0) / w.r;
    lnrad[s] = std::lgamma(c) - std::log(double(w.r)) - c * std::log(2.0 * t);
  }
  parallel_for_chunks(nmax + 1, [&](long d0, long d1) {
    std::vector<double> cth(ntheta), sth(ntheta);
    for (long d = d0; d < d1; ++d) {
      for (int j = 0; j < ntheta; ++j) {
        double a = d * (2.0 * M_PI * j / ntheta);
        cth[j] = std::cos(a);
        sth[j] = std::sin(a);
      }
      for (int n = 0; n + d <= nmax; ++n) {
        int m = n + int(d);
        double c = (m + n + 2.0) / w.r;
        double re = 0.0, im = 0.0;
        for (int j = 0; j < ntheta; ++j) {
          double f = std::exp(-c * lng[j]);
          re += cth[j] * f;
          im += sth[j] * f;
        }
        cxd val = std::exp(lnrad[m + n]) * wtheta * cxd(re, im);
        G(m, n) = val;
        G(n, m) = std::conj(val);
      }
    }
  });
  return G;
}

// Perturbation correction <z^m, z^n>_{full} - <z^m, z^n>_{phi0}: polar
// quadrature of rho^{m+n+1} e^{i(m-n)theta} e^{-2t phi0} (e^{-2t phi1}-1)
// over the cutoff disk.
Eigen::MatrixXcd gram_correction(const HomogeneousWeight &w,
                                 const Perturbation &phi1, double t, int nmax,
                                 int nr, int ntheta) {
  int n1 = nmax + 1;
  quadrature::Rule rad = quadrature::gauss_legendre(nr, 0.0, phi1.R0);
  // Radial moments per angle: S[j][s] = sum_i w_i rho_i^{s+1} M(rho_i, theta_j).
  std::vector<std::vector<double>> S(ntheta,
                                     std::vector<double>(2 * nmax + 1, 0.0));
  double wtheta = 2.0 * M_PI / ntheta;
  parallel_for_chunks(ntheta, [&](long j0, long j1) {
    for (long j = j0; j < j1; ++j) {
      double th = 2.0 * M_PI * j / ntheta;
      double cth = std::cos(th), sth = std::sin(th);
      for (int i = 0; i < nr; ++i) {
        double rho = rad.x[i];
        double p1 = rho * cth, p2 = rho * sth;
        double m0 = std::exp(-2.0 * t * w.eval(p1, p2));
        double m1 = std::expm1(-2.0 * t * phi1.eval(p1, p2));
        double acc = rad.w[i] * rho * m0 * m1;
        for (int s = 0; s <= 2 * nmax; ++s) {
          S[j][s] += acc;
          acc *= rho;
        }
      }
    }
  });
  Eigen::MatrixXcd C(n1, n1);
  parallel_for_chunks(nmax + 1, [&](long d0, long d1) {
    for (long d = d0; d < d1; ++d) {
      for (int n = 0; n + d <= nmax; ++n) {
        int m = n + int(d);
        double re = 0.0, im = 0.0;
        for (int j = 0; j < ntheta; ++j) {
          double a = d * (2.0 * M_PI * j / ntheta);
          re += std::cos(a) * S[j][m + n];
          im += std::sin(a) * S[j][m + n];
        }
        cxd val = wtheta * cxd(re, im);
        C(m, n) = val;
        C(n, m) = std::conj(val);
      }
    }
  });
  return C;
}

double matrix_change(const Eigen::MatrixXcd &A, const Eigen::MatrixXcd &B,
                     const Eigen::MatrixXcd &scale_src) {
  int n1 = int(A.rows());
  double worst = 0.0;
  for (int m = 0; m < n1; ++m)
    for (int n = 0; n < n1; ++n) {
      double scale =
          std::sqrt(std::abs(scale_src(m, m)) * std::abs(scale_src(n, n)));
      if (scale <= 0.0) scale = 1.0;
      worst = std::max(worst, std::abs(A(m, n) - B(m, n)) / scale);
    }
  return worst;
}

} // namespace

GramResult gram_matrix(const HomogeneousWeight &w, double t, int nmax,
                       const Perturbation *phi1, double tol) {
  if (t <= 0.0 || nmax < 0) fail_domain("gram: bad arguments");
  GramResult out;
  int ntheta = 256;
  while (ntheta < 4 * nmax + 8) ntheta *= 2;
  Eigen::MatrixXcd G = gram_homog(w, t, nmax, ntheta);
  double errH = 0.0;
  for (;;) {
    if (ntheta >= 1 << 15) {
      if (errH > 100.0 * tol)
        fail_accuracy("gram: angular quadrature did not settle (last change " +
                      std::to_string(errH) + ")");
      break;
    }
    Eigen::MatrixXcd G2 = gram_homog(w, t, nmax, 2 * ntheta);
    errH = matrix_change(G, G2, G2);
    G = std::move(G2);
    ntheta *= 2;
    if (errH < tol) break;
  }
  out.theta_nodes = ntheta;
  out.err_est = errH;
  if (phi1) {
    int nr = nmax + 16;
    int na = 2 * nmax + 32;
    Eigen::MatrixXcd C = gram_correction(w, *phi1, t, nmax, nr, na);
    double errC;
    for (;;) {
      Eigen::MatrixXcd C2 =
          gram_correction(w, *phi1, t, nmax, 2 * nr, 2 * na);
      errC = matrix_change(C, C2, G);
      C = std::move(C2);
      nr *= 2;
      na *= 2;
      if (errC < tol) break;
      if (nr >= 2048)
        fail_accuracy("gram: perturbation quadrature did not settle");
    }
    out.corr_radial_nodes = nr;
    out.err_est += errC;
    G += C;
  }
  out.G = std::move(G);
  return out;
}

FockBasis build_basis(const HomogeneousWeight &w, double t, int nmax,
                      BasisRoute route, const Perturbation *phi1, double tol) {
  if (t <= 0.0 || nmax < 0) fail_domain("basis: bad arguments");
  bool want_radial = (route == BasisRoute::radial) ||
                     (route == BasisRoute::automatic && w.radial && !phi1);
  if (route == BasisRoute::radial && (!w.radial || phi1))
    fail_usage("basis: the radial route needs a radial weight and no perturbation");
  FockBasis b;
  b.w = w;
  if (phi1) b.phi1 = *phi1;
  b.t = t;
  b.nmax = nmax;
  if (want_radial) {
    b.diagonal = true;
    b.lognormsq.resize(nmax + 1);
    for (int n = 0; n <= nmax; ++n) b.lognormsq[n] = log_radial_normsq(w.r, t, n);
    return b;
  }
  b.diagonal = false;
  GramResult gr = gram_matrix(w, t, nmax, phi1, tol);
  b.err_est = gr.err_est;
  int n1 = nmax + 1;
  Eigen::VectorXd dinv(n1);
  for (int n = 0; n < n1; ++n) {
    double diag = gr.G(n, n).real();
    if (!(diag > 0.0))
      fail_accuracy("basis: Gram diagonal not positive at degree " +
                    std::to_string(n));
    dinv(n) = 1.0 / std::sqrt(diag);
  }
  Eigen::MatrixXcd Ghat = dinv.asDiagonal() * gr.G * dinv.asDiagonal();
  Eigen::LLT<Eigen::MatrixXcd> llt(Ghat);
  if (llt.info() != Eigen::Success)
    fail_accuracy("basis: Gram matrix is numerically degenerate at nmax " +
                  std::to_string(nmax) + "; reduce nmax or loosen tol");
  Eigen::MatrixXcd Linv = llt.matrixL().solve(Eigen::MatrixXcd::Identity(n1, n1));
  b.transform = Linv * dinv.asDiagonal();
  Eigen::MatrixXcd resid = Linv * Ghat * Linv.adjoint();
  resid -= Eigen::MatrixXcd::Identity(n1, n1);
  b.ortho_defect = resid.cwiseAbs().maxCoeff();
  return b;
}

std::vector<cxd> FockBasis::sections(cxd p) const {
  double phi = w.eval(p.real(), p.imag());
  if (phi1) phi += phi1->eval(p.real(), p.imag());
  std::vector<cxd> s(nmax + 1);
  if (diagonal) {
    double az = std::abs(p);
    if (az == 0.0) {
      s[0] = std::exp(-t * phi - 0.5 * lognormsq[0]);
      return s;
    }
    double lz = std::log(az), th = std::arg(p);
    for (int n = 0; n <= nmax; ++n) {
      double mag = n * lz - t * phi - 0.5 * lognormsq[n];
      s[n] = std::exp(mag) * cxd(std::cos(n * th), std::sin(n * th));
    }
    return s;
  }
  Eigen::VectorXcd mono(nmax + 1);
  cxd zp = 1.0;
  for (int n = 0; n <= nmax; ++n) {
    mono(n) = zp;
    zp *= p;
  }
  Eigen::VectorXcd e = transform * mono;
  double damp = std::exp(-t * phi);
  for (int n = 0; n <= nmax; ++n) s[n] = e(n) * damp;
  return s;
}

namespace {

KernelValue pair_value(const FockBasis &b, const std::vector<cxd> &sp,
                       const std::vector<cxd> &sq) {
  KernelValue kv;
  int n1 = int(sp.size());
  double sumP = 0.0, sumQ = 0.0;
  for (int k = 0; k < n1; ++k) {
    kv.value += sp[k] * std::conj(sq[k]);
    sumP += std::norm(sp[k]);
    sumQ += std::norm(sq[k]);
  }
  double t1 = 0.0, t0 = 0.0;
  for (int k = std::max(0, n1 - 5); k < n1; ++k)
    t1 += std::abs(sp[k]) * std::abs(sq[k]);
  for (int k = std::max(0, n1 - 10); k < std::max(0, n1 - 5); ++k)
    t0 += std::abs(sp[k]) * std::abs(sq[k]);
  double tail = t1;
  if (t0 > 0.0 && t1 < t0) {
    double q = std::min(t1 / t0, 0.9);
    tail = t1 * q / (1.0 - q);
  }
  kv.err_est = tail + (b.ortho_defect + b.err_est) * std::sqrt(sumP * sumQ);
  return kv;
}

} // namespace

KernelValue bergman_eval(const FockBasis &b, cxd p, cxd q) {
  return pair_value(b, b.sections(p), b.sections(q));
}

int choose_nmax(const HomogeneousWeight &w, double t, cxd corner, double tol,
                int n0, int ncap, BasisRoute route) {
  double prev_corner = 0.0, prev_center = 0.0;
  bool have_prev = false;
  for (int n = n0; n <= ncap; n *= 2) {
    FockBasis b = build_basis(w, t, n, route);
    double vc = std::abs(bergman_eval(b, corner, corner).value);
    double v0 = std::abs(bergman_eval(b, 0.0, 0.0).value);
    if (have_prev) {
      double rc = std::abs(vc - prev_corner) / std::max(1e-300, vc);
      double r0 = std::abs(v0 - prev_center) / std::max(1e-300, v0);
      if (rc < tol && r0 < tol) return n;
    }
    prev_corner = vc;
    prev_center = v0;
    have_prev = true;
  }
  fail_accuracy("choose_nmax: kernel did not settle below the cap");
}

double model_constant_c0(int r) {
  HomogeneousWeight w = HomogeneousWeight::make_radial(r);
  FockBasis b = build_basis(w, 1.0, 16, BasisRoute::gram, nullptr, 1e-14);
  return bergman_eval(b, 0.0, 0.0).value.real();
}

double model_constant_c0_closed(int r) {
  return r * std::pow(2.0, 2.0 / r) / (2.0 * M_PI * std::tgamma(2.0 / r));
}

ScalingReport scaling_deviation(const HomogeneousWeight &w,
                                const std::vector<double> &t_values,
                                double extent, int grid_n, double tol,
                                int nmax) {
  if (grid_n < 1 || extent <= 0.0) fail_domain("scaling: bad grid");
  ScalingReport rep;
  rep.nmax_ref = nmax > 0 ? nmax : 64;
  FockBasis b1 = build_basis(w, 1.0, rep.nmax_ref, BasisRoute::automatic,
                             nullptr, tol);
  std::vector<cxd> pts;
  for (int ix = 0; ix < grid_n; ++ix)
    for (int iy = 0; iy < grid_n; ++iy) {
      auto coord = [&](int i) {
        return grid_n == 1 ? 0.0 : -extent + 2.0 * extent * i / (grid_n - 1);
      };
      pts.push_back(cxd(coord(ix), coord(iy)));
    }
  size_t np = pts.size();
  std::vector<std::vector<cxd>> s1(np);
  std::vector<double> diag(np);
  for (size_t i = 0; i < np; ++i) {
    s1[i] = b1.sections(pts[i]);
    diag[i] = pair_value(b1, s1[i], s1[i]).value.real();
    if (!(diag[i] > 0.0)) fail_accuracy("scaling: reference diagonal not positive");
  }
  for (double t : t_values) {
    if (t <= 0.0) fail_domain("scaling: t must be positive");
    FockBasis bt = build_basis(w, t, rep.nmax_ref, BasisRoute::automatic,
                               nullptr, tol);
    double lam = std::pow(t, -1.0 / w.r);
    double fac = std::pow(t, -2.0 / w.r);
    std::vector<std::vector<cxd>> st(np);
    for (size_t i = 0; i < np; ++i) st[i] = bt.sections(lam * pts[i]);
    double dev = 0.0;
    for (size_t i = 0; i < np; ++i)
      for (size_t j = 0; j < np; ++j) {
        KernelValue kt = pair_value(bt, st[i], st[j]);
        KernelValue k1 = pair_value(b1, s1[i], s1[j]);
        double scale = std::sqrt(diag[i] * diag[j]);
        dev = std::max(dev, std::abs(fac * kt.value - k1.value) / scale);
        rep.err_est = std::max(
            rep.err_est, (fac * kt.err_est + k1.err_est) / scale);
      }
    rep.t_values.push_back(t);
    rep.deviation_per_t.push_back(dev);
    rep.deviation = std::max(rep.deviation, dev);
  }
  return rep;
}

namespace {

struct NeumannState {
  Eigen::MatrixXcd S;       // box sections of the unperturbed basis
  Eigen::VectorXd wq;       // 2-d quadrature weights
  Eigen::VectorXd f1;       // phi1 at the nodes
  Eigen::VectorXd ep, em;   // e^{+t phi1}, e^{-t phi1} at the nodes
  std::vector<cxd> nodes;
};

// v -> integral R(., q) v(q) dq as a node vector, factored through the
// section matrix so no node x node matrix is formed:
//   Rv = em .* (S (S^H (ep .* w .* v))) - ep .* (S (S^H (em .* w .* v))).
Eigen::VectorXcd apply_R(const NeumannState &st, const Eigen::VectorXcd &v) {
  Eigen::VectorXcd vp(v.size()), vm(v.size());
  for (int i = 0; i < v.size(); ++i) {
    vp(i) = v(i) * st.ep(i) * st.wq(i);
    vm(i) = v(i) * st.em(i) * st.wq(i);
  }
  Eigen::VectorXcd vpp = st.S * (st.S.adjoint() * vp);
  Eigen::VectorXcd vmm = st.S * (st.S.adjoint() * vm);
  Eigen::VectorXcd out(v.size());
  for (int i = 0; i < v.size(); ++i)
    out(i) = st.em(i) * vpp(i) - st.ep(i) * vmm(i);
  return out;
}

} // namespace

NeumannReport neumann_corrected_kernel(const HomogeneousWeight &w,
                                       const Perturbation &phi1, double t,
                                       const NeumannOptions &opt) {
  if (t <= 0.0 || opt.nmax_terms < 1) fail_domain("neumann: bad arguments");
  double decay = std::pow(37.0 / (2.0 * t), 1.0 / w.r);
  double L = opt.box_halfwidth > 0.0 ? opt.box_halfwidth : phi1.R0 + decay;
  if (L < phi1.R0 + 0.5 * decay)
    fail_usage("neumann: quadrature box too small for the cutoff radius");
  NeumannReport rep;
  rep.box_halfwidth = L;

  cxd boxcorner(L, L);
  int nmax0 = choose_nmax(w, t, boxcorner, 1e-10, 32, 2048);
  rep.nmax_used = nmax0;
  FockBasis b0 = build_basis(w, t, nmax0);

  // Direct full-weight basis, resolved on the test grid.
  cxd testcorner(opt.test_extent, opt.test_extent);
  int nmax_dir = 16;
  FockBasis bdir;
  {
    double prev = 0.0;
    bool have = false;
    for (int n = 16; n <= 512; n *= 2) {
      bdir = build_basis(w, t, n, BasisRoute::gram, &phi1, opt.tol);
      double v = std::abs(bergman_eval(bdir, testcorner, testcorner).value);
      if (have && std::abs(v - prev) / std::max(1e-300, v) < 1e-11) {
        nmax_dir = n;
        break;
      }
      prev = v;
      have = true;
      nmax_dir = n;
      if (n == 512) fail_accuracy("neumann: direct basis did not settle");
    }
  }
  (void)nmax_dir;

  std::vector<cxd> tests;
  for (int ix = 0; ix < opt.test_n; ++ix)
    for (int iy = 0; iy < opt.test_n; ++iy) {
      auto coord = [&](int i) {
        return opt.test_n == 1
                   ? 0.0
                   : -opt.test_extent + 2.0 * opt.test_extent * i / (opt.test_n - 1);
      };
      tests.push_back(cxd(coord(ix), coord(iy)));
    }
  size_t np = tests.size();

  auto assemble = [&](int nodes_per_axis) {
    NeumannState st;
    quadrature::Rule gl = quadrature::gauss_legendre(nodes_per_axis, -L, L);
    int nn = nodes_per_axis * nodes_per_axis;
    st.S.resize(nn, nmax0 + 1);
    st.wq.resize(nn);
    st.f1.resize(nn);
    st.ep.resize(nn);
    st.em.resize(nn);
    st.nodes.resize(nn);
    parallel_for_chunks(nodes_per_axis, [&](long i0, long i1) {
      for (long ix = i0; ix < i1; ++ix)
        for (int iy = 0; iy < nodes_per_axis; ++iy) {
          int idx = int(ix) * nodes_per_axis + iy;
          cxd q(gl.x[ix], gl.x[iy]);
          st.nodes[idx] = q;
          st.wq(idx) = gl.w[ix] * gl.w[iy];
          double f1 = phi1.eval(q.real(), q.imag());
          st.f1(idx) = f1;
          st.ep(idx) = std::exp(t * f1);
          st.em(idx) = std::exp(-t * f1);
          auto s = b0.sections(q);
          for (int k = 0; k <= nmax0; ++k) st.S(idx, k) = s[k];
        }
    });
    return st;
  };

  // corrected_N(p, p') for all N at once; returns per-N values per pair.
  auto run = [&](const NeumannState &st,
                 std::vector<std::vector<cxd>> &per_n_vals) {
    int nn = int(st.nodes.size());
    per_n_vals.assign(opt.nmax_terms, std::vector<cxd>(np * np));
    std::vector<std::vector<cxd>> sec(np);
    std::vector<double> f1(np);
    for (size_t i = 0; i < np; ++i) {
      sec[i] = b0.sections(tests[i]);
      f1[i] = phi1.eval(tests[i].real(), tests[i].imag());
    }
    // B0 rows from test points to nodes.
    Eigen::MatrixXcd rows(np, nn);
    for (size_t i = 0; i < np; ++i) {
      Eigen::VectorXcd sp(nmax0 + 1);
      for (int k = 0; k <= nmax0; ++k) sp(k) = sec[i][k];
      rows.row(i) = (st.S.conjugate() * sp).transpose();
    }
    for (size_t jq = 0; jq < np; ++jq) {
      // Seed Bs(., p') at the nodes.
      Eigen::VectorXcd v(nn);
      Eigen::VectorXcd sq(nmax0 + 1);
      for (int k = 0; k <= nmax0; ++k) sq(k) = sec[jq][k];
      Eigen::VectorXcd b0col = st.S * sq.conjugate();
      double fq = f1[jq];
      for (int i = 0; i < nn; ++i)
        v(i) = st.ep(i) * b0col(i) * std::exp(-t * fq);
      for (size_t ip = 0; ip < np; ++ip) {
        // N = 1 term: Bs(p, p').
        cxd b0pq = 0.0;
        for (int k = 0; k <= nmax0; ++k)
          b0pq += sec[ip][k] * std::conj(sec[jq][k]);
        per_n_vals[0][ip * np + jq] =
            std::exp(t * f1[ip]) * b0pq * std::exp(-t * fq);
      }
      Eigen::VectorXcd vk = v;
      for (int term = 1; term < opt.nmax_terms; ++term) {
        // term-th correction: integral R(p, q) vk(q) dq.
        for (size_t ip = 0; ip < np; ++ip) {
          cxd acc = 0.0;
          for (int i = 0; i < nn; ++i) {
            cxd Rpi = -2.0 * std::sinh(t * (f1[ip] - st.f1(i))) * rows(ip, i);
            acc += Rpi * st.wq(i) * vk(i);
          }
          per_n_vals[term][ip * np + jq] =
              per_n_vals[term - 1][ip * np + jq] + acc;
        }
        if (term + 1 < opt.nmax_terms) vk = apply_R(st, vk);
      }
    }
  };

  NeumannState st = assemble(opt.box_nodes);
  std::vector<std::vector<cxd>> vals;
  run(st, vals);

  // Quadrature sensitivity: repeat at 3/2 the node count.
  NeumannState st2 = assemble(opt.box_nodes + opt.box_nodes / 2);
  std::vector<std::vector<cxd>> vals2;
  run(st2, vals2);

  // Direct values and the diagonal scale.
  std::vector<std::vector<cxd>> dsec(np);
  for (size_t i = 0; i < np; ++i) dsec[i] = bdir.sections(tests[i]);
  std::vector<double> ddiag(np);
  for (size_t i = 0; i < np; ++i)
    ddiag[i] = pair_value(bdir, dsec[i], dsec[i]).value.real();

  rep.deltas.assign(opt.nmax_terms, 0.0);
  for (int term = 0; term < opt.nmax_terms; ++term)
    for (size_t ip = 0; ip < np; ++ip)
      for (size_t jq = 0; jq < np; ++jq) {
        cxd direct = pair_value(bdir, dsec[ip], dsec[jq]).value;
        double scale = std::sqrt(ddiag[ip] * ddiag[jq]);
        double dv = std::abs(vals[term][ip * np + jq] - direct) / scale;
        rep.deltas[term] = std::max(rep.deltas[term], dv);
        rep.err_est = std::max(
            rep.err_est,
            std::abs(vals[term][ip * np + jq] - vals2[term][ip * np + jq]) /
                scale);
      }

  // Structural anti-Hermitian check of R on a node subsample.
  int nn = int(st.nodes.size());
  int stride = std::max(1, nn / 40);
  double scale0 = std::abs(bergman_eval(b0, 0.0, 0.0).value);
  for (int i = 0; i < nn; i += stride)
    for (int j = 0; j < nn; j += stride) {
      cxd x = st.nodes[i], y = st.nodes[j];
      cxd b0xy = bergman_eval(b0, x, y).value;
      cxd b0yx = bergman_eval(b0, y, x).value;
      double fx = phi1.eval(x.real(), x.imag());
      double fy = phi1.eval(y.real(), y.imag());
      cxd rxy = -2.0 * std::sinh(t * (fx - fy)) * b0xy;
      cxd ryx = -2.0 * std::sinh(t * (fy - fx)) * b0yx;
      rep.antiherm_defect =
          std::max(rep.antiherm_defect, std::abs(rxy + std::conj(ryx)) / scale0);
    }
  return rep;
}

} // namespace ftkl::fock
