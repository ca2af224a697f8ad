// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <complex>

#include "doctest.h"
#include "ftkl/errors.hpp"
#include "ftkl/fock.hpp"
#include "ftkl/quadrature.hpp"
#include "ftkl/weight.hpp"

using namespace ftkl;
using namespace ftkl::fock;
using quadrature::gauss_legendre;
using quadrature::trapezoid_circle;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  auto r = gauss_legendre(6, 0.0, 2.0);
  double v = 0.0;
  for (size_t i = 0; i < r.x.size(); ++i) v += r.w[i] * std::pow(r.x[i], 9);
  CHECK(v == doctest::Approx(std::pow(2.0, 10) / 10.0).epsilon(1e-13));

  auto e = gauss_legendre(20, -1.0, 1.0);
  double s = 0.0;
  for (size_t i = 0; i < e.x.size(); ++i) s += e.w[i] * std::exp(e.x[i]);
  CHECK(s == doctest::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("circle trapezoid hits the Bessel integral") {
  auto r = trapezoid_circle(64);
  double v = 0.0;
  for (size_t i = 0; i < r.x.size(); ++i) v += r.w[i] * std::exp(std::cos(r.x[i]));
  CHECK(v == doctest::Approx(2.0 * M_PI * std::cyl_bessel_i(0.0, 1.0))
                 .epsilon(1e-13));
}

TEST_CASE("polynomial parser") {
  Poly2 p = parse_poly2("x1^4 + 2*x1^2*x2^2 - 3/2*x2^4");
  CHECK(p.terms.size() == 3);
  CHECK(p.eval(1.0, 1.0) == doctest::Approx(1.0 + 2.0 - 1.5));
  CHECK(p.eval(2.0, 0.0) == doctest::Approx(16.0));
  Poly2 q = parse_poly2("0.05*p1^3");
  CHECK(q.eval(2.0, 5.0) == doctest::Approx(0.4));
  CHECK_THROWS_AS(parse_poly2("x1 + * x2"), ftkl::error);
  CHECK_THROWS_AS(parse_poly2(""), ftkl::error);
}

TEST_CASE("smooth cutoff endpoints and transition") {
  CHECK(smooth_cutoff(0.0) == 1.0);
  CHECK(smooth_cutoff(0.5) == 1.0);
  CHECK(smooth_cutoff(1.0) == 0.0);
  CHECK(smooth_cutoff(1.5) == 0.0);
  double prev = 1.0;
  for (double s = 0.55; s < 1.0; s += 0.05) {
    double v = smooth_cutoff(s);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("weight validation rejects bad polynomials") {
  CHECK_THROWS_AS(
      HomogeneousWeight::make_poly(4, parse_poly2("x1^4 + x1^2")),
      ftkl::error); // not homogeneous
  CHECK_THROWS_AS(HomogeneousWeight::make_poly(4, parse_poly2("x1^4")),
                  ftkl::error); // vanishes on the x2 axis
  CHECK_THROWS_AS(
      HomogeneousWeight::make_poly(2, parse_poly2("x1^2 - 3*x2^2")),
      ftkl::error); // negative Laplacian
  auto w = HomogeneousWeight::make_poly(4, parse_poly2("x1^4 + x2^4"));
  CHECK(w.ellipticity == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("radial norms match direct quadrature") {
  // oracle: ||z^n||^2 = 2 pi int rho^{2n+1} e^{-2 t rho^r} drho
  int r = 3;
  double t = 2.0;
  auto gl = gauss_legendre(400, 0.0, 6.0);
  for (int n = 0; n <= 6; ++n) {
    double v = 0.0;
    for (size_t i = 0; i < gl.x.size(); ++i)
      v += gl.w[i] * std::pow(gl.x[i], 2 * n + 1) *
           std::exp(-2.0 * t * std::pow(gl.x[i], r));
    v *= 2.0 * M_PI;
    CHECK(std::log(v) == doctest::Approx(log_radial_normsq(r, t, n)).epsilon(1e-11));
  }
}

TEST_CASE("gram route reproduces closed-form norms for radial weights") {
  auto w = HomogeneousWeight::make_radial(4);
  auto gr = gram_matrix(w, 1.5, 12);
  for (int m = 0; m <= 12; ++m)
    for (int n = 0; n <= 12; ++n) {
      if (m == n) {
        CHECK(gr.G(m, n).real() ==
              doctest::Approx(std::exp(log_radial_normsq(4, 1.5, n)))
                  .epsilon(1e-12));
      } else {
        CHECK(std::abs(gr.G(m, n)) < 1e-14 * std::abs(gr.G(m, m)));
      }
    }
}

TEST_CASE("elliptic gram matches a two-dimensional quadrature oracle") {
  auto w = HomogeneousWeight::make_poly(4, parse_poly2("x1^4 + x2^4"));
  double t = 1.0;
  int nmax = 4;
  auto gr = gram_matrix(w, t, nmax);
  auto gl = gauss_legendre(220, -3.6, 3.6);
  Eigen::MatrixXcd O = Eigen::MatrixXcd::Zero(nmax + 1, nmax + 1);
  for (size_t i = 0; i < gl.x.size(); ++i)
    for (size_t j = 0; j < gl.x.size(); ++j) {
      std::complex<double> z(gl.x[i], gl.x[j]);
      double mass = gl.w[i] * gl.w[j] *
                    std::exp(-2.0 * t * w.eval(z.real(), z.imag()));
      std::complex<double> zm = 1.0;
      for (int m = 0; m <= nmax; ++m) {
        std::complex<double> zn = 1.0;
        for (int n = 0; n <= nmax; ++n) {
          O(m, n) += mass * zm * std::conj(zn);
          zn *= z;
        }
        zm *= z;
      }
    }
  for (int m = 0; m <= nmax; ++m)
    for (int n = 0; n <= nmax; ++n) {
      double scale = std::sqrt(O(m, m).real() * O(n, n).real());
      CHECK(std::abs(gr.G(m, n) - O(m, n)) / scale < 1e-9);
    }
}

TEST_CASE("orthonormalization defect is tiny") {
  auto w = HomogeneousWeight::make_poly(4, parse_poly2("x1^4 + x2^4"));
  auto b = build_basis(w, 1.0, 16, BasisRoute::gram);
  CHECK(b.ortho_defect < 1e-12);
}

TEST_CASE("quadratic weight reproduces the Gaussian kernel") {
  auto w = HomogeneousWeight::make_radial(2);
  double t = 1.0;
  for (auto route : {BasisRoute::radial, BasisRoute::gram}) {
    auto b = build_basis(w, t, 48, route);
    for (double zr : {-1.0, 0.3, 0.9})
      for (double wi : {-0.8, 0.0, 1.0}) {
        std::complex<double> z(zr, 0.4), v(0.2, wi);
        auto kv = bergman_eval(b, z, v);
        std::complex<double> expect =
            (2.0 * t / M_PI) *
            std::exp(2.0 * t * z * std::conj(v) - t * std::norm(z) -
                     t * std::norm(v));
        CHECK(std::abs(kv.value - expect) < 1e-12);
        CHECK(kv.err_est < 1e-10);
      }
  }
}

TEST_CASE("model constant through the quadrature pipeline") {
  for (int r : {2, 3, 4, 6}) {
    double got = model_constant_c0(r);
    double expect = model_constant_c0_closed(r);
    CHECK(std::abs(got - expect) / expect < 1e-10);
  }
}

TEST_CASE("kernel rescaling collapses onto t = 1") {
  auto w = HomogeneousWeight::make_radial(3);
  auto rep = scaling_deviation(w, {1.0, 10.0}, 0.8, 3);
  CHECK(rep.deviation < 1e-10);
  CHECK(rep.deviation_per_t.size() == 2);
}

TEST_CASE("choose_nmax settles on the Gaussian") {
  auto w = HomogeneousWeight::make_radial(2);
  int n = choose_nmax(w, 1.0, {1.0, 1.0}, 1e-10, 16, 512);
  CHECK(n >= 16);
  auto b = build_basis(w, 1.0, n);
  auto kv = bergman_eval(b, {1.0, 1.0}, {1.0, 1.0});
  CHECK(std::abs(kv.value - 2.0 / M_PI) < 1e-10);
}

TEST_CASE("neumann with a vanishing perturbation reproduces the seed") {
  auto w = HomogeneousWeight::make_radial(2);
  Perturbation none;
  none.q = Poly2{};
  none.R0 = 1.0;
  NeumannOptions opt;
  opt.box_nodes = 24;
  opt.test_n = 3;
  opt.test_extent = 0.4;
  auto rep = neumann_corrected_kernel(w, none, 2.0, opt);
  for (double d : rep.deltas) CHECK(d < 1e-9);
  CHECK(rep.antiherm_defect < 1e-12);
}

TEST_CASE("neumann corrections improve on the oblique seed") {
  auto w = HomogeneousWeight::make_radial(2);
  Perturbation pert;
  pert.q = parse_poly2("0.1*x1^2");
  pert.R0 = 1.5;
  NeumannOptions opt;
  opt.box_nodes = 32;
  opt.test_n = 3;
  opt.test_extent = 0.4;
  auto rep = neumann_corrected_kernel(w, pert, 2.0, opt);
  REQUIRE(rep.deltas.size() == 3);
  CHECK(rep.deltas[2] < rep.deltas[0]);
  CHECK(rep.deltas[2] < 5e-3);
  CHECK(rep.antiherm_defect < 1e-12);
}
