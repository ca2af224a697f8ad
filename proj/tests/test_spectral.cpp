// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "ftkl/errors.hpp"
#include "ftkl/spectral.hpp"

using namespace ftkl::spectral;

TEST_CASE("sturm bisection on a known tridiagonal") {
  // Dirichlet Laplacian stencil: eigenvalues 2 - 2 cos(k pi / (n+1)).
  int n = 40;
  Tridiag T;
  T.diag.assign(n, 2.0);
  T.off.assign(n - 1, -1.0);
  auto ev = lowest_eigenvalues(T, 3);
  for (int k = 1; k <= 3; ++k) {
    double expect = 2.0 - 2.0 * std::cos(k * M_PI / (n + 1));
    CHECK(ev[k - 1] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("quadratic weight sectors reproduce the ladder spectrum") {
  // r = 2: commutator algebra gives eigenvalues 2 t k with the sector
  // floor k = max(0, -ell).
  double t = 1.5;
  double rho_max = 8.0 / std::sqrt(t);
  int cells = 3000;
  {
    auto T = sector_operator(2, t, 0, rho_max, cells);
    auto ev = lowest_eigenvalues(T, 2);
    CHECK(std::abs(ev[0]) < 1e-4 * t);
    CHECK(ev[1] == doctest::Approx(2.0 * t).epsilon(2e-4));
  }
  {
    auto T = sector_operator(2, t, 2, rho_max, cells);
    auto ev = lowest_eigenvalues(T, 2);
    CHECK(std::abs(ev[0]) < 1e-4 * t);
    CHECK(ev[1] == doctest::Approx(2.0 * t).epsilon(2e-4));
  }
  {
    auto T = sector_operator(2, t, -3, rho_max, cells);
    auto ev = lowest_eigenvalues(T, 1);
    CHECK(ev[0] == doctest::Approx(6.0 * t).epsilon(2e-4));
  }
}

TEST_CASE("discrete rescaling is exact") {
  // Scaling the mesh with t^{-1/r} maps the operator at t to t^{2/r} times
  // the operator at 1, cell by cell.
  int r = 4, ell = -2, cells = 400;
  double t = 7.0;
  double rho1 = 3.0;
  auto T1 = sector_operator(r, 1.0, ell, rho1, cells);
  auto Tt = sector_operator(r, t, ell, rho1 * std::pow(t, -1.0 / r), cells);
  double fac = std::pow(t, 2.0 / r);
  for (size_t i = 0; i < T1.diag.size(); ++i)
    CHECK(Tt.diag[i] == doctest::Approx(fac * T1.diag[i]).epsilon(1e-13));
  for (size_t i = 0; i < T1.off.size(); ++i)
    CHECK(Tt.off[i] == doctest::Approx(fac * T1.off[i]).epsilon(1e-13));
}

TEST_CASE("gap report for the quadratic model is the Landau gap") {
  for (double t : {1.0, 3.0}) {
    auto rep = gap(2, t);
    CHECK(rep.gap == doctest::Approx(2.0 * t).epsilon(5e-3));
    CHECK(rep.mesh_change < 0.01);
    CHECK(rep.sectors.size() == 25);
    CHECK(rep.max_zero < 0.5 * rep.zero_threshold);
  }
}

TEST_CASE("gap certificates and scaling for a quartic weight") {
  auto rep = gap(4, 2.0);
  CHECK(rep.gap > 0.0);
  CHECK(rep.mesh_change < 0.01);
  // Zero modes sit well under the threshold in every sector ell >= 0.
  for (const auto &s : rep.sectors)
    CHECK(s.zero_mode == (s.ell >= 0));

  auto fit = gap_scaling(4, {1.0, 10.0});
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("gap rejects bad arguments") {
  CHECK_THROWS_AS(gap(1, 1.0), ftkl::error);
  CHECK_THROWS_AS(gap(2, -1.0), ftkl::error);
  GapConfig cfg;
  cfg.sector_range = 1;
  CHECK_THROWS_AS(gap(2, 1.0, cfg), ftkl::error);
}
