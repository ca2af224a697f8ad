// SPDX-License-Identifier: Apache-2.0
#include "ftkl/bundle.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "ftkl/errors.hpp"

using namespace ftkl;
using namespace ftkl::bundle;

namespace {

double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

} // namespace

TEST_CASE("section norms are exact Beta integrals") {
  BundleMetric m25{2, 5, nullptr};
  SectionNorms n25 = section_norms(m25);
  CHECK(n25.dimension == 4);
  CHECK(std::exp(n25.lognormsq[0]) == doctest::Approx(M_PI / 4.0).epsilon(1e-14));

  BundleMetric m416{4, 16, nullptr};
  SectionNorms n416 = section_norms(m416);
  CHECK(n416.dimension == 31);
  CHECK(std::exp(n416.lognormsq[0]) ==
        doctest::Approx(M_PI / 2.0 * beta_fn(0.5, 15.5)).epsilon(1e-13));
}

TEST_CASE("dimension follows the finiteness rule and grows with m") {
  for (int r : {2, 4, 6}) {
    int prev = 0;
    for (int m = 2; m <= 40; ++m) {
      BundleMetric metric{r, m, nullptr};
      SectionNorms norms = section_norms(metric);
      int count = 0;
      while ((count + 1) * 2.0 / r < double(m)) ++count;
      CHECK(norms.dimension == count);
      CHECK(norms.dimension >= prev);
      prev = norms.dimension;
      for (double ln : norms.lognormsq) CHECK(std::isfinite(ln));
    }
  }
}

TEST_CASE("quadrature fallback reproduces the Beta norms") {
  BundleMetric exact{4, 16, nullptr};
  BundleMetric quad{4, 16, [](double u) { return std::log1p(u * u); }};
  SectionNorms ne = section_norms(exact);
  SectionNorms nq = section_norms(quad);
  REQUIRE(ne.dimension == nq.dimension);
  for (int n : {0, 1, 5, 12})
    CHECK(nq.lognormsq[n] == doctest::Approx(ne.lognormsq[n]).epsilon(1e-10));
}

TEST_CASE("r = 2 density collapses to the closed form") {
  for (int m : {2, 5, 17}) {
    BundleMetric metric{2, m, nullptr};
    for (double u : {0.0, 0.3, 1.0, 2.7}) {
      double got = szego_density(metric, u);
      CHECK(got == doctest::Approx(closed_form_r2(m, u)).epsilon(1e-12));
    }
  }
  BundleMetric m2{2, 2, nullptr};
  CHECK(density_at_zero(m2) == doctest::Approx(1.0 / M_PI).epsilon(1e-14));
}

TEST_CASE("degenerate point density and its m-asymptotics") {
  BundleMetric m416{4, 16, nullptr};
  CHECK(density_at_zero(m416) ==
        doctest::Approx(2.0 / (M_PI * beta_fn(0.5, 15.5))).epsilon(1e-13));

  AsymptoticsReport rep = degenerate_point_asymptotics(4, {16, 64, 256, 1024});
  CHECK(rep.exponent == doctest::Approx(0.5).epsilon(1e-2));
  CHECK(rep.prefactor ==
        doctest::Approx(2.0 / (M_PI * std::tgamma(0.5))).epsilon(2e-2));
  CHECK(rep.prefactor_closed ==
        doctest::Approx(2.0 / (M_PI * std::tgamma(0.5))).epsilon(1e-14));
  CHECK(rep.model_ratio == doctest::Approx(1.0).epsilon(2e-2));

  AsymptoticsReport rep2 = degenerate_point_asymptotics(2, {4, 16, 64, 400});
  CHECK(rep2.exponent == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(rep2.model_ratio == doctest::Approx(1.0).epsilon(2e-2));
}

TEST_CASE("strongly pseudoconvex coefficients match curvature") {
  PscCoefficients at0 = strongly_psc_coefficients(2, 0.0, {4, 16, 64, 400});
  CHECK(at0.c0_hat == doctest::Approx(1.0 / M_PI).epsilon(1e-10));
  CHECK(at0.c1_hat == doctest::Approx(-1.0 / M_PI).epsilon(1e-8));
  CHECK(at0.c0_curvature == doctest::Approx(1.0 / M_PI).epsilon(1e-14));

  PscCoefficients at1 = strongly_psc_coefficients(2, 1.0, {4, 16, 64, 400});
  CHECK(at1.c0_hat == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-10));

  PscCoefficients r4 = strongly_psc_coefficients(4, 1.0, {16, 64, 256, 1024});
  CHECK(r4.c0_curvature == doctest::Approx(1.0 / M_PI).epsilon(1e-14));
  CHECK(r4.c0_hat == doctest::Approx(r4.c0_curvature).epsilon(1e-2));
  CHECK(r4.residual < 1e-3);
}

TEST_CASE("curvature density vanishes to the stated order") {
  CHECK(curvature_density(2, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(curvature_density(2, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(curvature_density(4, 0.0) == 0.0);
  for (double u : {0.0, 0.1, 0.5, 1.0, 3.0}) {
    for (int r : {2, 4, 6, 8}) CHECK(curvature_density(r, u) >= 0.0);
  }
  // leading term s^2 u^{s-1}
  double u = 1e-6;
  CHECK(curvature_density(6, u) == doctest::Approx(9.0 * u * u).epsilon(1e-4));
}

TEST_CASE("phase factor: three realizations agree") {
  CHECK(phase_factor(3, 6) == 3);
  CHECK(phase_factor(3, 7) == 0);
  CHECK(phase_factor(1, 17) == 1);
  for (int s = 1; s <= 6; ++s)
    for (int m = 0; m <= 100; ++m) {
      int expect = m % s == 0 ? s : 0;
      CHECK(phase_factor(s, m) == expect);
      CHECK(phase_factor_character(s, m) == expect);
      CHECK(phase_factor_restricted(s, m) == expect);
    }
}

TEST_CASE("bad bundle arguments are usage or domain errors") {
  BundleMetric odd{3, 5, nullptr};
  CHECK_THROWS_AS(section_norms(odd), error);
  BundleMetric zero{2, 0, nullptr};
  CHECK_THROWS_AS(section_norms(zero), error);
  BundleMetric empty{2, 1, nullptr}; // s*m = 1: no finite-norm sections
  CHECK_THROWS_AS(section_norms(empty), error);
  CHECK_THROWS_AS(degenerate_point_asymptotics(4, {16, 64, 256}), error);
  CHECK_THROWS_AS(degenerate_point_asymptotics(4, {16, 64, 256, 512}), error);
  CHECK_THROWS_AS(strongly_psc_coefficients(4, 0.0, {16, 64, 256, 1024}),
                  error);
  CHECK_THROWS_AS(phase_factor(0, 5), error);
}
