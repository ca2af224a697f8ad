// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "ftkl/egg.hpp"
#include "ftkl/errors.hpp"
#include "ftkl/quadrature.hpp"

using namespace ftkl::egg;

TEST_CASE("monomial norms match direct quadrature") {
  // oracle: ||z1^a z2^b||^2 = pi^2 int_0^1 v^b (1 - v^k)^{a+1}/(a+1) dv
  auto gl = ftkl::quadrature::gauss_legendre(240, 0.0, 1.0);
  for (int k : {1, 2, 3})
    for (int a : {0, 1, 4})
      for (int b : {0, 2, 5}) {
        double v = 0.0;
        for (size_t i = 0; i < gl.x.size(); ++i)
          v += gl.w[i] * std::pow(gl.x[i], b) *
               std::pow(1.0 - std::pow(gl.x[i], k), a + 1);
        v *= M_PI * M_PI / (a + 1.0);
        CHECK(std::log(v) ==
              doctest::Approx(log_monomial_normsq(k, a, b)).epsilon(1e-12));
      }
}

TEST_CASE("k = 1 reproduces the ball kernel") {
  // The domain is the unit ball of C^2, where the diagonal kernel is
  // (2/pi^2) (1 - |z|^2)^{-3}.
  for (auto [u, v] : {std::pair{0.3, 0.4}, {0.1, 0.05}, {0.5, 0.49}}) {
    auto got = diagonal_value(1, u, v, 1e-12);
    double expect = 2.0 / (M_PI * M_PI) * std::pow(1.0 - u - v, -3.0);
    CHECK(std::abs(got.value - expect) / expect < 1e-11);
    CHECK(got.bound < 1e-10 * expect);
  }
}

TEST_CASE("axis values agree with the closed form") {
  for (int k : {1, 2, 3})
    for (double u : {0.3, 0.9, 0.99}) {
      auto got = diagonal_value(k, u, 0.0, 1e-12);
      double expect = axis_diagonal(k, u);
      CHECK(std::abs(got.value - expect) / expect < 1e-11);
    }
}

TEST_CASE("axis constants") {
  CHECK(axis_exponent(1) == doctest::Approx(3.0));
  CHECK(axis_prefactor(1) == doctest::Approx(2.0 / (M_PI * M_PI)).epsilon(1e-14));
  CHECK(axis_exponent(2) == doctest::Approx(2.5));
  CHECK(axis_prefactor(2) ==
        doctest::Approx(1.5 / (M_PI * M_PI)).epsilon(1e-13));
}

TEST_CASE("reported bound dominates the actual truncation error") {
  for (auto [u, v] : {std::pair{0.7, 0.3}, {0.2, 0.6}}) {
    auto loose = diagonal_value(2, u, v, 1e-6);
    auto tight = diagonal_value(2, u, v, 1e-13);
    CHECK(std::abs(loose.value - tight.value) <= loose.bound);
    CHECK(loose.bound < 1e-5 * tight.value);
    CHECK(tight.terms > loose.terms);
  }
}

TEST_CASE("boundary samples grow toward the boundary") {
  std::vector<double> rho = {-1e-1, -1e-2, -1e-3, -1e-4};
  for (auto path : {BoundaryPath::axis, BoundaryPath::generic}) {
    auto s = boundary_samples(2, path, rho);
    REQUIRE(s.value.size() == rho.size());
    for (size_t i = 1; i < s.value.size(); ++i) CHECK(s.value[i] > s.value[i - 1]);
  }
}

TEST_CASE("domain and budget failures are reported") {
  CHECK_THROWS_AS(diagonal_value(2, 0.9, 0.7, 1e-10), ftkl::error); // outside
  CHECK_THROWS_AS(diagonal_value(1, 1.1, 0.0, 1e-10), ftkl::error);
  CHECK_THROWS_AS(boundary_samples(2, BoundaryPath::axis, {0.5}), ftkl::error);
  bool accuracy = false;
  try {
    diagonal_value(1, 1.0 - 1e-13, 0.0, 1e-10);
  } catch (const ftkl::error &e) {
    accuracy = e.kind == ftkl::errkind::accuracy;
  }
  CHECK(accuracy);
}
