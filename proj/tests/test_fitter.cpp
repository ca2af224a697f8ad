// SPDX-License-Identifier: Apache-2.0
#include "ftkl/fitter.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "ftkl/egg.hpp"
#include "ftkl/errors.hpp"
#include "ftkl/fock.hpp"

using namespace ftkl;

namespace {

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = std::pow(10.0, lo + (hi - lo) * i / (n - 1));
  return out;
}

std::vector<FitSample> make_samples(const std::vector<double>& x,
                                    double (*f)(double)) {
  std::vector<FitSample> s;
  for (double xi : x) s.push_back({-xi, f(xi)});
  return s;
}

} // namespace

TEST_CASE("single-term generator is recovered to machine precision") {
  auto s = make_samples(logspace(-3.5, -0.5, 13),
                        [](double x) { return 5.0 * std::pow(x, -3.0); });
  FitResult fit = fit_power_log(s, 2, 4, 1);
  REQUIRE(fit.a.size() == 5);
  REQUIRE(fit.b.size() == 2);
  CHECK(fit.a[0].value == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
  CHECK(std::isfinite(fit.condition));
  double bound = 10.0 * fit.condition * 2.3e-16 * 5.0;
  for (size_t j = 1; j < fit.a.size(); ++j)
    CHECK(std::abs(fit.a[j].value) <= bound);
  for (const Coefficient& c : fit.b) CHECK(std::abs(c.value) <= bound);
  CHECK(fit.exponent_estimate == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("round trip through the full basis") {
  int r = 3, J = 2, J_log = 1;
  double ca[3] = {2.0, -0.7, 0.31};
  double cb[2] = {1.3, -0.45};
  std::vector<FitSample> s;
  for (double x : logspace(-3.2, -0.4, 14)) {
    double y = 0.0;
    for (int j = 0; j <= J; ++j)
      y += ca[j] * std::pow(x, -(2.0 + 2.0 / r) + double(j) / r);
    for (int j = 0; j <= J_log; ++j) y += cb[j] * std::pow(x, j) * std::log(x);
    s.push_back({-x, y});
  }
  FitResult fit = fit_power_log(s, r, J, J_log);
  double scale = 2.0;
  double bound = 1e3 * fit.condition * 2.3e-16 * scale;
  for (int j = 0; j <= J; ++j)
    CHECK(std::abs(fit.a[j].value - ca[j]) <= bound);
  for (int j = 0; j <= J_log; ++j)
    CHECK(std::abs(fit.b[j].value - cb[j]) <= bound);
  for (const Coefficient& c : fit.a) CHECK(c.resolved);
}

TEST_CASE("log coefficient is isolated from the power ladder") {
  auto s = make_samples(logspace(-3.0, -0.8, 12), [](double x) {
    return std::pow(x, -3.0) + 2.0 * std::log(x);
  });
  FitResult fit = fit_power_log(s, 2, 4, 1);
  CHECK(fit.b[0].value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(fit.a[0].value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("exponent estimator on exact and perturbed power laws") {
  auto s = make_samples(logspace(-4.0, -1.0, 13),
                        [](double x) { return std::pow(x, -2.5); });
  ExponentEstimate est = estimate_leading_exponent(s);
  CHECK(est.monotone);
  CHECK(est.exponent == doctest::Approx(2.5).epsilon(1e-4));
  CHECK(est.uncertainty < 1e-6);

  // Subleading correction: acceleration must still find the leading power.
  auto s2 = make_samples(logspace(-4.0, -1.0, 13), [](double x) {
    return std::pow(x, -2.0) * (1.0 + 0.3 * std::sqrt(x));
  });
  ExponentEstimate est2 = estimate_leading_exponent(s2);
  CHECK(est2.exponent == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("exponent estimate is scale and reparameterization invariant") {
  auto f = [](double x) { return std::pow(x, -2.0) * (1.0 + 0.3 * std::sqrt(x)); };
  std::vector<FitSample> s1, s2;
  for (double x : logspace(-4.0, -1.0, 13)) {
    s1.push_back({-x, f(x)});
    s2.push_back({-0.37 * x, 7.0 * f(x)});
  }
  ExponentEstimate e1 = estimate_leading_exponent(s1);
  ExponentEstimate e2 = estimate_leading_exponent(s2);
  CHECK(e2.exponent == doctest::Approx(e1.exponent).epsilon(1e-3));
  CHECK(std::abs(e2.exponent - e1.exponent) <=
        e1.uncertainty + e2.uncertainty + 1e-6);
}

TEST_CASE("non-monotone data is flagged and left unaccelerated") {
  std::vector<FitSample> s;
  int i = 0;
  for (double x : logspace(-3.0, -1.0, 9)) {
    double y = std::pow(x, -2.0) * (i % 2 == 0 ? 1.0 : 0.2);
    s.push_back({-x, y});
    ++i;
  }
  ExponentEstimate est = estimate_leading_exponent(s);
  CHECK_FALSE(est.monotone);
  CHECK(est.slopes.size() == 8);
}

TEST_CASE("rank deficiency is flagged with interval coefficients") {
  // A tight exponent ladder over two decades is numerically singular.
  auto s = make_samples(logspace(-2.4, -0.4, 21), [](double x) {
    return std::pow(x, -2.125) + 0.5 * std::pow(x, -2.125 + 3.0 / 16.0);
  });
  FitResult fit = fit_power_log(s, 16, 16, 1);
  CHECK(fit.rank_deficient);
  CHECK(std::isfinite(fit.condition));
  bool any_unresolved = false;
  for (const Coefficient& c : fit.a)
    if (!c.resolved) {
      any_unresolved = true;
      CHECK(std::isinf(c.halfwidth));
    }
  CHECK(any_unresolved);
  CHECK(fit.residual < 1e-6); // the fit itself still reproduces the data
}

TEST_CASE("bad inputs are usage errors") {
  auto s = make_samples(logspace(-3.0, -1.0, 5),
                        [](double x) { return std::pow(x, -3.0); });
  CHECK_THROWS_AS(fit_power_log(s, 2, 4, 1), error); // 5 < 4+1+2
  auto narrow = make_samples(logspace(-1.5, -0.5, 12),
                             [](double x) { return std::pow(x, -3.0); });
  CHECK_THROWS_AS(fit_power_log(narrow, 2, 4, 1), error);
  std::vector<FitSample> two = {{-0.1, 1.0}, {-0.01, 2.0}};
  CHECK_THROWS_AS(estimate_leading_exponent(two), error);
}

TEST_CASE("degenerate boundary samples match the closed-form coefficient") {
  std::vector<double> rho;
  for (double x : logspace(-3.2, -1.0, 12)) rho.push_back(-x);
  egg::Samples smp = egg::boundary_samples(2, egg::BoundaryPath::axis, rho);
  std::vector<FitSample> s;
  for (size_t i = 0; i < smp.rho.size(); ++i)
    s.push_back({smp.rho[i], smp.value[i]});
  FitResult fit = fit_power_log(s, 4, 4, 1);
  CHECK(fit.a[0].value == doctest::Approx(3.0 / (2.0 * M_PI * M_PI)).epsilon(1e-6));

  egg::Samples smp3 = egg::boundary_samples(3, egg::BoundaryPath::axis, rho);
  std::vector<FitSample> s3;
  for (size_t i = 0; i < smp3.rho.size(); ++i)
    s3.push_back({smp3.rho[i], smp3.value[i]});
  ExponentEstimate est = estimate_leading_exponent(s3);
  CHECK(est.exponent == doctest::Approx(2.0 + 1.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("model diagonal grows with the expected power of t") {
  using namespace ftkl::fock;
  HomogeneousWeight w = HomogeneousWeight::make_radial(4);
  std::vector<FitSample> s;
  for (double t : logspace(0.0, 2.0, 7)) {
    // At the origin only the constant section contributes, so a small
    // basis already carries the exact diagonal value.
    FockBasis basis = build_basis(w, t, 16);
    double y = bergman_eval(basis, {0.0, 0.0}, {0.0, 0.0}).value.real();
    s.push_back({-1.0 / t, y}); // decay in -rho = 1/t means growth in t
  }
  ExponentEstimate est = estimate_leading_exponent(s);
  CHECK(est.exponent == doctest::Approx(0.5).epsilon(1e-3));
}
