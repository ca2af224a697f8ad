// SPDX-License-Identifier: Apache-2.0
#include "ftkl/weight.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "ftkl/errors.hpp"

namespace ftkl::fock {

double Poly2::eval(double p1, double p2) const {
  double v = 0.0;
  for (const auto &t : terms) v += t.c * std::pow(p1, t.a) * std::pow(p2, t.b);
  return v;
}

Poly2 Poly2::dx() const {
  Poly2 d;
  for (const auto &t : terms)
    if (t.a > 0) d.terms.push_back({t.a - 1, t.b, t.c * t.a});
  return d;
}

Poly2 Poly2::dy() const {
  Poly2 d;
  for (const auto &t : terms)
    if (t.b > 0) d.terms.push_back({t.a, t.b - 1, t.c * t.b});
  return d;
}

namespace {

void skip_ws(const std::string &s, size_t &i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

// number := decimal [ '/' decimal ]
double parse_number(const std::string &s, size_t &i) {
  size_t start = i;
  while (i < s.size() &&
         (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'))
    ++i;
  if (i == start) fail_usage("polynomial: expected a number at '" + s.substr(start) + "'");
  double num = std::strtod(s.substr(start, i - start).c_str(), nullptr);
  if (i < s.size() && s[i] == '/') {
    ++i;
    size_t dstart = i;
    while (i < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'))
      ++i;
    if (i == dstart) fail_usage("polynomial: expected a denominator");
    double den = std::strtod(s.substr(dstart, i - dstart).c_str(), nullptr);
    if (den == 0.0) fail_usage("polynomial: zero denominator");
    num /= den;
  }
  return num;
}

// var := ('x'|'p'|'y') [digit] [ '^' int ]; returns which variable and power.
bool parse_var(const std::string &s, size_t &i, int &var, int &pow) {
  if (i >= s.size()) return false;
  char c = s[i];
  if (c == 'x' || c == 'p') {
    ++i;
    if (i < s.size() && (s[i] == '1' || s[i] == '2')) {
      var = s[i] - '1';
      ++i;
    } else {
      var = 0;
    }
  } else if (c == 'y') {
    ++i;
    var = 1;
  } else {
    return false;
  }
  pow = 1;
  if (i < s.size() && s[i] == '^') {
    ++i;
    size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) fail_usage("polynomial: expected an exponent after '^'");
    pow = std::atoi(s.substr(start, i - start).c_str());
  }
  return true;
}

} // namespace

Poly2 parse_poly2(const std::string &text) {
  Poly2 p;
  size_t i = 0;
  skip_ws(text, i);
  if (i >= text.size()) fail_usage("polynomial: empty input");
  while (i < text.size()) {
    double sign = 1.0;
    skip_ws(text, i);
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      if (text[i] == '-') sign = -1.0;
      ++i;
      skip_ws(text, i);
    }
    double coef = 1.0;
    bool saw_any = false;
    if (i < text.size() &&
        (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
      coef = parse_number(text, i);
      saw_any = true;
    }
    int a = 0, b = 0;
    for (;;) {
      skip_ws(text, i);
      if (i < text.size() && text[i] == '*') {
        if (!saw_any) fail_usage("polynomial: '*' without a left factor");
        ++i;
        skip_ws(text, i);
      }
      int var = 0, pw = 0;
      size_t save = i;
      if (!parse_var(text, i, var, pw)) {
        i = save;
        break;
      }
      saw_any = true;
      (var == 0 ? a : b) += pw;
    }
    if (!saw_any) fail_usage("polynomial: could not parse a term in '" + text + "'");
    p.terms.push_back({a, b, sign * coef});
    skip_ws(text, i);
    if (i < text.size() && text[i] != '+' && text[i] != '-')
      fail_usage("polynomial: unexpected character '" + std::string(1, text[i]) + "'");
  }
  return p;
}

double smooth_cutoff(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  double a = f(2.0 - 2.0 * s); // positive for s < 1
  double b = f(2.0 * s - 1.0); // positive for s > 1/2
  return a / (a + b);
}

HomogeneousWeight HomogeneousWeight::make_radial(int r) {
  if (r < 2) fail_domain("weight: degree must be >= 2");
  HomogeneousWeight w;
  w.r = r;
  w.radial = true;
  w.ellipticity = 1.0;
  return w;
}

HomogeneousWeight HomogeneousWeight::make_poly(int r, const Poly2 &phi0) {
  if (r < 2) fail_domain("weight: degree must be >= 2");
  if (phi0.empty()) fail_domain("weight: empty polynomial");
  for (const auto &t : phi0.terms)
    if (t.a + t.b != r)
      fail_domain("weight: polynomial is not homogeneous of the requested degree");
  HomogeneousWeight w;
  w.r = r;
  w.radial = false;
  w.phi0 = phi0;
  // Ellipticity and subharmonicity on a circle grid.  Both are needed for
  // the Gram integrals to converge and for the space to behave like a
  // weighted Fock space.
  Poly2 lap_x = phi0.dx().dx();
  Poly2 lap_y = phi0.dy().dy();
  double gmin = 1e300;
  constexpr int ngrid = 1024;
  for (int j = 0; j < ngrid; ++j) {
    double th = 2.0 * M_PI * j / ngrid;
    double c = std::cos(th), s = std::sin(th);
    double v = phi0.eval(c, s);
    gmin = std::min(gmin, v);
    double lap = lap_x.eval(c, s) + lap_y.eval(c, s);
    if (lap < -1e-10)
      fail_domain("weight: polynomial is not subharmonic");
  }
  if (gmin <= 1e-6)
    fail_domain("weight: polynomial is not elliptic (min on circle <= 1e-6)");
  w.ellipticity = gmin;
  return w;
}

double HomogeneousWeight::eval(double p1, double p2) const {
  if (radial) return std::pow(p1 * p1 + p2 * p2, 0.5 * r);
  return phi0.eval(p1, p2);
}

double HomogeneousWeight::g(double theta) const {
  if (radial) return 1.0;
  return phi0.eval(std::cos(theta), std::sin(theta));
}

double Perturbation::eval(double p1, double p2) const {
  if (R0 <= 0.0) fail_domain("perturbation: cutoff radius must be positive");
  double rho = std::sqrt(p1 * p1 + p2 * p2);
  if (rho >= R0) return 0.0;
  double chi = smooth_cutoff(rho / R0);
  if (chi == 0.0) return 0.0;
  return q.eval(p1, p2) * chi;
}

} // namespace ftkl::fock
