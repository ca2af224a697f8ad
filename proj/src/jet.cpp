// SPDX-License-Identifier: Apache-2.0
#include "ftkl/jet.hpp"

#include <sstream>

namespace ftkl::jets {

CRat operator+(const CRat &a, const CRat &b) { return CRat(a.re + b.re, a.im + b.im); }
CRat operator-(const CRat &a, const CRat &b) { return CRat(a.re - b.re, a.im - b.im); }
CRat operator-(const CRat &a) { return CRat(-a.re, -a.im); }
CRat operator*(const CRat &a, const CRat &b) {
  return CRat(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}
CRat operator/(const CRat &a, const CRat &b) {
  Rat n = b.re * b.re + b.im * b.im;
  if (n == 0) fail_domain("jets: division by zero coefficient");
  return CRat((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
}
bool operator==(const CRat &a, const CRat &b) { return a.re == b.re && a.im == b.im; }

int graded_size(int nv, int d) {
  if (d < 0) return 0;
  if (nv == 2) return (d + 1) * (d + 2) / 2;
  return (d + 1) * (d + 2) * (d + 3) / 6;
}

Jet::Jet(int nv, int md) : nvars(nv), maxdeg(md) {
  if (nv != 2 && nv != 3) fail_usage("jets: nvars must be 2 or 3");
  if (md < 0) fail_usage("jets: maxdeg must be nonnegative");
  c.assign(graded_size(nv, md), CRat());
}

bool Jet::is_zero() const {
  for (const auto &v : c)
    if (!v.is_zero()) return false;
  return true;
}

// Within the degree-d block of a 3-variable jet, monomials are ordered by
// descending a1 then descending a2, so the rank of (a1,a2,a3) is
// (d-a1)(d-a1+1)/2 + (d-a1-a2).
int Jet::index(int a1, int a2, int a3) const {
  if (a1 < 0 || a2 < 0 || a3 < 0) fail_usage("jets: negative exponent");
  if (nvars == 2 && a3 != 0) fail_usage("jets: x3 exponent in a 2-variable jet");
  int d = a1 + a2 + a3;
  if (d > maxdeg) fail_usage("jets: exponent beyond maxdeg");
  if (nvars == 2) return d * (d + 1) / 2 + a2;
  int s = d - a1;
  return d * (d + 1) * (d + 2) / 6 + s * (s + 1) / 2 + (s - a2);
}

std::array<int, 3> Jet::exponents(int idx) const {
  int d = 0;
  while (graded_size(nvars, d) <= idx) ++d;
  int off = idx - (d > 0 ? graded_size(nvars, d - 1) : 0);
  if (nvars == 2) return {d - off, off, 0};
  int s = 0;
  while ((s + 1) * (s + 2) / 2 <= off) ++s;
  int r = off - s * (s + 1) / 2;
  return {d - s, s - r, r};
}

int Jet::degree_of(int idx) const {
  auto e = exponents(idx);
  return e[0] + e[1] + e[2];
}

const CRat &Jet::coeff(int a1, int a2, int a3) const { return c[index(a1, a2, a3)]; }

void Jet::set_coeff(int a1, int a2, int a3, const CRat &v) { c[index(a1, a2, a3)] = v; }

Jet jet_zero(int nv, int md) { return Jet(nv, md); }

Jet jet_const(int nv, int md, const CRat &v) {
  Jet f(nv, md);
  f.c[0] = v;
  return f;
}

Jet jet_var(int nv, int md, int j) {
  Jet f(nv, md);
  if (j < 0 || j >= nv) fail_usage("jets: variable index out of range");
  if (md < 1) fail_usage("jets: maxdeg too small for a variable monomial");
  int e[3] = {0, 0, 0};
  e[j] = 1;
  f.set_coeff(e[0], e[1], e[2], CRat(1));
  return f;
}

static void check_same_space(const Jet &a, const Jet &b, const char *op) {
  if (a.nvars != b.nvars || a.maxdeg != b.maxdeg)
    fail_usage(std::string("jets: shape mismatch in ") + op);
}

static bool merged_exact(const Jet &a, const Jet &b) { return a.exact && b.exact; }

Jet add(const Jet &a, const Jet &b) {
  check_same_space(a, b, "add");
  Jet r = a;
  for (int i = 0; i < r.size(); ++i) r.c[i] = r.c[i] + b.c[i];
  r.exact = merged_exact(a, b);
  return r;
}

Jet sub(const Jet &a, const Jet &b) {
  check_same_space(a, b, "sub");
  Jet r = a;
  for (int i = 0; i < r.size(); ++i) r.c[i] = r.c[i] - b.c[i];
  r.exact = merged_exact(a, b);
  return r;
}

Jet scale(const Jet &a, const CRat &s) {
  Jet r = a;
  for (auto &v : r.c) v = v * s;
  return r;
}

Jet mul(const Jet &a, const Jet &b) {
  check_same_space(a, b, "mul");
  Jet r(a.nvars, a.maxdeg);
  r.exact = merged_exact(a, b);
  r.weights = a.weights;
  for (int i = 0; i < a.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    auto ea = a.exponents(i);
    int da = ea[0] + ea[1] + ea[2];
    for (int j = 0; j < b.size(); ++j) {
      if (b.c[j].is_zero()) continue;
      auto eb = b.exponents(j);
      if (da + eb[0] + eb[1] + eb[2] > a.maxdeg) continue;
      int k = r.index(ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]);
      r.c[k] = r.c[k] + a.c[i] * b.c[j];
    }
  }
  return r;
}

Jet derive(const Jet &a, int j) {
  if (j < 0 || j >= a.nvars) fail_usage("jets: derive variable out of range");
  Jet r(a.nvars, a.maxdeg);
  r.exact = a.exact;
  r.weights = a.weights;
  for (int i = 0; i < a.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    auto e = a.exponents(i);
    if (e[j] == 0) continue;
    int n = e[j];
    e[j] -= 1;
    int k = r.index(e[0], e[1], e[2]);
    r.c[k] = r.c[k] + a.c[i] * CRat(n);
  }
  return r;
}

Jet truncate(const Jet &a, int deg) {
  Jet r = a;
  for (int i = 0; i < r.size(); ++i)
    if (r.degree_of(i) > deg) r.c[i] = CRat();
  return r;
}

Jet homogeneous_part(const Jet &a, int deg) {
  Jet r(a.nvars, a.maxdeg);
  r.exact = a.exact;
  r.weights = a.weights;
  for (int i = 0; i < a.size(); ++i)
    if (a.degree_of(i) == deg) r.c[i] = a.c[i];
  return r;
}

Jet compose(const Jet &f, const std::vector<Jet> &subs) {
  if (static_cast<int>(subs.size()) != f.nvars)
    fail_usage("jets: compose needs one substitution per variable");
  const Jet &model = subs[0];
  for (const auto &s : subs) {
    check_same_space(s, model, "compose");
    if (!s.c[0].is_zero())
      fail_usage("jets: compose substitution has nonzero constant term");
  }
  // Memoized powers of each substitution.
  std::vector<std::vector<Jet>> pw(f.nvars);
  for (int j = 0; j < f.nvars; ++j)
    pw[j].push_back(jet_const(model.nvars, model.maxdeg, CRat(1)));
  auto power = [&](int j, int n) -> const Jet & {
    while (static_cast<int>(pw[j].size()) <= n)
      pw[j].push_back(mul(pw[j].back(), subs[j]));
    return pw[j][n];
  };
  Jet r(model.nvars, model.maxdeg);
  r.exact = f.exact;
  for (const auto &s : subs) r.exact = r.exact && s.exact;
  for (int i = 0; i < f.size(); ++i) {
    if (f.c[i].is_zero()) continue;
    auto e = f.exponents(i);
    if (e[0] + e[1] + e[2] > model.maxdeg) continue; // maps above the cap
    Jet term = power(0, e[0]);
    if (e[1] > 0) term = mul(term, power(1, e[1]));
    if (f.nvars == 3 && e[2] > 0) term = mul(term, power(2, e[2]));
    r = add(r, scale(term, f.c[i]));
  }
  return r;
}

int weighted_order(const Jet &a, std::optional<std::array<int, 3>> w) {
  std::array<int, 3> wt = w ? *w : a.weights.value_or(std::array<int, 3>{1, 1, 1});
  int best = -1;
  for (int i = 0; i < a.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    auto e = a.exponents(i);
    int o = e[0] * wt[0] + e[1] * wt[1] + e[2] * wt[2];
    if (best < 0 || o < best) best = o;
  }
  return best < 0 ? a.maxdeg + 1 : best;
}

int total_order(const Jet &a) { return weighted_order(a, std::array<int, 3>{1, 1, 1}); }

Jet to_zeta_eta(const Jet &f) {
  int nv = f.nvars, md = f.maxdeg;
  CRat half(Rat(1, 2)), mihalf(Rat(0), Rat(-1, 2)), ihalf(Rat(0), Rat(1, 2));
  // x1 = (zeta+eta)/2, x2 = -i(zeta-eta)/2
  std::vector<Jet> s;
  Jet z = jet_var(nv, md, 0), e = jet_var(nv, md, 1);
  s.push_back(add(scale(z, half), scale(e, half)));
  s.push_back(add(scale(z, mihalf), scale(e, ihalf)));
  if (nv == 3) s.push_back(jet_var(nv, md, 2));
  return compose(f, s);
}

Jet from_zeta_eta(const Jet &f) {
  int nv = f.nvars, md = f.maxdeg;
  CRat one(1), i = crat_i(), mi = -crat_i();
  // zeta = x1 + i x2, eta = x1 - i x2
  std::vector<Jet> s;
  Jet x1 = jet_var(nv, md, 0), x2 = jet_var(nv, md, 1);
  s.push_back(add(x1, scale(x2, i)));
  s.push_back(add(x1, scale(x2, mi)));
  if (nv == 3) s.push_back(jet_var(nv, md, 2));
  return compose(f, s);
}

Jet dbar_solve(const Jet &g, dbar_gauge) {
  Jet gz = to_zeta_eta(g);
  Jet fz(g.nvars, g.maxdeg);
  fz.exact = gz.exact;
  for (int i = 0; i < gz.size(); ++i) {
    if (gz.c[i].is_zero()) continue;
    auto e = gz.exponents(i);
    if (e[0] + e[1] + e[2] >= g.maxdeg) continue; // preimage would exceed the cap
    int k = fz.index(e[0], e[1] + 1, e[2]);
    fz.c[k] = gz.c[i] / CRat(e[1] + 1);
  }
  Jet f = from_zeta_eta(fz);
  f.weights = g.weights;
  return f;
}

std::complex<double> eval(const Jet &f, const std::array<std::complex<double>, 3> &x) {
  std::complex<double> acc = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    if (f.c[i].is_zero()) continue;
    auto e = f.exponents(i);
    std::complex<double> t = f.c[i].to_complex();
    for (int k = 0; k < e[0]; ++k) t *= x[0];
    for (int k = 0; k < e[1]; ++k) t *= x[1];
    for (int k = 0; k < e[2]; ++k) t *= x[2];
    acc += t;
  }
  return acc;
}

bool has_imag_part(const Jet &f) {
  for (const auto &v : f.c)
    if (v.im != 0) return true;
  return false;
}

Jet conj_coeffs(const Jet &f) {
  Jet r = f;
  for (auto &v : r.c) v = v.conj();
  return r;
}

std::string nonzero_witness(const Jet &f) {
  for (int i = 0; i < f.size(); ++i) {
    if (f.c[i].is_zero()) continue;
    auto e = f.exponents(i);
    std::ostringstream os;
    os << "x^(" << e[0] << "," << e[1] << "," << e[2] << "): "
       << f.c[i].re.str() << " + " << f.c[i].im.str() << "*i";
    return os.str();
  }
  return "";
}

std::string to_text(const Jet &f) {
  std::ostringstream os;
  os << "jet " << f.nvars << " " << f.maxdeg << " " << (f.exact ? 1 : 0) << "\n";
  for (int i = 0; i < f.size(); ++i) {
    if (f.c[i].is_zero()) continue;
    auto e = f.exponents(i);
    os << e[0] << " " << e[1] << " " << e[2] << " " << f.c[i].re.str() << " "
       << f.c[i].im.str() << "\n";
  }
  os << "end\n";
  return os.str();
}

Jet from_text(const std::string &text, size_t *consumed) {
  std::istringstream is(text);
  std::string tag;
  int nv = 0, md = 0, ex = 1;
  if (!(is >> tag) || tag != "jet" || !(is >> nv >> md >> ex))
    fail_usage("jets: malformed jet header");
  Jet f(nv, md);
  f.exact = ex != 0;
  while (true) {
    std::string first;
    if (!(is >> first)) fail_usage("jets: unterminated jet text");
    if (first == "end") break;
    int a1 = 0, a2 = 0, a3 = 0;
    std::string re, im;
    try {
      a1 = std::stoi(first);
    } catch (const std::exception &) {
      fail_usage("jets: malformed jet term");
    }
    if (!(is >> a2 >> a3 >> re >> im)) fail_usage("jets: malformed jet term");
    try {
      f.set_coeff(a1, a2, a3, CRat(Rat(re), Rat(im)));
    } catch (const std::exception &) {
      fail_usage("jets: malformed rational coefficient");
    }
  }
  if (consumed) *consumed = static_cast<size_t>(is.tellg());
  return f;
}

} // namespace ftkl::jets
