// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <random>

#include "ftkl/jet.hpp"

using namespace ftkl::jets;

namespace {

Jet random_jet(int nv, int md, std::mt19937 &rng, double fill = 0.5) {
  Jet f(nv, md);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto &c : f.c) {
    if (u(rng) > fill) continue;
    c = CRat(Rat(num(rng), den(rng)), Rat(num(rng), den(rng)));
  }
  return f;
}

// (1/2)(d1 + i d2), the operator dbar_solve inverts.
Jet dbar_apply(const Jet &f) {
  return scale(add(derive(f, 0), scale(derive(f, 1), crat_i())), CRat(Rat(1, 2)));
}

} // namespace

TEST_CASE("jet indexing round-trips") {
  for (int nv : {2, 3}) {
    Jet f(nv, 6);
    for (int i = 0; i < f.size(); ++i) {
      auto e = f.exponents(i);
      CHECK(f.index(e[0], e[1], e[2]) == i);
    }
  }
}

TEST_CASE("arithmetic basics and truncation") {
  Jet x1 = jet_var(2, 4, 0), x2 = jet_var(2, 4, 1);
  Jet p = mul(x1, x2);
  CHECK(p.coeff(1, 1) == CRat(1));
  CHECK(total_order(p) == 2);

  // Products beyond the cap vanish: at maxdeg 2, x1^2 * x1 has no slot.
  Jet y = jet_var(2, 2, 0);
  Jet y2 = mul(y, y);
  CHECK(mul(y2, y).is_zero());

  Jet d = derive(y2, 0);
  CHECK(d.coeff(1, 0) == CRat(2));
}

TEST_CASE("Leibniz rule at every retained degree") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 30; ++trial) {
    int nv = (trial % 2) ? 3 : 2;
    int md = 3 + trial % 4;
    Jet a = random_jet(nv, md, rng), b = random_jet(nv, md, rng);
    for (int j = 0; j < nv; ++j) {
      Jet lhs = derive(mul(a, b), j);
      Jet rhs = add(mul(derive(a, j), b), mul(a, derive(b, j)));
      // Degree md-1 of the product needs degree-md terms of both factors,
      // which are retained; degree md of the derivative is not determined.
      Jet diff = truncate(sub(lhs, rhs), md - 1);
      CHECK(diff.is_zero());
    }
  }
}

TEST_CASE("compose with linear substitutions is exact") {
  std::mt19937 rng(777);
  Jet f = random_jet(2, 5, rng);
  CHECK(sub(from_zeta_eta(to_zeta_eta(f)), f).is_zero());
  Jet g = random_jet(3, 5, rng);
  CHECK(sub(from_zeta_eta(to_zeta_eta(g)), g).is_zero());
}

TEST_CASE("compose truncates above the cap") {
  // f(u) = u^2 with u = x1 + x1^2 at maxdeg 3: result x1^2 + 2 x1^3.
  Jet f(2, 3);
  f.set_coeff(2, 0, CRat(1));
  Jet x1 = jet_var(2, 3, 0);
  Jet u = add(x1, mul(x1, x1));
  Jet r = compose(f, {u, jet_var(2, 3, 1)});
  CHECK(r.coeff(2, 0) == CRat(1));
  CHECK(r.coeff(3, 0) == CRat(2));
}

TEST_CASE("dbar_solve on constants and zeta") {
  // g = 1/2 -> f = eta/2 = (x1 - i x2)/2.
  Jet g = jet_const(2, 4, CRat(Rat(1, 2)));
  Jet f = dbar_solve(g);
  CHECK(f.coeff(1, 0) == CRat(Rat(1, 2)));
  CHECK(f.coeff(0, 1) == CRat(Rat(0), Rat(-1, 2)));
  CHECK(sub(truncate(dbar_apply(f), 3), truncate(g, 3)).is_zero());

  // g = zeta = x1 + i x2 -> f = zeta*eta = x1^2 + x2^2.
  Jet z = add(jet_var(2, 4, 0), scale(jet_var(2, 4, 1), crat_i()));
  Jet fz = dbar_solve(z);
  CHECK(fz.coeff(2, 0) == CRat(1));
  CHECK(fz.coeff(0, 2) == CRat(1));
  CHECK(fz.coeff(1, 1) == CRat(0));
}

TEST_CASE("dbar_solve monomial preimage in the zeta basis") {
  // zeta^a eta^b x3^c maps to zeta^a eta^(b+1) x3^c / (b+1).
  Jet g(3, 5);
  g.set_coeff(2, 1, 1, CRat(3)); // 3 * zeta^2 eta x3 in the zeta basis
  Jet f = dbar_solve(from_zeta_eta(g));
  Jet fz = to_zeta_eta(f);
  CHECK(fz.coeff(2, 2, 1) == CRat(3) / CRat(2));
  int nonzero = 0;
  for (const auto &v : fz.c)
    if (!v.is_zero()) ++nonzero;
  CHECK(nonzero == 1);
}

TEST_CASE("dbar_solve inverts the operator and honors the gauge") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    int nv = (trial % 2) ? 3 : 2;
    int md = 3 + trial % 3;
    Jet g = random_jet(nv, md, rng);
    Jet f = dbar_solve(g);
    CHECK(sub(truncate(dbar_apply(f), md - 1), truncate(g, md - 1)).is_zero());
    Jet fz = to_zeta_eta(f);
    for (int i = 0; i < fz.size(); ++i) {
      auto e = fz.exponents(i);
      if (e[1] == 0) CHECK(fz.c[i].is_zero());
    }
  }
}

TEST_CASE("weighted order uses the (1,1,r) grading") {
  int r = 4;
  Jet f(3, 6);
  f.weights = std::array<int, 3>{1, 1, r};
  f.set_coeff(0, 0, 1, CRat(1)); // x3
  CHECK(weighted_order(f) == r);
  f.set_coeff(1, 0, 1, CRat(1)); // x1 x3
  CHECK(weighted_order(f) == r); // min over monomials
  Jet g(3, 6);
  g.weights = std::array<int, 3>{1, 1, r};
  g.set_coeff(1, 0, 1, CRat(1));
  CHECK(weighted_order(g) == 1 + r);
  CHECK(total_order(g) == 2);
}

TEST_CASE("serialization round-trips exactly") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    Jet f = random_jet(trial % 2 ? 3 : 2, 4, rng);
    Jet g = from_text(to_text(f));
    CHECK(g.nvars == f.nvars);
    CHECK(g.maxdeg == f.maxdeg);
    CHECK(sub(f, g).is_zero());
  }
  CHECK_THROWS_AS((void)from_text("jet 2 4 1\n1 2"), ftkl::error);
}
