#include <cmath>

#include "doctest.h"
#include "rcip/abramowitz.hpp"
#include "rcip/gauss.hpp"

using namespace rcip;
using bgkw::abramowitz_j;

TEST_CASE("values at zero") {
  CHECK(std::abs(abramowitz_j(0, 0.0) - std::sqrt(kPi) / 2.0) < 1e-14);
  CHECK(std::abs(abramowitz_j(1, 0.0) - 0.5) < 1e-14);
  CHECK_THROWS_AS(abramowitz_j(-1, 0.0), std::domain_error);
  CHECK_THROWS_AS(abramowitz_j(0, -1.0), std::domain_error);
}

TEST_CASE("two independent quadrature routes agree") {
  for (double x : {0.05, 0.7, 1.0, 3.0, 11.0}) {
    const double a = bgkw::abramowitz_j_quad(-1, x);
    const double b = bgkw::abramowitz_j_quad_exp(-1, x);
    CHECK(std::abs(a - b) / std::abs(a) < 1e-13);
    CHECK(std::abs(abramowitz_j(-1, x) - a) / std::abs(a) < 1e-12);
  }
}

TEST_CASE("evaluation against the defining integral across the range") {
  // 200 log-spaced points in [1e-6, 20] for each order
  for (int n : {-1, 0, 1}) {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double x =
          std::pow(10.0, -6.0 + (std::log10(20.0) + 6.0) * i / 199.0);
      const double ref = bgkw::abramowitz_j_quad(n, x);
      worst = std::max(worst, std::abs(abramowitz_j(n, x) - ref) / std::abs(ref));
    }
    CAPTURE(n);
    CHECK(worst <= 1e-12);
  }
  // spot checks beyond the table range
  for (double x : {40.0, 100.0, 140.0}) {
    const double ref = bgkw::abramowitz_j_quad(-1, x);
    CHECK(std::abs(abramowitz_j(-1, x) - ref) / std::abs(ref) < 1e-12);
  }
}

TEST_CASE("kernel split recombines to the function") {
  for (double s : {1e-6, 0.01, 0.1, 0.5, 1.0, 2.0, 3.5, 4.0}) {
    const auto sp = bgkw::j_minus1_split(s);
    const double rec = sp.S + sp.L * std::log(s) + sp.A * s;
    const double want = abramowitz_j(-1, s);
    CHECK(std::abs(rec - want) / std::abs(want) <= 1e-12);
  }
  CHECK_THROWS_AS(bgkw::j_minus1_split(4.5), std::domain_error);
}

TEST_CASE("leading log coefficient extracted numerically is -1") {
  // (J(x) - J(x/2) - [A(x) x - A(x/2) x/2] - [S(x) - S(x/2)]) / log 2 -> -L(0)
  const double x = 1e-5;
  const auto s1 = bgkw::j_minus1_split(x);
  const auto s2 = bgkw::j_minus1_split(x / 2);
  const double dJ = abramowitz_j(-1, x) - abramowitz_j(-1, x / 2);
  const double dA = s1.A * x - s2.A * (x / 2);
  const double dS = s1.S - s2.S;
  const double L0 = (dJ - dA - dS) / (std::log(x) - std::log(x / 2));
  CHECK(std::abs(L0 - (-1.0)) < 1e-9);
}

TEST_CASE("split parts are panelwise degree-15 smooth") {
  // sample S, L, A on a panel spanning the split radius and compare the
  // degree-15 interpolant at probe points
  const auto& rule = rcip::gl16();
  const double a = 0.0, b = 4.0;
  RVector S(16), L(16), A(16);
  for (int q = 0; q < 16; ++q) {
    const auto sp =
        bgkw::j_minus1_split(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q]);
    S[q] = sp.S;
    L[q] = sp.L;
    A[q] = sp.A;
  }
  RVector probes(16);
  for (int j = 0; j < 16; ++j)
    probes[j] = std::cos((2.0 * j + 1.0) * kPi / 32.0);
  const RMatrix Lg = lagrange_matrix(probes, rule.nodes);
  RVector Sp(16), Lp(16), Ap(16);
  for (int j = 0; j < 16; ++j) {
    const auto sp =
        bgkw::j_minus1_split(0.5 * (a + b) + 0.5 * (b - a) * probes[j]);
    Sp[j] = sp.S;
    Lp[j] = sp.L;
    Ap[j] = sp.A;
  }
  CHECK((Lg * S - Sp).cwiseAbs().maxCoeff() / Sp.cwiseAbs().maxCoeff() < 1e-12);
  CHECK((Lg * L - Lp).cwiseAbs().maxCoeff() / Lp.cwiseAbs().maxCoeff() < 1e-12);
  CHECK((Lg * A - Ap).cwiseAbs().maxCoeff() / Ap.cwiseAbs().maxCoeff() < 1e-12);
}
