#include <cmath>

#include "doctest.h"
#include "rcip/gauss.hpp"
#include "rcip/models.hpp"
#include "rcip/geometry.hpp"
#include "support/dense_oracle.hpp"

using namespace rcip;

TEST_CASE("laplace kernel row sums on the circle equal -lambda") {
  const Complex lam(0.5, 0.0);
  geom::OneCornerContour circle(kPi);
  models::LaplaceDlpKernel ker(lam);
  const auto mesh = geom::build_coarse_mesh(circle, 10);
  const CMatrix M = oracle::dense_system(circle, ker, mesh.node_offset,
                                         mesh.weights);
  // row sums of the K part applied to 1: K.1 = -lambda
  for (int p = 0; p < mesh.size(); p += 17) {
    Complex s(0, 0);
    for (int q = 0; q < mesh.size(); ++q) s += M(p, q);
    s -= 1.0;   // remove the identity
    CHECK(std::abs(s - (-lam)) < 1e-12);
  }
}

TEST_CASE("circle kernel is constant; lambda = 0 kills K") {
  geom::OneCornerContour circle(kPi);
  models::LaplaceDlpKernel ker(Complex(0.5, 0.0));
  // diametrically opposite points on the circle [t and t+0.5]
  const Complex k1 = ker.eval(circle.z(0, 0.1), circle.normal(0, 0.1),
                              circle.z(0, 0.6 - 1.0), circle.normal(0, -0.4));
  const Complex k2 = ker.eval(circle.z(0, 0.3), circle.normal(0, 0.3),
                              circle.z(0, 0.45), circle.normal(0, 0.45));
  CHECK(std::abs(k1 - k2) < 1e-14);

  models::LaplaceDlpKernel zero(Complex(0.0, 0.0));
  CHECK(std::abs(zero.eval(circle.z(0, 0.1), circle.normal(0, 0.1),
                           circle.z(0, 0.3), circle.normal(0, 0.3))) == 0.0);
  CHECK(std::abs(zero.diagonal_limit(circle.zp(0, 0.2), circle.zpp(0, 0.2))) ==
        0.0);
}

TEST_CASE("circle right-hand side values and symmetry") {
  models::CircleRhs f(Complex(0.5, 0.0));
  // ell = pi/2 at t = 1/2: f = 2 (pi/2)^{-1/2}
  CHECK(std::abs(f.eval(0, 0.5) - 2.0 * std::pow(kPi / 2.0, -0.5)) < 1e-14);
  CHECK(std::abs(f.eval(0, 0.5).real() - 1.5957691) < 1e-7);
  // symmetry f(ell) = f(pi - ell): offsets t and -t
  CHECK(std::abs(f.eval(0, 0.2) - f.eval(0, -0.2)) == 0.0);
  models::CircleRhs f0(Complex(0.0, 0.0));
  CHECK(std::abs(f0.eval(0, 0.37) - 2.0) < 1e-15);
  CHECK_THROWS_AS(f.eval(0, 0.0), std::domain_error);
}

TEST_CASE("corner right-hand side") {
  geom::OneCornerContour corner(kPi / 2);
  models::CornerRhs f(Complex(0.5, 0.0), corner);
  // |r| = 1 at t = 1/2: f = 1 + log 1 = 1
  CHECK(std::abs(f.eval(0, 0.5) - 1.0) < 1e-14);
  // real-valued for real alpha
  for (double t : {0.1, 0.37, -0.4})
    CHECK(f.eval(0, t).imag() == 0.0);
  // complex alpha formula at |r| = r0: r0^{-alpha} + log r0
  models::CornerRhs fc(Complex(1.0, 0.3), corner);
  const double r0 = std::abs(corner.z(0, 0.25));
  const Complex want = std::pow(Complex(r0), -Complex(1.0, 0.3)) + std::log(r0);
  CHECK(std::abs(fc.eval(0, 0.25) - want) < 1e-14);
}

TEST_CASE("analytic circle solution") {
  const Complex a(0.5, 0.0), l(0.5, 0.0);
  // q = 2 pi^{1/2} / (0.5 * 0.5) = 8 sqrt(pi)
  CHECK(std::abs(models::circle_exact_q(a, l) - 8.0 * std::sqrt(kPi)) < 1e-13);
  CHECK(models::circle_exact_q(a, l).real() ==
        doctest::Approx(14.179630808).epsilon(1e-9));
  // additive constant 4/sqrt(pi)
  CHECK(std::abs(models::circle_exact_rho_constant(a, l) -
                 4.0 / std::sqrt(kPi)) < 1e-13);
  CHECK(models::circle_exact_rho_constant(a, l).real() ==
        doctest::Approx(2.2567583).epsilon(1e-7));
  // alpha = 1 + 0.3i: finite limit value
  const Complex qc = models::circle_exact_q(Complex(1.0, 0.3), l);
  CHECK(std::isfinite(qc.real()));
  CHECK(std::isfinite(qc.imag()));
  const Complex want = 2.0 * std::pow(Complex(kPi), Complex(0.0, -0.3)) /
                       (Complex(0.0, -0.3) * 0.5);
  CHECK(std::abs(qc - want) < 1e-13);
  CHECK_THROWS_AS(models::circle_exact_q(Complex(1.0, 0.0), l),
                  std::domain_error);
}

TEST_CASE("analytic solution satisfies the dense Nystrom system away from gamma") {
  // pins the kernel sign convention: substituting rho = f + C into the fine
  // dense system must reproduce f
  const Complex a(0.5, 0.0), l(0.5, 0.0);
  geom::OneCornerContour circle(kPi);
  models::LaplaceDlpKernel ker(l);
  models::CircleRhs f(a);

  const int npan = 10, nsub = 60;
  // fine grid: coarse panels away from gamma + dyadic star panels
  const auto star = oracle::fine_star_grid(npan, nsub);
  std::vector<double> ts(star.t.data(), star.t.data() + star.t.size());
  std::vector<double> ws(star.w.data(), star.w.data() + star.w.size());
  const auto& rule = gl16();
  for (int p = 2; p < npan - 2; ++p) {
    for (int q = 0; q < 16; ++q) {
      double t = (p + 0.5 * (1.0 + rule.nodes[q])) / npan;
      if (t > 0.5) t -= 1.0;
      ts.push_back(t);
      ws.push_back(0.5 * rule.weights[q] / npan);
    }
  }
  RVector t(ts.size()), w(ws.size());
  for (size_t i = 0; i < ts.size(); ++i) { t[i] = ts[i]; w[i] = ws[i]; }

  const CMatrix M = oracle::dense_system(circle, ker, t, w);
  CVector rho(t.size());
  for (int i = 0; i < t.size(); ++i)
    rho[i] = models::circle_exact_rho(a, l, 0, t[i]);
  const CVector resid = M * rho;
  double worst = 0.0;
  for (int i = 0; i < t.size(); ++i) {
    if (std::abs(t[i]) < 0.05) continue;   // skip the corner zone
    const Complex fi = f.eval(0, t[i]);
    worst = std::max(worst, std::abs(resid[i] - fi) / std::abs(fi));
  }
  CHECK(worst < 1e-10);
}
