#include <cmath>
#include <random>

#include "doctest.h"
#include "rcip/abramowitz.hpp"   // adaptive_quad oracle
#include "rcip/gauss.hpp"
#include "rcip/geometry.hpp"
#include "rcip/quadrature.hpp"

using namespace rcip;

TEST_CASE("P_bc reproduces constants and low-degree polynomials") {
  for (bool one_sided : {false, true}) {
    const auto& pro = quad::prolongation(one_sided);
    const RVector ones = RVector::Ones(pro.P_bc.cols());
    CHECK(((pro.P_bc * ones).array() - 1.0).abs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("weighted pairing P_Wbc^T P_bc = I") {
  for (bool one_sided : {false, true}) {
    const auto& pro = quad::prolongation(one_sided);
    const RMatrix I = pro.P_Wbc.transpose() * pro.P_bc;
    CHECK((I - RMatrix::Identity(I.rows(), I.cols())).cwiseAbs().maxCoeff() <
          1e-13);
  }
}

TEST_CASE("P_bc matches direct evaluation of a degree-15 polynomial") {
  // Chebyshev-like test polynomial sampled on the two-sided c-grid
  geom::OneCornerContour corner(kPi / 2);
  const auto g = geom::local_type_b_grid(corner, 0, 2, 5, 10);
  auto poly = [&](double t) {
    const double x = t / (2.0 * g.h);   // map the span to [-1, 1]
    double v = 0.0, p = 1.0;
    for (int j = 0; j <= 15; ++j) {
      v += (j % 2 ? -0.3 : 1.0) / (1.0 + j) * std::cos(j * 0.7) * p;
      p *= x;
    }
    return v;
  };
  const auto& pro = quad::prolongation(false);
  RVector fc(64), fb(96);
  for (int i = 0; i < 64; ++i) fc[i] = poly(g.tc[i]);
  for (int i = 0; i < 96; ++i) fb[i] = poly(g.t[i]);
  // interpolation is exact per c-panel only for panelwise degree-15; a global
  // degree-15 polynomial is panelwise degree-15 everywhere
  CHECK(((pro.P_bc * fc - fb).cwiseAbs().maxCoeff() /
         fb.cwiseAbs().maxCoeff()) < 1e-12);
}

TEST_CASE("rank-one block reproduces f exactly and has rank one") {
  std::mt19937 gen(13);
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  CVector fc(32), ff(32);
  for (int i = 0; i < 32; ++i) {
    fc[i] = Complex(dist(gen), dist(gen));
    ff[i] = Complex(dist(gen), dist(gen));
  }
  const CMatrix B = quad::rank_one_block(ff, fc);
  CHECK((B * fc - ff).norm() / ff.norm() < 1e-15);

  const CMatrix Bsame = quad::rank_one_block(fc, fc);
  CHECK((Bsame * fc - fc).norm() / fc.norm() < 1e-15);

  Eigen::JacobiSVD<CMatrix> svd(B);
  CHECK(svd.singularValues()[1] <= 1e-14 * svd.singularValues()[0]);

  CHECK_THROWS_AS(quad::rank_one_block(ff, CVector::Zero(32)),
                  std::invalid_argument);
}

TEST_CASE("P_fibc reproduces singular and smooth f across grids") {
  geom::OneCornerContour circle(kPi);
  const auto g = geom::local_type_b_grid(circle, 0, 1, 3, 10);

  auto check_repro = [&](auto&& f) {
    CVector fb(96), fc(64);
    for (int i = 0; i < 96; ++i) fb[i] = f(g.t[i]);
    for (int i = 0; i < 64; ++i) fc[i] = f(g.tc[i]);
    const CMatrix P = quad::build_P_f_bc(fb, fc, false);
    CHECK((P * fc - fb).cwiseAbs().maxCoeff() / fb.cwiseAbs().maxCoeff() <
          1e-12);
    // identity blocks on the outer shared panels
    CHECK(std::abs(P(0, 0) - 1.0) == 0.0);
    CHECK(std::abs(P(95, 63) - 1.0) == 0.0);
    CHECK(std::abs(P(0, 20)) == 0.0);
    return P;
  };
  // f(r) = |r|^{-1/2} on the level-1 grid of the circle
  check_repro([&](double t) {
    return std::pow(std::abs(circle.z(0, t)), -0.5);
  });
  // smooth polynomial: the rank-one block still reproduces it by construction
  check_repro([](double t) { return 1.0 + 3.0 * t; });
}

TEST_CASE("log and abs moments against analytic values and quadrature") {
  // p = 1, panel (-1,1), target 0
  CHECK(std::abs(quad::log_moments(0.0)[0] - (-2.0)) < 1e-15);
  CHECK(std::abs(quad::abs_moments(0.0)[0] - 1.0) < 1e-15);

  // all Legendre degrees 0..15 against the adaptive oracle, targets on and
  // off the panel
  for (double xi : {0.0, 0.3, -0.7, 0.97, 1.02, 1.5, -2.5, 7.0}) {
    const RVector mu = quad::log_moments(xi);
    const RVector nu = quad::abs_moments(xi);
    for (int j = 0; j < 16; ++j) {
      auto pj = [j](double t) { return legendre_row(t, j)[j]; };
      double ml, ma;
      if (std::abs(xi) < 1.0) {
        ml = bgkw::adaptive_quad([&](double t) { return pj(t) * std::log(std::abs(xi - t)); }, -1.0, xi, 1e-14) +
             bgkw::adaptive_quad([&](double t) { return pj(t) * std::log(std::abs(xi - t)); }, xi, 1.0, 1e-14);
        ma = bgkw::adaptive_quad([&](double t) { return pj(t) * std::abs(xi - t); }, -1.0, xi, 1e-14) +
             bgkw::adaptive_quad([&](double t) { return pj(t) * std::abs(xi - t); }, xi, 1.0, 1e-14);
      } else {
        ml = bgkw::adaptive_quad([&](double t) { return pj(t) * std::log(std::abs(xi - t)); }, -1.0, 1.0, 1e-14);
        ma = bgkw::adaptive_quad([&](double t) { return pj(t) * std::abs(xi - t); }, -1.0, 1.0, 1e-14);
      }
      CHECK(std::abs(mu[j] - ml) <= 1e-12 * std::max(1.0, std::abs(ml)));
      CHECK(std::abs(nu[j] - ma) <= 1e-12 * std::max(1.0, std::abs(ma)));
    }
  }
}

TEST_CASE("correction weights integrate polynomial times singularity") {
  const auto& rule = gl16();
  // p = t^2 on (-1,1), sigma = log, target 0.3  (spec example)
  const RVector wl = quad::singular_correction_weights(
      quad::SingularKind::Log, 0.3, -1.0, 1.0);
  double got = 0.0;
  for (int q = 0; q < 16; ++q)
    got += wl[q] * rule.nodes[q] * rule.nodes[q];
  const double want =
      bgkw::adaptive_quad([](double t) { return t * t * std::log(std::abs(0.3 - t)); }, -1.0, 0.3, 1e-14) +
      bgkw::adaptive_quad([](double t) { return t * t * std::log(std::abs(0.3 - t)); }, 0.3, 1.0, 1e-14);
  CHECK(std::abs(got - want) < 1e-13);

  // scaled panel [0.2, 0.45], target inside, degree-7 polynomial, both kinds
  auto p7 = [](double y) { return 1.0 + y - 0.5 * y * y + std::pow(y, 7); };
  const double a = 0.2, b = 0.45, x0 = 0.3;
  const RVector wls =
      quad::singular_correction_weights(quad::SingularKind::Log, x0, a, b);
  const RVector was =
      quad::singular_correction_weights(quad::SingularKind::Abs, x0, a, b);
  double gl = 0.0, ga = 0.0;
  for (int q = 0; q < 16; ++q) {
    const double y = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q];
    gl += wls[q] * p7(y);
    ga += was[q] * p7(y);
  }
  const double el =
      bgkw::adaptive_quad([&](double y) { return p7(y) * std::log(std::abs(x0 - y)); }, a, x0, 1e-14) +
      bgkw::adaptive_quad([&](double y) { return p7(y) * std::log(std::abs(x0 - y)); }, x0, b, 1e-14);
  const double ea =
      bgkw::adaptive_quad([&](double y) { return p7(y) * std::abs(x0 - y); }, a, x0, 1e-14) +
      bgkw::adaptive_quad([&](double y) { return p7(y) * std::abs(x0 - y); }, x0, b, 1e-14);
  CHECK(std::abs(gl - el) < 1e-13);
  CHECK(std::abs(ga - ea) < 1e-14);
}
