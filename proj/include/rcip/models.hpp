#pragma once

#include <memory>

#include "rcip/geometry.hpp"
#include "rcip/types.hpp"

namespace rcip::models {

/// Pointwise-evaluable kernel of the integral operator K. The Nystrom entry
/// for target p and source q is eval(...) * |z'_q| * w_q, with the diagonal
/// limit substituted at p == q.
class KernelModel {
 public:
  virtual ~KernelModel() = default;
  virtual Complex eval(Complex z, Complex nu_z, Complex zq, Complex nu_zq) const = 0;
  /// Coincident-point limit (the factor multiplying |z'| w in the entry).
  virtual Complex diagonal_limit(Complex zp, Complex zpp) const = 0;
  virtual bool scale_invariant_on_wedges() const = 0;
};

/// K rho (r) = 2 lambda int dG/dnu(r, r') rho(r') dl', with the normal
/// derivative at the target and G = -log|r - r'| / (2 pi). The sign
/// convention is pinned by the circle identity K . 1 = -lambda.
class LaplaceDlpKernel final : public KernelModel {
 public:
  explicit LaplaceDlpKernel(Complex lambda) : lambda_(lambda) {}
  Complex eval(Complex z, Complex nu_z, Complex zq, Complex) const override;
  Complex diagonal_limit(Complex zp, Complex zpp) const override;
  bool scale_invariant_on_wedges() const override { return true; }
  Complex lambda() const { return lambda_; }

 private:
  Complex lambda_;
};

/// Right-hand side evaluable everywhere except the singular points; values
/// requested through (singular point index, parameter offset) pairs so deep
/// local grids stay exact.
class RhsModel {
 public:
  virtual ~RhsModel() = default;
  virtual Complex eval(int gamma, double t) const = 0;
  /// Leading homogeneous behavior near a singular point, used only by the
  /// fixed-point initializers; returns false if none is declared.
  virtual bool has_homogeneous_leading_term() const { return false; }
  virtual Complex leading_term(int gamma, double t) const;

  CVector eval_on(const geom::LocalGrid& g) const {
    CVector v(g.size());
    for (int i = 0; i < g.size(); ++i) v[i] = eval(g.gamma, g.t[i]);
    return v;
  }
  CVector eval_on_cgrid(const geom::LocalGrid& g) const {
    CVector v(g.csize());
    for (int i = 0; i < g.csize(); ++i) v[i] = eval(g.gamma, g.tc[i]);
    return v;
  }
};

/// f(r) = ell^-alpha + (pi - ell)^-alpha on the circle (theta = pi),
/// ell = arc length from gamma counterclockwise = pi * s.
class CircleRhs final : public RhsModel {
 public:
  explicit CircleRhs(Complex alpha);
  Complex eval(int gamma, double t) const override;
  bool has_homogeneous_leading_term() const override { return true; }
  Complex leading_term(int gamma, double t) const override;
  Complex alpha() const { return alpha_; }

 private:
  Complex alpha_;
};

/// f(r) = |r|^-alpha + log|r| on the one-corner contour.
class CornerRhs final : public RhsModel {
 public:
  CornerRhs(Complex alpha, const geom::Contour& contour)
      : alpha_(alpha), contour_(&contour) {}
  Complex eval(int gamma, double t) const override;
  bool has_homogeneous_leading_term() const override { return true; }
  Complex leading_term(int gamma, double t) const override;

 private:
  Complex alpha_;
  const geom::Contour* contour_;
};

/// Analytic solution of the circle transmission problem:
///   rho(r) = f(r) + 2 lambda pi^-alpha / ((1-alpha)(1-lambda)),
///   q      = 2 pi^(1-alpha) / ((1-alpha)(1-lambda)).
/// Throws for alpha = 1 or lambda = 1 (no solution).
Complex circle_exact_rho(Complex alpha, Complex lambda, int gamma, double t);
Complex circle_exact_rho_constant(Complex alpha, Complex lambda);
Complex circle_exact_q(Complex alpha, Complex lambda);

} // namespace rcip::models
