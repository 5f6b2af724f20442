#pragma once

#include <functional>

#include "rcip/geometry.hpp"
#include "rcip/types.hpp"

namespace rcip::quad {

/// Level-independent local prolongation operators between the type-c and
/// type-b grids. P_bc interpolates point values (in the parameter), P_Wbc is
/// the weighted variant W_b P_bc W_c^{-1} acting on weight-multiplied
/// vectors; P_Wbc^T P_bc = I holds to machine precision.
struct ProlongationSet {
  RMatrix P_bc;    // nb x nc
  RMatrix P_Wbc;   // nb x nc
};

/// Two-sided variant: 96 x 64. One-sided: 48 x 32.
const ProlongationSet& prolongation(bool one_sided);

/// Rank-one block  f_fin f_coa^H / (f_coa^H f_coa); reproduces
/// block * f_coa = f_fin exactly. Throws if f_coa vanishes.
CMatrix rank_one_block(const CVector& f_fin, const CVector& f_coa);

/// f-dependent local prolongation P_fibc for one level: identity on the
/// outer panels shared by the b- and c-grids, a single rank-one block mapping
/// the c-grid Gamma** panels to the four (two, one-sided) nearest b-grid
/// panels. f_b and f_c are the f values on the level's b- and c-grids.
CMatrix build_P_f_bc(const CVector& f_b, const CVector& f_c, bool one_sided);

enum class SingularKind { Log, Abs };

/// Moments mu_j = int_{-1}^{1} P_j(t) log|xi - t| dt, j = 0..15, for a target
/// at local coordinate xi (inside or outside the panel).
RVector log_moments(double xi);

/// Moments nu_j = int_{-1}^{1} P_j(t) |xi - t| dt, j = 0..15.
RVector abs_moments(double xi);

/// Product-integration weights for a panel [a, b] and target x:
///   sum_q w_q phi(y_q) ~= int_a^b phi(y) sigma(|x - y|) dy
/// exact for panelwise polynomials phi of degree <= 15, with sigma = log or
/// the absolute value.
RVector singular_correction_weights(SingularKind kind, double target, double a,
                                    double b);

} // namespace rcip::quad
