#pragma once

#include <vector>

#include "rcip/types.hpp"

namespace rcip {

/// Gauss-Legendre rule on (-1,1), nodes ascending, weights positive.
struct GLRule {
  int n = 0;
  RVector nodes;
  RVector weights;
};

/// Standard n-point Gauss-Legendre rule, built by Newton iteration on P_n.
GLRule gauss_legendre(int n);

/// The project-wide 16-point rule (cached).
const GLRule& gl16();

/// Legendre polynomials P_0..P_jmax at x (three-term recurrence).
RVector legendre_row(double x, int jmax);

/// Interpolation matrix L with L(i,j) = ell_j(xq[i]) for the Lagrange basis
/// on nodes xs. Columns index source nodes, rows target points.
RMatrix lagrange_matrix(const RVector& xq, const RVector& xs);

/// Interpolation matrices from a 16-node GL panel to its two dyadic halves
/// ((T-1)/2 and (T+1)/2 in panel-local coordinates).
const RMatrix& interp_to_lower_half();
const RMatrix& interp_to_upper_half();

/// Transposed inverse of the Legendre Vandermonde V(q,j) = P_j(T_q) for the
/// 16-point rule; maps moment vectors to product-integration weights.
const RMatrix& legendre_vandermonde_invT();

} // namespace rcip
