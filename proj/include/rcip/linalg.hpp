#pragma once

#include <functional>
#include <vector>

#include "rcip/types.hpp"

namespace rcip::linalg {

/// Solve A X = B by partially pivoted LU. Throws std::runtime_error carrying
/// the offending pivot magnitude when A is singular to working precision.
CMatrix lu_solve(const CMatrix& A, const CMatrix& B);

/// Inverse via lu_solve with identity right-hand side; refuses matrices with
/// 1-norm condition estimate above cond_limit.
CMatrix inverse(const CMatrix& A, double cond_limit = 1e12);

/// Cheap condition estimate ||A||_1 * ||A^-1||_1.
double cond_estimate_1(const CMatrix& A);

struct GmresResult {
  CVector x;
  int iters = 0;
  std::vector<double> residual_history;
  bool stagnated = false;
};

/// Full-orthogonalization GMRES (no restarts), modified Gram-Schmidt with one
/// reorthogonalization pass. Stops when the estimated relative residual drops
/// below tol. If the estimate fails to decrease by a factor (1 - 1e-3) over 5
/// consecutive iterations, the best iterate so far is returned with
/// stagnated = true. Throws if max_iter is reached without either outcome.
GmresResult gmres_solve(const std::function<CVector(const CVector&)>& apply,
                        const CVector& b, double tol, int max_iter);

/// Solve X = C1 * X * C2 + D by vectorizing to the dense (n^2)x(n^2) system
/// (I - C2^T (x) C1) vec(X) = vec(D).
CMatrix kron_linear_solve(const CMatrix& C1, const CMatrix& C2,
                          const CMatrix& D);

/// Both sides of the rectangular inversion identity
///   U (A + V B U)^{-1} V = ((U A^{-1} V)^{-1} + B)^{-1},
/// with A m x m invertible, B n x n, U n x m, V m x n, m >= n.
CMatrix lemma_lhs(const CMatrix& U, const CMatrix& A, const CMatrix& V,
                  const CMatrix& B);
CMatrix lemma_rhs(const CMatrix& U, const CMatrix& A, const CMatrix& V,
                  const CMatrix& B);

/// The companion identity
///   U (A + V B U)^{-1} = ((U A^{-1} V)^{-1} + B)^{-1} (U A^{-1} V)^{-1} U A^{-1}.
CMatrix lemma2_lhs(const CMatrix& U, const CMatrix& A, const CMatrix& V,
                   const CMatrix& B);
CMatrix lemma2_rhs(const CMatrix& U, const CMatrix& A, const CMatrix& V,
                   const CMatrix& B);

} // namespace rcip::linalg
