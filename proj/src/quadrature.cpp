#include "rcip/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "rcip/gauss.hpp"

namespace rcip::quad {

namespace {

ProlongationSet make_prolongation(bool one_sided) {
  const auto& rule = gl16();
  const RMatrix& Lm = interp_to_lower_half();
  const RMatrix& Lp = interp_to_upper_half();
  ProlongationSet ps;
  if (one_sided) {
    // b panels [0,h/2],[h/2,h],[h,2h]; c panels [0,h],[h,2h]
    ps.P_bc = RMatrix::Zero(48, 32);
    ps.P_bc.block(0, 0, 16, 16) = Lm;
    ps.P_bc.block(16, 0, 16, 16) = Lp;
    ps.P_bc.block(32, 16, 16, 16) = RMatrix::Identity(16, 16);
    RVector wb(48), wc(32);
    wb << 0.25 * rule.weights, 0.25 * rule.weights, 0.5 * rule.weights;
    wc << 0.5 * rule.weights, 0.5 * rule.weights;
    ps.P_Wbc = wb.asDiagonal() * ps.P_bc * wc.cwiseInverse().asDiagonal();
  } else {
    ps.P_bc = RMatrix::Zero(96, 64);
    ps.P_bc.block(0, 0, 16, 16) = RMatrix::Identity(16, 16);
    ps.P_bc.block(16, 16, 16, 16) = Lm;
    ps.P_bc.block(32, 16, 16, 16) = Lp;
    ps.P_bc.block(48, 32, 16, 16) = Lm;
    ps.P_bc.block(64, 32, 16, 16) = Lp;
    ps.P_bc.block(80, 48, 16, 16) = RMatrix::Identity(16, 16);
    RVector wb(96), wc(64);
    wb << 0.5 * rule.weights, 0.25 * rule.weights, 0.25 * rule.weights,
        0.25 * rule.weights, 0.25 * rule.weights, 0.5 * rule.weights;
    wc << 0.5 * rule.weights, 0.5 * rule.weights, 0.5 * rule.weights,
        0.5 * rule.weights;
    ps.P_Wbc = wb.asDiagonal() * ps.P_bc * wc.cwiseInverse().asDiagonal();
  }
  return ps;
}

} // namespace

const ProlongationSet& prolongation(bool one_sided) {
  static const ProlongationSet two = make_prolongation(false);
  static const ProlongationSet one = make_prolongation(true);
  return one_sided ? one : two;
}

CMatrix rank_one_block(const CVector& f_fin, const CVector& f_coa) {
  const Complex denom = f_coa.dot(f_coa); // conj(f_coa) . f_coa
  if (!(std::abs(denom) > 0.0))
    throw std::invalid_argument("rank_one_block: f_coa vanishes");
  return (f_fin * f_coa.adjoint()) / denom;
}

CMatrix build_P_f_bc(const CVector& f_b, const CVector& f_c, bool one_sided) {
  if (one_sided) {
    if (f_b.size() != 48 || f_c.size() != 32)
      throw std::invalid_argument("build_P_f_bc: bad sizes");
    CMatrix P = CMatrix::Zero(48, 32);
    P.block(0, 0, 32, 16) = rank_one_block(f_b.head(32), f_c.head(16));
    P.block(32, 16, 16, 16) = CMatrix::Identity(16, 16);
    return P;
  }
  if (f_b.size() != 96 || f_c.size() != 64)
    throw std::invalid_argument("build_P_f_bc: bad sizes");
  CMatrix P = CMatrix::Zero(96, 64);
  P.block(0, 0, 16, 16) = CMatrix::Identity(16, 16);
  P.block(16, 16, 64, 32) = rank_one_block(f_b.segment(16, 64), f_c.segment(16, 32));
  P.block(80, 48, 16, 16) = CMatrix::Identity(16, 16);
  return P;
}

namespace {

// Legendre functions of the second kind Q_0..Q_jmax at xi. On the cut the
// principal-value branch is used and the forward recurrence is stable. Just
// outside the cut the forward recurrence still holds its accuracy while the
// dominant solution P_j(xi) stays small; far outside, Q is the minimal
// solution and a backward (Miller) sweep with adaptive depth is used.
RVector legendre_q(double xi, int jmax) {
  RVector Q(jmax + 1);
  const double ax = std::abs(xi);
  if (ax <= 1.0) {
    Q[0] = 0.5 * std::log((1.0 + xi) / (1.0 - xi));
    if (jmax >= 1) Q[1] = xi * Q[0] - 1.0;
    for (int j = 1; j < jmax; ++j)
      Q[j + 1] = ((2.0 * j + 1.0) * xi * Q[j] - j * Q[j - 1]) / (j + 1.0);
    return Q;
  }
  const double rho = ax + std::sqrt(ax * ax - 1.0);
  if (std::pow(rho, jmax) < 1e4) {
    Q[0] = 0.5 * std::log((ax + 1.0) / (ax - 1.0));
    if (jmax >= 1) Q[1] = ax * Q[0] - 1.0;
    for (int j = 1; j < jmax; ++j)
      Q[j + 1] = ((2.0 * j + 1.0) * ax * Q[j] - j * Q[j - 1]) / (j + 1.0);
  } else {
    const int depth = std::min(
        40000, jmax + 20 + static_cast<int>(40.0 * std::log(10.0) / std::log(rho)));
    RVector q = RVector::Zero(depth + 2);
    q[depth] = 1.0;
    for (int j = depth; j >= 1; --j)
      q[j - 1] = ((2.0 * j + 1.0) * ax * q[j] - (j + 1.0) * q[j + 1]) / j;
    const double scale = 0.5 * std::log((ax + 1.0) / (ax - 1.0)) / q[0];
    for (int j = 0; j <= jmax; ++j) Q[j] = q[j] * scale;
  }
  if (xi < 0)
    for (int j = 0; j <= jmax; ++j)
      if (j % 2 == 0) Q[j] = -Q[j];
  return Q;
}

} // namespace

RVector log_moments(double xi) {
  if (std::abs(std::abs(xi) - 1.0) < 1e-14)
    throw std::invalid_argument("log_moments: target at a panel endpoint");
  RVector mu(16);
  const double t1 = (1.0 - xi) * std::log(std::abs(1.0 - xi));
  const double t2 = (1.0 + xi) * std::log(std::abs(1.0 + xi));
  mu[0] = t1 + t2 - 2.0;
  const RVector Q = legendre_q(xi, 16);
  for (int j = 1; j < 16; ++j)
    mu[j] = 2.0 * (Q[j + 1] - Q[j - 1]) / (2.0 * j + 1.0);
  return mu;
}

RVector abs_moments(double xi) {
  RVector nu = RVector::Zero(16);
  if (std::abs(xi) >= 1.0) {
    const double s = xi > 0 ? 1.0 : -1.0;
    nu[0] = s * 2.0 * xi;
    nu[1] = -s * 2.0 / 3.0;
    return nu;
  }
  const RVector P = legendre_row(xi, 17);
  RVector A(17), B(16);
  A[0] = 1.0 + xi;
  for (int j = 1; j < 17; ++j) A[j] = (P[j + 1] - P[j - 1]) / (2.0 * j + 1.0);
  B[0] = 0.5 * (xi * xi - 1.0);
  for (int j = 1; j < 16; ++j)
    B[j] = ((j + 1.0) * A[j + 1] + j * A[j - 1]) / (2.0 * j + 1.0);
  for (int j = 0; j < 16; ++j) {
    const double Tj = (j == 0) ? 2.0 : 0.0;
    const double Sj = (j == 1) ? 2.0 / 3.0 : 0.0;
    nu[j] = xi * (2.0 * A[j] - Tj) - (2.0 * B[j] - Sj);
  }
  return nu;
}

RVector singular_correction_weights(SingularKind kind, double target, double a,
                                    double b) {
  const double sigma = 0.5 * (b - a);
  const double xi = (2.0 * target - a - b) / (b - a);
  const RMatrix& VinvT = legendre_vandermonde_invT();
  if (kind == SingularKind::Log) {
    // int phi(y) log|x-y| dy = sigma [ sum_j c_j mu_j(xi) + log(sigma) int phi ]
    return sigma * (VinvT * log_moments(xi) +
                    std::log(sigma) * gl16().weights);
  }
  return sigma * sigma * (VinvT * abs_moments(xi));
}

} // namespace rcip::quad
