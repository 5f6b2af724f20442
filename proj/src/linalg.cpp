#include "rcip/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rcip::linalg {

CMatrix lu_solve(const CMatrix& A, const CMatrix& B) {
  if (A.rows() != A.cols() || A.rows() != B.rows())
    throw std::invalid_argument("lu_solve: dimension mismatch");
  Eigen::PartialPivLU<CMatrix> lu(A);
  const auto& U = lu.matrixLU();
  double pivot_min = std::numeric_limits<double>::infinity();
  double pivot_max = 0.0;
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    const double p = std::abs(U(i, i));
    pivot_min = std::min(pivot_min, p);
    pivot_max = std::max(pivot_max, p);
  }
  if (!(pivot_min > pivot_max * 1e-15) || !std::isfinite(pivot_min)) {
    std::ostringstream msg;
    msg << "lu_solve: singular to working precision (smallest pivot "
        << pivot_min << ")";
    throw std::runtime_error(msg.str());
  }
  return lu.solve(B);
}

CMatrix inverse(const CMatrix& A, double cond_limit) {
  CMatrix I = CMatrix::Identity(A.rows(), A.cols());
  CMatrix Ainv = lu_solve(A, I);
  const double cond = A.cwiseAbs().colwise().sum().maxCoeff() *
                      Ainv.cwiseAbs().colwise().sum().maxCoeff();
  if (cond > cond_limit) {
    std::ostringstream msg;
    msg << "inverse: condition estimate " << cond << " exceeds limit "
        << cond_limit;
    throw std::runtime_error(msg.str());
  }
  return Ainv;
}

double cond_estimate_1(const CMatrix& A) {
  CMatrix Ainv = lu_solve(A, CMatrix::Identity(A.rows(), A.cols()));
  return A.cwiseAbs().colwise().sum().maxCoeff() *
         Ainv.cwiseAbs().colwise().sum().maxCoeff();
}

GmresResult gmres_solve(const std::function<CVector(const CVector&)>& apply,
                        const CVector& b, double tol, int max_iter) {
  const Eigen::Index n = b.size();
  const double bnorm = b.norm();
  if (bnorm == 0.0) throw std::invalid_argument("gmres_solve: b is zero");
  max_iter = std::min<int>(max_iter, static_cast<int>(n));

  std::vector<CVector> V;
  V.reserve(max_iter + 1);
  V.push_back(b / bnorm);
  CMatrix H = CMatrix::Zero(max_iter + 1, max_iter);
  std::vector<Complex> cs(max_iter), sn(max_iter);
  CVector g = CVector::Zero(max_iter + 1);
  g[0] = bnorm;

  GmresResult res;
  double best_resid = 1.0;
  int best_k = 0;
  int no_progress = 0;

  int k = 0;
  for (; k < max_iter; ++k) {
    CVector w = apply(V[k]);
    // modified Gram-Schmidt with one reorthogonalization pass
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j <= k; ++j) {
        const Complex h = V[j].dot(w); // conjugated dot
        w -= h * V[j];
        H(j, k) += h;
      }
    }
    const double hnext = w.norm();
    H(k + 1, k) = hnext;
    if (hnext > 0.0) V.push_back(w / hnext);

    // apply accumulated Givens rotations, then form the new one
    for (int j = 0; j < k; ++j) {
      const Complex t = cs[j] * H(j, k) + sn[j] * H(j + 1, k);
      H(j + 1, k) = -std::conj(sn[j]) * H(j, k) + cs[j] * H(j + 1, k);
      H(j, k) = t;
    }
    const double denom = std::hypot(std::abs(H(k, k)), hnext);
    if (denom == 0.0) {
      cs[k] = 1.0;
      sn[k] = 0.0;
    } else {
      cs[k] = std::abs(H(k, k)) / denom;
      const Complex phase =
          (std::abs(H(k, k)) == 0.0) ? Complex(1, 0) : H(k, k) / std::abs(H(k, k));
      sn[k] = phase * std::conj(Complex(hnext)) / denom;
      // rotate so that H(k,k) <- phase*denom, H(k+1,k) <- 0
    }
    const Complex t = cs[k] * H(k, k) + sn[k] * H(k + 1, k);
    H(k, k) = t;
    H(k + 1, k) = 0.0;
    g[k + 1] = -std::conj(sn[k]) * g[k];
    g[k] = cs[k] * g[k];

    const double resid = std::abs(g[k + 1]) / bnorm;
    res.residual_history.push_back(resid);

    if (resid < best_resid * (1.0 - 1e-3)) {
      no_progress = 0;
    } else {
      ++no_progress;
    }
    if (resid < best_resid) {
      best_resid = resid;
      best_k = k + 1;
    }
    if (resid <= tol || hnext == 0.0) {
      best_k = k + 1;
      best_resid = resid;
      break;
    }
    if (no_progress >= 5) {
      res.stagnated = true;
      break;
    }
  }
  if (!res.stagnated && best_resid > tol && k == max_iter) {
    std::ostringstream msg;
    msg << "gmres_solve: max_iter reached, best residual " << best_resid;
    throw std::runtime_error(msg.str());
  }

  // solve the triangular system for the best iterate
  const int m = best_k;
  CVector y = CVector::Zero(m);
  for (int i = m - 1; i >= 0; --i) {
    Complex s = g[i];
    for (int j = i + 1; j < m; ++j) s -= H(i, j) * y[j];
    y[i] = s / H(i, i);
  }
  CVector x = CVector::Zero(n);
  for (int j = 0; j < m; ++j) x += y[j] * V[j];
  res.x = x;
  res.iters = m;
  return res;
}

CMatrix kron_linear_solve(const CMatrix& C1, const CMatrix& C2,
                          const CMatrix& D) {
  const Eigen::Index n1 = C1.rows();
  const Eigen::Index n2 = C2.cols();
  if (C1.cols() != D.rows() || C2.rows() != D.cols())
    throw std::invalid_argument("kron_linear_solve: dimension mismatch");
  const Eigen::Index N = n1 * n2;
  CMatrix M = CMatrix::Identity(N, N);
  // vec(C1 X C2) = (C2^T (x) C1) vec(X), column-major vec
  for (Eigen::Index j = 0; j < n2; ++j)
    for (Eigen::Index i = 0; i < C2.rows(); ++i)
      M.block(j * n1, i * n1, n1, n1) -= C2(i, j) * C1;
  Eigen::Map<const CVector> d(D.data(), N);
  CVector x = lu_solve(M, d);
  return Eigen::Map<const CMatrix>(x.data(), D.rows(), D.cols());
}

CMatrix lemma_lhs(const CMatrix& U, const CMatrix& A, const CMatrix& V,
                  const CMatrix& B) {
  return U * lu_solve(A + V * B * U, CMatrix(V));
}

CMatrix lemma_rhs(const CMatrix& U, const CMatrix& A, const CMatrix& V,
                  const CMatrix& B) {
  const CMatrix UAiV = U * lu_solve(A, CMatrix(V));
  const CMatrix inner = inverse(UAiV) + B;
  return inverse(inner);
}

CMatrix lemma2_lhs(const CMatrix& U, const CMatrix& A, const CMatrix& V,
                   const CMatrix& B) {
  const CMatrix I = CMatrix::Identity(A.rows(), A.cols());
  return U * lu_solve(A + V * B * U, I);
}

CMatrix lemma2_rhs(const CMatrix& U, const CMatrix& A, const CMatrix& V,
                   const CMatrix& B) {
  const CMatrix UAi = U * lu_solve(A, CMatrix::Identity(A.rows(), A.cols()));
  const CMatrix UAiV = UAi * V;
  const CMatrix UAiV_inv = inverse(UAiV);
  return inverse(UAiV_inv + B) * UAiV_inv * UAi;
}

} // namespace rcip::linalg
