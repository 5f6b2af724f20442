#include "rcip/gauss.hpp"

#include <cmath>
#include <stdexcept>

namespace rcip {

GLRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GLRule rule;
  rule.n = n;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi-style initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

const GLRule& gl16() {
  static const GLRule rule = gauss_legendre(16);
  return rule;
}

RVector legendre_row(double x, int jmax) {
  RVector p(jmax + 1);
  p[0] = 1.0;
  if (jmax >= 1) p[1] = x;
  for (int j = 1; j < jmax; ++j)
    p[j + 1] = ((2.0 * j + 1.0) * x * p[j] - j * p[j - 1]) / (j + 1.0);
  return p;
}

RMatrix lagrange_matrix(const RVector& xq, const RVector& xs) {
  const int m = static_cast<int>(xq.size());
  const int n = static_cast<int>(xs.size());
  RMatrix L(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      double p = 1.0;
      for (int k = 0; k < n; ++k)
        if (k != j) p *= (xq[i] - xs[k]) / (xs[j] - xs[k]);
      L(i, j) = p;
    }
  }
  return L;
}

const RMatrix& interp_to_lower_half() {
  static const RMatrix L = [] {
    const RVector& T = gl16().nodes;
    RVector xq = (T.array() - 1.0) / 2.0;
    return lagrange_matrix(xq, T);
  }();
  return L;
}

const RMatrix& interp_to_upper_half() {
  static const RMatrix L = [] {
    const RVector& T = gl16().nodes;
    RVector xq = (T.array() + 1.0) / 2.0;
    return lagrange_matrix(xq, T);
  }();
  return L;
}

const RMatrix& legendre_vandermonde_invT() {
  static const RMatrix VinvT = [] {
    const RVector& T = gl16().nodes;
    RMatrix V(16, 16);
    for (int q = 0; q < 16; ++q) V.row(q) = legendre_row(T[q], 15).transpose();
    return RMatrix(V.inverse().transpose());
  }();
  return VinvT;
}

} // namespace rcip
