#include "rcip/abramowitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "rcip/gauss.hpp"

namespace rcip::bgkw {

namespace {

constexpr int kSeriesTerms = 26;
constexpr double kSeriesCutoff = 2.0;
constexpr double kCacheUpper = 130.0;

double psi_int(int n) {
  // digamma at a positive integer
  constexpr double euler = 0.5772156649015328606;
  double h = 0.0;
  for (int j = 1; j < n; ++j) h += 1.0 / j;
  return -euler + h;
}

// Small-x expansions (from the Mellin-Barnes residues of the defining
// integral):
//   J_{-1} = sum (a_m + b_m log x) x^{2m} + sum c_m x^{2m+1}
//   J_0    = sum e_m x^{2m} + sum o_m (p_m - log x) x^{2m+1}
//   J_1    = 1/2 + sum s_m x^{2m+1} + sum d_m (r_m - log x) x^{2m}
struct SeriesTables {
  std::array<double, kSeriesTerms> a, b, c;          // J_{-1}
  std::array<double, kSeriesTerms> e, o, op;         // J_0
  std::array<double, kSeriesTerms> s, d, dp;         // J_1
  SeriesTables() {
    double fact2m = 1.0, factm = 1.0;                // (2m)!, m!
    double fact2m1 = 1.0;                            // (2m+1)!
    for (int m = 0; m < kSeriesTerms; ++m) {
      if (m > 0) {
        fact2m *= (2.0 * m - 1.0) * (2.0 * m);
        factm *= m;
        fact2m1 = fact2m * (2.0 * m + 1.0);
      } else {
        fact2m1 = 1.0;
      }
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      a[m] = sign * (psi_int(2 * m + 1) + 0.5 * psi_int(m + 1)) / (fact2m * factm);
      b[m] = -sign / (fact2m * factm);
      c[m] = -std::tgamma(-m - 0.5) / (2.0 * fact2m1);
      e[m] = std::tgamma(0.5 - m) / (2.0 * fact2m);
      o[m] = -sign / (fact2m1 * factm);
      op[m] = psi_int(2 * m + 2) + 0.5 * psi_int(m + 1);
      s[m] = -std::tgamma(0.5 - m) / (2.0 * fact2m1);
      if (m >= 1) {
        double factm1 = factm / m;                   // (m-1)!
        d[m] = -sign / (fact2m * factm1);            // (-1)^(m-1)/((2m)!(m-1)!)
        dp[m] = psi_int(2 * m + 1) + 0.5 * psi_int(m);
      } else {
        d[m] = 0.0;
        dp[m] = 0.0;
      }
    }
  }
};

const SeriesTables& tables() {
  static const SeriesTables t;
  return t;
}

double series_jm1(double x) {
  const auto& T = tables();
  const double L = std::log(x), x2 = x * x;
  double sum = 0.0, p = 1.0;
  for (int m = 0; m < kSeriesTerms; ++m) {
    sum += (T.a[m] + T.b[m] * L) * p + T.c[m] * p * x;
    p *= x2;
    if (p == 0.0) break;
  }
  return sum;
}

double series_j0(double x) {
  const auto& T = tables();
  const double L = x > 0 ? std::log(x) : 0.0, x2 = x * x;
  double sum = 0.0, p = 1.0;
  for (int m = 0; m < kSeriesTerms; ++m) {
    sum += T.e[m] * p + T.o[m] * (T.op[m] - L) * p * x;
    p *= x2;
    if (p == 0.0) break;
  }
  return sum;
}

double series_j1(double x) {
  const auto& T = tables();
  const double L = x > 0 ? std::log(x) : 0.0, x2 = x * x;
  double sum = 0.5, p = 1.0;
  for (int m = 0; m < kSeriesTerms; ++m) {
    sum += T.s[m] * p * x + T.d[m] * (T.dp[m] - L) * p;
    p *= x2;
    if (p == 0.0) break;
  }
  return sum;
}

double gl16_on(const std::function<double(double)>& f, double a, double b) {
  const auto& rule = gl16();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int q = 0; q < 16; ++q)
    s += rule.weights[q] * f(mid + half * rule.nodes[q]);
  return s * half;
}

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gl16_on(f, a, mid);
  const double right = gl16_on(f, mid, b);
  const double err = std::abs(left + right - whole);
  // the rounding floor keeps panels whose two-level estimate is already at
  // machine precision from subdividing indefinitely
  const double floor = 20.0 * std::numeric_limits<double>::epsilon() *
                       (std::abs(left) + std::abs(right) + std::abs(whole));
  if (err <= std::max(tol, floor) || depth >= 52) return left + right;
  return adaptive_rec(f, a, mid, left, 0.5 * tol, depth + 1) +
         adaptive_rec(f, mid, b, right, 0.5 * tol, depth + 1);
}

} // namespace

double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_floor) {
  const double rough = gl16_on(f, a, b);
  const double tol = std::max(std::abs(rough) * rel_tol, abs_floor);
  return adaptive_rec(f, a, b, rough, tol, 0);
}

double abramowitz_j_quad(int n, double x, double rel_tol) {
  if (x <= 0.0) {
    if (n == -1) throw std::domain_error("abramowitz_j: J_{-1} diverges at 0");
    if (x < 0.0) throw std::domain_error("abramowitz_j: x must be >= 0");
    return n == 0 ? std::sqrt(kPi) / 2.0 : 0.5;
  }
  auto f = [n, x](double t) {
    return std::pow(t, n) * std::exp(-t * t - x / t);
  };
  // the integrand peaks near t* = (x/2)^(1/3); the exp(-x/t) layer near the
  // origin needs its own panels
  const double tstar = std::cbrt(0.5 * x);
  const double upper = std::max(tstar, 1.0) + 45.0;
  std::vector<double> pts = {0.0};
  for (double p : {x / 16.0, x / 4.0, x, 4.0 * x, tstar / 2.0, tstar, 1.0, 4.0,
                   upper}) {
    if (p > pts.back() && p < upper) pts.push_back(p);
  }
  pts.push_back(upper);
  double rough = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    rough += gl16_on(f, pts[i], pts[i + 1]);
  const double tol = std::max(std::abs(rough) * rel_tol, 1e-300);
  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double whole = gl16_on(f, pts[i], pts[i + 1]);
    total += adaptive_rec(f, pts[i], pts[i + 1], whole,
                          tol / double(pts.size()), 0);
  }
  return total;
}

double abramowitz_j_quad_exp(int n, double x, double rel_tol) {
  if (x <= 0.0) return abramowitz_j_quad(n, x, rel_tol);
  // t = e^{-tau}: integral becomes
  //   int_{-inf}^{inf} e^{-(n+1) tau} exp(-e^{-2 tau} - x e^{tau}) dtau
  auto f = [n, x](double tau) {
    return std::exp(-(n + 1.0) * tau - std::exp(-2.0 * tau) -
                    x * std::exp(tau));
  };
  // double-exponential decay on both sides
  const double lo = -5.0;
  const double hi = std::log((45.0 + std::abs(std::log(x))) / x + 1.0) + 1.0;
  std::vector<double> pts = {lo, -1.0, 0.0};
  const double layer = std::log(1.0 / x);
  if (layer > 0.0 && layer < hi) pts.push_back(layer);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  double rough = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    rough += gl16_on(f, pts[i], pts[i + 1]);
  const double tol = std::max(std::abs(rough) * rel_tol, 1e-300);
  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double whole = gl16_on(f, pts[i], pts[i + 1]);
    total += adaptive_rec(f, pts[i], pts[i + 1], whole,
                          tol / double(pts.size()), 0);
  }
  return total;
}

namespace {

// piecewise Chebyshev fit of log J_n in u = x^(2/3) over [cutoff, 130]
struct ChebCache {
  static constexpr int kSegments = 6;
  static constexpr int kDegree = 30;
  double u0, u1;
  std::array<std::array<double, kDegree + 1>, kSegments> coef;

  explicit ChebCache(int n) {
    u0 = std::pow(kSeriesCutoff, 2.0 / 3.0);
    u1 = std::pow(kCacheUpper, 2.0 / 3.0);
    const int m = kDegree + 1;
    for (int s = 0; s < kSegments; ++s) {
      const double a = u0 + (u1 - u0) * s / kSegments;
      const double b = u0 + (u1 - u0) * (s + 1) / kSegments;
      std::array<double, kDegree + 1> fj;
      std::array<double, kDegree + 1> xj;
      for (int j = 0; j < m; ++j) {
        xj[j] = std::cos(kPi * (2.0 * j + 1.0) / (2.0 * m));
        const double u = 0.5 * (a + b) + 0.5 * (b - a) * xj[j];
        fj[j] = std::log(abramowitz_j_quad(n, std::pow(u, 1.5), 1e-14));
      }
      // Chebyshev coefficients by discrete cosine sums at the roots grid
      for (int k = 0; k < m; ++k) {
        double ck = 0.0;
        for (int j = 0; j < m; ++j)
          ck += fj[j] * std::cos(kPi * k * (2.0 * j + 1.0) / (2.0 * m));
        coef[s][k] = ck * 2.0 / m;
      }
      coef[s][0] *= 0.5;
    }
  }

  double eval(double x) const {
    const double u = std::pow(x, 2.0 / 3.0);
    int s = static_cast<int>((u - u0) / (u1 - u0) * kSegments);
    s = std::min(kSegments - 1, std::max(0, s));
    const double a = u0 + (u1 - u0) * s / kSegments;
    const double b = u0 + (u1 - u0) * (s + 1) / kSegments;
    const double z = (2.0 * u - a - b) / (b - a);
    // Clenshaw
    double b1 = 0.0, b2 = 0.0;
    for (int k = kDegree; k >= 1; --k) {
      const double t = 2.0 * z * b1 - b2 + coef[s][k];
      b2 = b1;
      b1 = t;
    }
    return std::exp(z * b1 - b2 + coef[s][0]);
  }
};

const ChebCache& cache(int n) {
  static const ChebCache cm1(-1), c0(0), c1(1);
  switch (n) {
    case -1: return cm1;
    case 0: return c0;
    default: return c1;
  }
}

} // namespace

double abramowitz_j(int n, double x) {
  if (n < -1 || n > 1)
    throw std::invalid_argument("abramowitz_j: order must be -1, 0 or 1");
  if (x < 0.0) throw std::domain_error("abramowitz_j: x must be >= 0");
  if (x == 0.0) {
    if (n == -1) throw std::domain_error("abramowitz_j: J_{-1} diverges at 0");
    return n == 0 ? std::sqrt(kPi) / 2.0 : 0.5;
  }
  if (x <= kSeriesCutoff) {
    switch (n) {
      case -1: return series_jm1(x);
      case 0: return series_j0(x);
      default: return series_j1(x);
    }
  }
  if (x < kCacheUpper) return cache(n).eval(x);
  return abramowitz_j_quad(n, x, 1e-14);
}

JSplit j_minus1_split(double s) {
  const double as = std::abs(s);
  if (as > kSplitRadius)
    throw std::domain_error("j_minus1_split: |s| beyond the split radius");
  const auto& T = tables();
  const double s2 = s * s;
  JSplit out{0.0, 0.0, 0.0};
  double p = 1.0;
  for (int m = 0; m < kSeriesTerms; ++m) {
    out.S += T.a[m] * p;
    out.L += T.b[m] * p;
    out.A += T.c[m] * p;
    p *= s2;
    if (p == 0.0) break;
  }
  return out;
}

} // namespace rcip::bgkw
