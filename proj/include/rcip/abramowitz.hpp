#pragma once

#include <array>
#include <functional>

#include "rcip/types.hpp"

namespace rcip::bgkw {

/// Abramowitz function J_n(x) = int_0^inf t^n exp(-t^2 - x/t) dt for
/// n in {-1, 0, 1}. Small arguments use the power-plus-log series; mid-range
/// arguments a Chebyshev fit of log J_n in the variable x^(2/3), built once
/// from adaptive quadrature; very large arguments fall back to quadrature.
double abramowitz_j(int n, double x);

/// Smooth split parts of the kernel order:
///   J_{-1}(|s|) = S(s) + L(s) log|s| + A(s) |s|,
/// with S, L, A even entire functions (series in s^2). Valid for |s| <= 4;
/// throws beyond (callers evaluate the kernel directly there).
struct JSplit {
  double S;
  double L;
  double A;
};
JSplit j_minus1_split(double s);

/// Split validity radius in the scaled kernel argument.
inline constexpr double kSplitRadius = 4.0;

/// Adaptive composite Gauss-Legendre quadrature (16-point panels, bisect
/// until the two-level estimate converges). Used by the cache builder and by
/// test oracles.
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_floor = 1e-300);

/// Defining integral evaluated by adaptive quadrature in the t variable with
/// layer-aware split points (independent reference route).
double abramowitz_j_quad(int n, double x, double rel_tol = 1e-14);

/// Second independent route: substitution t = e^{-tau}.
double abramowitz_j_quad_exp(int n, double x, double rel_tol = 1e-14);

} // namespace rcip::bgkw
