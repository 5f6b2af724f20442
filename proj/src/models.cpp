#include "rcip/models.hpp"

#include <cmath>
#include <stdexcept>

namespace rcip::models {

Complex LaplaceDlpKernel::eval(Complex z, Complex nu_z, Complex zq,
                               Complex) const {
  // 2 lambda nu(r).grad_r G = -(lambda/pi) Re(nu / (z - z'))
  const Complex d = z - zq;
  return -(lambda_ / kPi) * std::real(nu_z / d);
}

Complex LaplaceDlpKernel::diagonal_limit(Complex zp, Complex zpp) const {
  // curvature kappa = Im(conj(z') z'') / |z'|^3; limit value -(lambda/2pi) kappa
  const double kappa = std::imag(std::conj(zp) * zpp) / std::pow(std::abs(zp), 3);
  return -(lambda_ / (2.0 * kPi)) * kappa;
}

Complex RhsModel::leading_term(int, double) const {
  throw std::logic_error("RhsModel: no homogeneous leading term declared");
}

CircleRhs::CircleRhs(Complex alpha) : alpha_(alpha) {
  const bool ok = alpha.real() < 1.0 ||
                  (alpha.real() == 1.0 && alpha.imag() != 0.0);
  if (!ok)
    throw std::invalid_argument("CircleRhs: need Re(alpha) < 1 or alpha = 1 + ti");
}

Complex CircleRhs::eval(int, double t) const {
  if (t == 0.0) throw std::domain_error("CircleRhs: evaluation at gamma");
  // distances to gamma along the two arcs, as fractions of the circumference
  const double d0 = t >= 0 ? t : 1.0 + t;
  const double d1 = t >= 0 ? 1.0 - t : -t;
  return std::pow(Complex(kPi * d0), -alpha_) +
         std::pow(Complex(kPi * d1), -alpha_);
}

Complex CircleRhs::leading_term(int, double t) const {
  return std::pow(Complex(kPi * std::abs(t)), -alpha_);
}

Complex CornerRhs::eval(int gamma, double t) const {
  const double r = std::abs(contour_->z(gamma, t));
  if (r == 0.0) throw std::domain_error("CornerRhs: evaluation at gamma");
  return std::pow(Complex(r), -alpha_) + std::log(r);
}

Complex CornerRhs::leading_term(int gamma, double t) const {
  return std::pow(Complex(std::abs(contour_->z(gamma, t))), -alpha_);
}

Complex circle_exact_rho_constant(Complex alpha, Complex lambda) {
  if (alpha == Complex(1.0, 0.0) || lambda == Complex(1.0, 0.0))
    throw std::domain_error("circle_exact: no solution for alpha=1 or lambda=1");
  return 2.0 * lambda * std::pow(Complex(kPi), -alpha) /
         ((1.0 - alpha) * (1.0 - lambda));
}

Complex circle_exact_rho(Complex alpha, Complex lambda, int gamma, double t) {
  CircleRhs f(alpha);
  return f.eval(gamma, t) + circle_exact_rho_constant(alpha, lambda);
}

Complex circle_exact_q(Complex alpha, Complex lambda) {
  if (alpha == Complex(1.0, 0.0) || lambda == Complex(1.0, 0.0))
    throw std::domain_error("circle_exact: no solution for alpha=1 or lambda=1");
  return 2.0 * std::pow(Complex(kPi), 1.0 - alpha) /
         ((1.0 - alpha) * (1.0 - lambda));
}

} // namespace rcip::models
