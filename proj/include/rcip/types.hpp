#pragma once

#include <complex>
#include <Eigen/Dense>

namespace rcip {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

} // namespace rcip
