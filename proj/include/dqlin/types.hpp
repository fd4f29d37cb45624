#pragma once

#include <complex>

#include <Eigen/Dense>

namespace dqlin {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dqlin
