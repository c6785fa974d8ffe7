#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace uq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

}  // namespace uq
