#pragma once

#include <Eigen/Dense>

namespace lrcc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace lrcc
