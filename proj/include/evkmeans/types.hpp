#pragma once

#include <Eigen/Core>

namespace evkmeans {

// Samples are rows. Row-major keeps per-sample access contiguous and maps
// onto numpy's default layout without copies on the binding side.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVec = Eigen::RowVectorXd;

}  // namespace evkmeans
