#pragma once

#include <Eigen/Sparse>

namespace dualmortar {

/// Compressed row storage with sorted column indices.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

}  // namespace dualmortar
