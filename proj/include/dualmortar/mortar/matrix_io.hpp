#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "dualmortar/common/sparse.hpp"

namespace dualmortar::mortar {

struct SparsityReport {
    long rows = 0;
    long cols = 0;
    long nnz = 0;
    double fill_ratio = 0.0;  ///< nnz / (rows * cols)
    long bandwidth = 0;       ///< max |i - j| over stored entries
};

SparsityReport sparsity(const SparseMatrix& m);
nlohmann::json to_json(const SparsityReport& r);

/// Matrix Market coordinate format, 1-based indices, values with 17 significant digits.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);
void write_matrix_market(const std::string& path, const SparseMatrix& m);

/// Reads a real coordinate Matrix Market file (general or symmetric).
SparseMatrix read_matrix_market(std::istream& in);

}  // namespace dualmortar::mortar
