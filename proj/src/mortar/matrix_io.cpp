#include "dualmortar/mortar/matrix_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "dualmortar/common/errors.hpp"

namespace dualmortar::mortar {

SparsityReport sparsity(const SparseMatrix& m)
{
    SparsityReport r;
    r.rows = m.rows();
    r.cols = m.cols();
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            ++r.nnz;
            r.bandwidth = std::max<long>(r.bandwidth, std::labs(static_cast<long>(it.row() - it.col())));
        }
    const double cells = static_cast<double>(r.rows) * static_cast<double>(r.cols);
    r.fill_ratio = cells > 0 ? static_cast<double>(r.nnz) / cells : 0.0;
    return r;
}

nlohmann::json to_json(const SparsityReport& r)
{
    return {{"rows", r.rows}, {"cols", r.cols}, {"nnz", r.nnz}, {"fill_ratio", r.fill_ratio},
            {"bandwidth", r.bandwidth}};
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m)
{
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    char buf[64];
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            std::snprintf(buf, sizeof buf, "%.17g", it.value());
            out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << buf << '\n';
        }
}

void write_matrix_market(const std::string& path, const SparseMatrix& m)
{
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    write_matrix_market(out, m);
}

SparseMatrix read_matrix_market(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0) throw ConfigError("not a Matrix Market file");
    const bool symmetric = line.find("symmetric") != std::string::npos;
    while (std::getline(in, line) && !line.empty() && line[0] == '%') {
    }
    std::istringstream head(line);
    long rows = 0, cols = 0, nnz = 0;
    if (!(head >> rows >> cols >> nnz)) throw ConfigError("malformed Matrix Market size line");
    std::vector<Triplet> t;
    for (long k = 0; k < nnz; ++k) {
        long i = 0, j = 0;
        double v = 0.0;
        if (!(in >> i >> j >> v)) throw ConfigError("truncated Matrix Market file");
        t.emplace_back(i - 1, j - 1, v);
        if (symmetric && i != j) t.emplace_back(j - 1, i - 1, v);
    }
    SparseMatrix m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

}  // namespace dualmortar::mortar
