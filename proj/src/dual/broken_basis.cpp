#include "dualmortar/dual/broken_basis.hpp"

#include <string>

#include "dualmortar/common/errors.hpp"

namespace dualmortar::dual {

std::vector<int> pyramid_permutation(int n)
{
    std::vector<int> pi;
    pi.reserve(n);
    const int c = (n + 1) / 2 - 1;
    pi.push_back(c);
    for (int s = 1; static_cast<int>(pi.size()) < n; ++s) {
        if (c - s >= 0) pi.push_back(c - s);
        if (c + s < n) pi.push_back(c + s);
    }
    return pi;
}

Eigen::MatrixXd local_extension_vectors(int n)
{
    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(n, n);
    raw.row(0).setOnes();
    for (int j = 1; j < n; ++j) {
        raw.row(j).head(j).setConstant(-1.0);
        raw(j, j) = j;
    }
    const std::vector<int> pi = pyramid_permutation(n);
    Eigen::MatrixXd a(n, n);
    for (int k = 0; k < n; ++k) a.col(pi[k]) = raw.col(k);
    return a;
}

BrokenBasis::BrokenBasis(spline::SplineSpace1D space, CrosspointFlags flags)
    : space_(std::move(space)), flags_(flags)
{
    const int n = space_.num_basis();
    const int p = space_.degree();
    const auto& kv = space_.knots();
    const int removed = (flags_.left ? 1 : 0) + (flags_.right ? 1 : 0);
    if (n - removed < 1 || (removed > 0 && n < p + 2))
        throw ConstructionError("broken basis: " + std::to_string(n) + " B-splines of degree " + std::to_string(p) +
                                " leave no multiplier space after crosspoint removal");

    keep_.assign(n, true);
    if (flags_.left) keep_.front() = false;
    if (flags_.right) keep_.back() = false;
    offset_.resize(n);
    alpha_.resize(n);

    for (int i = 0; i < n; ++i) {
        const auto [lo, hi] = kv.support(i);
        const int ni = hi - lo + 1;
        Eigen::MatrixXd a = local_extension_vectors(ni);
        if (mirrored(i)) a = a.rowwise().reverse().eval();
        alpha_[i] = a;
        offset_[i] = static_cast<int>(members_.size());

        const PiecewisePolynomial b = bspline_piece(space_, i);
        for (int j = 0; j < ni; ++j) {
            BrokenMember m;
            m.bspline = i;
            m.local = j;
            m.retained = (j == 0 && keep_[i]);
            int k0 = ni, k1 = -1;
            for (int k = 0; k < ni; ++k)
                if (a(j, k) != 0.0) {
                    k0 = std::min(k0, k);
                    k1 = std::max(k1, k);
                }
            m.function.first = lo + k0;
            m.function.coeffs.resize(k1 - k0 + 1, p + 1);
            for (int k = k0; k <= k1; ++k) m.function.coeffs.row(k - k0) = a(j, k) * b.coeffs.row(k);
            if (m.retained)
                retained_.push_back(i);
            else
                extra_.push_back(static_cast<int>(members_.size()));
            members_.push_back(std::move(m));
        }
    }
    const int expected = kv.num_elements() * (p + 1);
    if (size() != expected)
        throw ConstructionError("broken basis: dimension " + std::to_string(size()) + " differs from " +
                                std::to_string(expected) + " (elements x (p+1))");
}

BrokenBasis build_broken_basis(const spline::SplineSpace1D& space, CrosspointFlags flags)
{
    return BrokenBasis(space, flags);
}

}  // namespace dualmortar::dual
