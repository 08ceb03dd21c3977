#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dualmortar/dual/inner_product.hpp"
#include "dualmortar/spline/spline_space.hpp"

namespace dualmortar::dual {

/// Which interface ends are crosspoints (their boundary B-spline is dropped from the multiplier space).
struct CrosspointFlags {
    bool left = false;
    bool right = false;
    friend bool operator==(const CrosspointFlags&, const CrosspointFlags&) = default;
};

/// Pyramid ordering of the n element positions: centre first, then alternating left and right.
std::vector<int> pyramid_permutation(int n);

/// Rows A_0..A_{n-1} of the local extension vectors in construction order
/// (A_0 = 1, A_j = (-1 x j, j, 0, ...)) with columns permuted by the pyramid ordering.
Eigen::MatrixXd local_extension_vectors(int n);

/// One member of the broken basis: B-spline `bspline` (local == 0) or one of its extensions.
struct BrokenMember {
    int bspline = 0;
    int local = 0;
    bool retained = false;
    PiecewisePolynomial function;
};

/// Basis of the element-wise discontinuous polynomial space that contains the spline space.
class BrokenBasis {
public:
    BrokenBasis(spline::SplineSpace1D space, CrosspointFlags flags);

    [[nodiscard]] const spline::SplineSpace1D& space() const { return space_; }
    [[nodiscard]] const spline::KnotVector& knots() const { return space_.knots(); }
    [[nodiscard]] CrosspointFlags flags() const { return flags_; }
    [[nodiscard]] int degree() const { return space_.degree(); }
    [[nodiscard]] int size() const { return static_cast<int>(members_.size()); }

    [[nodiscard]] const BrokenMember& member(int m) const { return members_[m]; }
    [[nodiscard]] int member_index(int bspline, int local) const { return offset_[bspline] + local; }

    /// Retained B-spline indices, ascending.
    [[nodiscard]] const std::vector<int>& retained() const { return retained_; }
    /// Members not in the retained set: all extensions plus removed boundary B-splines.
    [[nodiscard]] const std::vector<int>& extra() const { return extra_; }
    [[nodiscard]] bool is_retained(int bspline) const { return keep_[bspline]; }

    /// Extension coefficients of B-spline i. Row j belongs to member (i, j), column k to the
    /// k-th element of supp B_i in increasing parameter order.
    [[nodiscard]] const Eigen::MatrixXd& alpha(int i) const { return alpha_[i]; }
    /// True if B-spline i is built in the reversed element frame.
    [[nodiscard]] bool mirrored(int i) const { return i >= (space_.num_basis() + 1) / 2; }

private:
    spline::SplineSpace1D space_;
    CrosspointFlags flags_;
    std::vector<BrokenMember> members_;
    std::vector<int> offset_;
    std::vector<int> retained_;
    std::vector<int> extra_;
    std::vector<bool> keep_;
    std::vector<Eigen::MatrixXd> alpha_;
};

BrokenBasis build_broken_basis(const spline::SplineSpace1D& space, CrosspointFlags flags);

}  // namespace dualmortar::dual
