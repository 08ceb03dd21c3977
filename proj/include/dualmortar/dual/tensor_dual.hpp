#pragma once

#include <utility>

#include "dualmortar/dual/dual_basis.hpp"

namespace dualmortar::dual {

/// Product of two parametric-mode dual bases; function (a, b) has flat index a + size_u * b.
class TensorDualBasis {
public:
    TensorDualBasis(DualBasis u, DualBasis v);

    [[nodiscard]] const DualBasis& factor(int d) const { return d == 0 ? u_ : v_; }
    [[nodiscard]] int size() const { return u_.size() * v_.size(); }
    [[nodiscard]] std::pair<int, int> split(int flat) const { return {flat % u_.size(), flat / u_.size()}; }
    /// Tensor B-spline index pair paired with function `flat`.
    [[nodiscard]] std::pair<int, int> bsplines(int flat) const;
    [[nodiscard]] double scale(int flat) const;
    [[nodiscard]] double evaluate(int flat, double x, double y) const;

private:
    DualBasis u_;
    DualBasis v_;
};

TensorDualBasis tensor_dual(const DualBasis& u, const DualBasis& v);

}  // namespace dualmortar::dual
