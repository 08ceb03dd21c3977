#pragma once

#include <span>
#include <vector>

#include "dualmortar/spline/spline_space.hpp"

namespace dualmortar::spline {

/// Tensor-product B-spline space in d = 1..3 parametric directions.
/// Flat indices are lexicographic with the first direction running fastest.
class TensorSplineSpace {
public:
    explicit TensorSplineSpace(std::vector<SplineSpace1D> directions);

    [[nodiscard]] int dim() const { return static_cast<int>(dirs_.size()); }
    [[nodiscard]] const SplineSpace1D& direction(int d) const { return dirs_[d]; }
    [[nodiscard]] int size() const;

    [[nodiscard]] int flat_index(std::span<const int> multi) const;
    [[nodiscard]] std::vector<int> multi_index(int flat) const;

    struct Active {
        std::vector<int> indices;
        std::vector<double> values;
    };
    /// Nonzero tensor basis values B_i(zeta) = prod_d B_{i_d}(zeta_d).
    [[nodiscard]] Active evaluate(std::span<const double> zeta) const;

private:
    std::vector<SplineSpace1D> dirs_;
};

}  // namespace dualmortar::spline
