#include "dualmortar/spline/tensor_space.hpp"

#include "dualmortar/common/errors.hpp"

namespace dualmortar::spline {

TensorSplineSpace::TensorSplineSpace(std::vector<SplineSpace1D> directions) : dirs_(std::move(directions))
{
    if (dirs_.empty() || dirs_.size() > 3) throw DomainError("TensorSplineSpace: 1 to 3 directions");
}

int TensorSplineSpace::size() const
{
    int n = 1;
    for (const auto& s : dirs_) n *= s.num_basis();
    return n;
}

int TensorSplineSpace::flat_index(std::span<const int> multi) const
{
    int flat = 0, stride = 1;
    for (int d = 0; d < dim(); ++d) {
        flat += multi[d] * stride;
        stride *= dirs_[d].num_basis();
    }
    return flat;
}

std::vector<int> TensorSplineSpace::multi_index(int flat) const
{
    std::vector<int> multi(dim());
    for (int d = 0; d < dim(); ++d) {
        multi[d] = flat % dirs_[d].num_basis();
        flat /= dirs_[d].num_basis();
    }
    return multi;
}

TensorSplineSpace::Active TensorSplineSpace::evaluate(std::span<const double> zeta) const
{
    if (static_cast<int>(zeta.size()) != dim()) throw DomainError("TensorSplineSpace: point dimension mismatch");
    std::vector<BasisValues> per(dim());
    for (int d = 0; d < dim(); ++d) per[d] = dirs_[d].evaluate(zeta[d]);

    Active out;
    out.indices.push_back(0);
    out.values.push_back(1.0);
    int stride = 1;
    for (int d = 0; d < dim(); ++d) {
        Active next;
        for (std::size_t a = 0; a < out.indices.size(); ++a) {
            for (std::size_t r = 0; r < per[d].values.size(); ++r) {
                next.indices.push_back(out.indices[a] + (per[d].first + static_cast<int>(r)) * stride);
                next.values.push_back(out.values[a] * per[d].values[r]);
            }
        }
        out = std::move(next);
        stride *= dirs_[d].num_basis();
    }
    return out;
}

}  // namespace dualmortar::spline
