#include "dualmortar/dual/tensor_dual.hpp"

#include "dualmortar/common/errors.hpp"

namespace dualmortar::dual {

TensorDualBasis::TensorDualBasis(DualBasis u, DualBasis v) : u_(std::move(u)), v_(std::move(v))
{
    if (u_.mode() != WeightMode::parametric || v_.mode() != WeightMode::parametric)
        throw ConstructionError("tensor dual basis: both factors must be built with the parametric weight; "
                                "a physical weight does not factor and the product is not biorthogonal");
}

std::pair<int, int> TensorDualBasis::bsplines(int flat) const
{
    const auto [a, b] = split(flat);
    return {u_.retained[a], v_.retained[b]};
}

double TensorDualBasis::scale(int flat) const
{
    const auto [a, b] = split(flat);
    return u_.scale[a] * v_.scale[b];
}

double TensorDualBasis::evaluate(int flat, double x, double y) const
{
    const auto [a, b] = split(flat);
    return u_.evaluate(a, x) * v_.evaluate(b, y);
}

TensorDualBasis tensor_dual(const DualBasis& u, const DualBasis& v) { return TensorDualBasis(u, v); }

}  // namespace dualmortar::dual
