#pragma once

#include <vector>

namespace dualmortar {

/// Gauss-Legendre rule mapped to the unit interval [0, 1].
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;

    [[nodiscard]] int size() const { return static_cast<int>(points.size()); }
};

/// n-point Gauss-Legendre rule on [0, 1]; exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n);

}  // namespace dualmortar
