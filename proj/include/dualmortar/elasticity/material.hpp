#pragma once

#include <string>

#include <Eigen/Dense>

namespace dualmortar::elasticity {

enum class Plane { strain, stress };

std::string to_string(Plane p);
Plane plane_from_string(const std::string& s);

/// Isotropic linear elastic material in two dimensions.
struct Material {
    double E = 1.0;
    double nu = 0.3;
    Plane plane = Plane::strain;

    /// Three-dimensional Lame constants.
    [[nodiscard]] double lame_lambda() const { return nu * E / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
    [[nodiscard]] double mu() const { return E / (2.0 * (1.0 + nu)); }
    /// First Lame constant of the 2D law (plane stress: 2 lambda mu / (lambda + 2 mu)).
    [[nodiscard]] double lambda() const;
    /// Kolosov constant: 3 - 4 nu (plane strain), (3 - nu) / (1 + nu) (plane stress).
    [[nodiscard]] double kappa() const;

    /// Voigt matrix for (eps_xx, eps_yy, 2 eps_xy).
    [[nodiscard]] Eigen::Matrix3d voigt() const;
    [[nodiscard]] Eigen::Matrix2d stress(const Eigen::Matrix2d& strain) const;
    /// In-plane strain producing the given in-plane stress.
    [[nodiscard]] Eigen::Matrix2d strain(const Eigen::Matrix2d& stress) const;
};

}  // namespace dualmortar::elasticity
