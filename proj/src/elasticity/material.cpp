#include "dualmortar/elasticity/material.hpp"

#include "dualmortar/common/errors.hpp"

namespace dualmortar::elasticity {

std::string to_string(Plane p) { return p == Plane::strain ? "strain" : "stress"; }

Plane plane_from_string(const std::string& s)
{
    if (s == "strain" || s == "plane_strain") return Plane::strain;
    if (s == "stress" || s == "plane_stress") return Plane::stress;
    throw ConfigError("unknown plane assumption '" + s + "' (expected strain or stress)");
}

double Material::lambda() const
{
    const double l = lame_lambda(), m = mu();
    return plane == Plane::strain ? l : 2.0 * l * m / (l + 2.0 * m);
}

double Material::kappa() const { return plane == Plane::strain ? 3.0 - 4.0 * nu : (3.0 - nu) / (1.0 + nu); }

Eigen::Matrix3d Material::voigt() const
{
    const double l = lambda(), m = mu();
    Eigen::Matrix3d D;
    D << l + 2 * m, l, 0, l, l + 2 * m, 0, 0, 0, m;
    return D;
}

Eigen::Matrix2d Material::stress(const Eigen::Matrix2d& eps) const
{
    return 2.0 * mu() * eps + lambda() * eps.trace() * Eigen::Matrix2d::Identity();
}

Eigen::Matrix2d Material::strain(const Eigen::Matrix2d& sigma) const
{
    const Eigen::Vector3d e = voigt().inverse() * Eigen::Vector3d(sigma(0, 0), sigma(1, 1), sigma(0, 1));
    Eigen::Matrix2d eps;
    eps << e[0], 0.5 * e[2], 0.5 * e[2], e[1];
    return eps;
}

}  // namespace dualmortar::elasticity
