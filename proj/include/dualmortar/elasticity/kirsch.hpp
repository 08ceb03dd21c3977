#pragma once

#include <Eigen/Dense>

#include "dualmortar/elasticity/material.hpp"

namespace dualmortar::elasticity {

/// Infinite plate with a circular hole of radius R under uniaxial tension T along x.
///
/// The constructor checks the closed-form fields before accepting them: traction-free hole,
/// uniaxial far field, pointwise equilibrium and compatibility of displacement and stress
/// (central differences). A failed check raises a numerical error.
class KirschSolution {
public:
    KirschSolution(double T, double R, const Material& material);

    struct Polar {
        double rr, tt, rt;
    };
    /// Polar stress components at radius r, angle theta; domain error for r < R.
    [[nodiscard]] Polar polar_stress(double r, double theta) const;
    [[nodiscard]] Eigen::Matrix2d stress(const Eigen::Vector2d& x) const;
    [[nodiscard]] Eigen::Matrix2d strain(const Eigen::Vector2d& x) const { return material_.strain(stress(x)); }
    [[nodiscard]] Eigen::Vector2d displacement(const Eigen::Vector2d& x) const;
    [[nodiscard]] Eigen::Vector2d traction(const Eigen::Vector2d& x, const Eigen::Vector2d& n) const
    {
        return stress(x) * n;
    }

    [[nodiscard]] double load() const { return T_; }
    [[nodiscard]] double radius() const { return R_; }

private:
    void verify() const;

    double T_, R_;
    Material material_;
};

}  // namespace dualmortar::elasticity
