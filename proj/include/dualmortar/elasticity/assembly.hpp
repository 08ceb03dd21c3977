#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dualmortar/common/execution.hpp"
#include "dualmortar/common/sparse.hpp"
#include "dualmortar/elasticity/material.hpp"
#include "dualmortar/geometry/domain.hpp"

namespace dualmortar::elasticity {

using geometry::MultipatchDomain;
using spline::Face;
using spline::NurbsPatch;

using VectorField = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;
/// Traction as a function of the point and the outward unit normal.
using TractionField = std::function<Eigen::Vector2d(const Eigen::Vector2d&, const Eigen::Vector2d&)>;
using TensorField = std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>;

/// Patch stiffness matrix and body-force vector; local DOF 2a + c for control point a.
/// `points` Gauss points per direction and element (0 means p+1).
struct PatchSystem {
    SparseMatrix K;
    Eigen::VectorXd f;
};

PatchSystem assemble_stiffness(const NurbsPatch& patch, const Material& material, const VectorField& body_force = {},
                               int points = 0, Execution exec = Execution::serial);

/// Outward unit normal of face f at face parameter t.
Eigen::Vector2d outward_normal(const NurbsPatch& patch, Face f, double t);

/// Load vector of a traction on one face (`points` per face element, 0 means p+3).
Eigen::VectorXd assemble_traction(const NurbsPatch& patch, Face f, const TractionField& traction, int points = 0);

/// Physical displacement and its gradient at a parametric point of a patch.
struct FieldPoint {
    Eigen::Vector2d x;
    Eigen::Vector2d u;
    Eigen::Matrix2d grad;
    double det = 0.0;
};
FieldPoint evaluate_field(const NurbsPatch& patch, const Eigen::VectorXd& u_local, const Eigen::Vector2d& zeta);

/// Patch-local coefficient vectors of a global solution (DOF layout of mortar::DofMap).
std::vector<Eigen::VectorXd> split_by_patch(const MultipatchDomain& domain, const Eigen::VectorXd& u);

/// sum_k int sigma(u_h) : eps(u_h).
double energy(const MultipatchDomain& domain, const std::vector<Material>& materials, const Eigen::VectorXd& u,
              int points = 0, Execution exec = Execution::serial);

/// Energy norm of u - u_h given the exact strain; `points` per direction (0 means p+3).
double energy_error(const MultipatchDomain& domain, const std::vector<Material>& materials, const Eigen::VectorXd& u,
                    const TensorField& exact_strain, int points = 0, Execution exec = Execution::serial);

}  // namespace dualmortar::elasticity
