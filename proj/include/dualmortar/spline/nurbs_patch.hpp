#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dualmortar/spline/spline_space.hpp"

namespace dualmortar::spline {

/// Faces of the parametric unit square.
enum class Face { west = 0, east = 1, south = 2, north = 3 };  // u=0, u=1, v=0, v=1

std::string to_string(Face f);
Face face_from_string(const std::string& s);

/// Geometry map at one parametric point.
struct PatchPoint {
    Eigen::Vector2d x;
    Eigen::Matrix2d jacobian;  ///< columns: dx/du, dx/dv
    double det = 0.0;
};

/// Rational basis functions of a patch at one point of one element.
struct PatchBasis {
    std::vector<int> indices;  ///< flat control-point indices of the active functions
    Eigen::VectorXd values;    ///< R_a
    Eigen::MatrixXd dparam;    ///< 2 x n: dR_a/du, dR_a/dv
    Eigen::Vector2d x;
    Eigen::Matrix2d jacobian;
    double det = 0.0;
};

/// Two-dimensional NURBS patch F: [0,1]^2 -> R^2.
///
/// Control point (i, j) has flat index i + num_u() * j.
class NurbsPatch {
public:
    NurbsPatch(SplineSpace1D u, SplineSpace1D v, std::vector<Eigen::Vector2d> control,
               std::vector<double> weights);

    [[nodiscard]] const SplineSpace1D& space(int dir) const { return dir == 0 ? u_ : v_; }
    [[nodiscard]] int num_u() const { return u_.num_basis(); }
    [[nodiscard]] int num_v() const { return v_.num_basis(); }
    [[nodiscard]] int size() const { return num_u() * num_v(); }
    [[nodiscard]] int index(int i, int j) const { return i + num_u() * j; }
    [[nodiscard]] const Eigen::Vector2d& control(int a) const { return control_[a]; }
    [[nodiscard]] double weight(int a) const { return weights_[a]; }
    [[nodiscard]] const std::vector<Eigen::Vector2d>& controls() const { return control_; }
    [[nodiscard]] const std::vector<double>& weights() const { return weights_; }

    /// Diameter of the control polygon's bounding box.
    [[nodiscard]] double diameter() const;

    /// Point and Jacobian; throws GeometryError where |det J| < jacobian_tolerance().
    [[nodiscard]] PatchPoint evaluate(const Eigen::Vector2d& zeta) const;
    [[nodiscard]] PatchPoint evaluate_unchecked(const Eigen::Vector2d& zeta) const;
    [[nodiscard]] double jacobian_tolerance() const { return jac_tol_; }
    void set_jacobian_tolerance(double tol) { jac_tol_ = tol; }

    /// Rational basis on element (eu, ev) at parametric point zeta.
    void basis_on_element(int eu, int ev, const Eigen::Vector2d& zeta, PatchBasis& out) const;

    /// Uniform bisection refinement by knot insertion; the geometry map is unchanged.
    [[nodiscard]] NurbsPatch refined(int levels) const;
    /// Every element split into (parts_u, parts_v) equal parts by knot insertion.
    [[nodiscard]] NurbsPatch subdivided(int parts_u, int parts_v) const;
    /// Degree elevation of a single-element (Bezier) patch.
    [[nodiscard]] NurbsPatch elevated_bezier(int pu, int pv) const;

    /// Direction along which the face parameter runs (0 = u, 1 = v).
    static int face_direction(Face f) { return (f == Face::west || f == Face::east) ? 1 : 0; }
    /// Parametric point on face f at face parameter t.
    static Eigen::Vector2d face_point(Face f, double t);
    /// Spline space along face f.
    [[nodiscard]] const SplineSpace1D& face_space(Face f) const { return space(face_direction(f)); }
    /// Flat control-point indices on face f, ordered by the face parameter.
    [[nodiscard]] std::vector<int> face_indices(Face f) const;

private:
    SplineSpace1D u_, v_;
    std::vector<Eigen::Vector2d> control_;
    std::vector<double> weights_;
    double jac_tol_ = 0.0;
};

/// Boehm insertion of knot x into a set of curves sharing one knot vector.
/// Rows of `points` are control points (any number of columns, e.g. homogeneous coordinates).
void insert_knot(std::vector<double>& knots, int degree, Eigen::MatrixXd& points, double x);

}  // namespace dualmortar::spline
