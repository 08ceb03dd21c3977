#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dualmortar/spline/knot_vector.hpp"

namespace dualmortar::spline {

/// Values of the p+1 basis functions active at a point.
struct BasisValues {
    int first = 0;  ///< index of the first active basis function
    std::vector<double> values;
};

/// Degree-p Bernstein polynomials on [0, 1] at t, written to out[0..p].
void bernstein_values(int p, double t, double* out);
/// Bernstein collocation matrix: row k holds the p+1 Bernstein values at points[k].
Eigen::MatrixXd bernstein_matrix(int p, const std::vector<double>& points);

/// Univariate B-spline space defined by an open knot vector (Cox-de Boor basis).
///
/// Element-local Bernstein extraction operators are built eagerly, so the
/// object is immutable after construction.
class SplineSpace1D {
public:
    explicit SplineSpace1D(KnotVector knots);

    [[nodiscard]] const KnotVector& knots() const { return knots_; }
    [[nodiscard]] int degree() const { return knots_.degree(); }
    [[nodiscard]] int num_basis() const { return knots_.num_basis(); }
    [[nodiscard]] int num_elements() const { return knots_.num_elements(); }

    /// Active basis values at x (domain error outside the knot range).
    [[nodiscard]] BasisValues evaluate(double x) const;

    /// Values and derivatives up to order `nderiv` of the active functions at x,
    /// using the polynomial pieces of element e. Row k of `out` holds the k-th derivative.
    /// Returns the index of the first active function.
    int evaluate_on_element(int e, double x, int nderiv, Eigen::MatrixXd& out) const;
    int evaluate_derivatives(double x, int nderiv, Eigen::MatrixXd& out) const;

    /// Value of a single basis function i at x.
    [[nodiscard]] double basis_function(int i, double x) const;

    /// Bernstein extraction on element e: row r gives B_{first_active(e)+r} restricted
    /// to e in the degree-p Bernstein basis of that element.
    [[nodiscard]] const Eigen::MatrixXd& extraction(int e) const { return extraction_[e]; }

    [[nodiscard]] SplineSpace1D refined(int levels) const { return SplineSpace1D(knots_.refined(levels)); }

private:
    KnotVector knots_;
    std::vector<Eigen::MatrixXd> extraction_;
};

}  // namespace dualmortar::spline
