#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dualmortar/spline/knot_vector.hpp"
#include "dualmortar/spline/spline_space.hpp"

namespace dualmortar::dual {

/// How the interface measure enters the coupling integrals.
///  physical:   rho = 1 on the physical interface, so rho_hat = |dF/dt| / W
///  parametric: rho_hat = 1 (coupling posed on the parametric face)
enum class WeightMode { physical, parametric };

std::string to_string(WeightMode m);
WeightMode weight_mode_from_string(const std::string& s);

/// Weighted L2 product (u, v)_rho = int u v rho_hat dt on the slave parameter line.
class WeightedInnerProduct {
public:
    static WeightedInnerProduct parametric();
    static WeightedInnerProduct physical(std::function<double(double)> rho_hat);

    [[nodiscard]] WeightMode mode() const { return mode_; }
    [[nodiscard]] double rho_hat(double t) const { return rho_ ? rho_(t) : 1.0; }

    /// Gauss points per element used for degree-p spaces (p+3 unless overridden).
    [[nodiscard]] int points_per_element(int p) const { return points_ > 0 ? points_ : p + 3; }
    WeightedInnerProduct& set_points_per_element(int n)
    {
        points_ = n;
        return *this;
    }

private:
    WeightMode mode_ = WeightMode::parametric;
    std::function<double(double)> rho_;
    int points_ = 0;
};

/// Quadrature data of a weighted inner product on the elements of one knot vector.
/// Weights include the element length and rho_hat.
class ElementQuadrature {
public:
    ElementQuadrature(const spline::KnotVector& knots, const WeightedInnerProduct& ip);

    [[nodiscard]] const spline::KnotVector& knots() const { return knots_; }
    [[nodiscard]] int degree() const { return knots_.degree(); }
    [[nodiscard]] int num_elements() const { return knots_.num_elements(); }
    [[nodiscard]] int num_points() const { return static_cast<int>(ref_points_.size()); }
    [[nodiscard]] WeightMode mode() const { return mode_; }

    /// Parameter values of the quadrature points on element e.
    [[nodiscard]] std::span<const double> points(int e) const { return {points_.data() + e * num_points(), static_cast<std::size_t>(num_points())}; }
    [[nodiscard]] std::span<const double> weights(int e) const { return {weights_.data() + e * num_points(), static_cast<std::size_t>(num_points())}; }
    /// Bernstein values at the reference points (num_points x (p+1)); identical on every element.
    [[nodiscard]] const Eigen::MatrixXd& bernstein() const { return bern_; }
    /// Weighted Bernstein Gram matrix of element e.
    [[nodiscard]] const Eigen::MatrixXd& gram(int e) const { return gram_[e]; }

private:
    spline::KnotVector knots_;
    WeightMode mode_;
    std::vector<double> ref_points_;
    std::vector<double> points_;
    std::vector<double> weights_;
    Eigen::MatrixXd bern_;
    std::vector<Eigen::MatrixXd> gram_;
};

/// Element-wise polynomial of degree p stored in the Bernstein basis of each element
/// over a contiguous element range [first, first + rows).
struct PiecewisePolynomial {
    int first = 0;
    Eigen::MatrixXd coeffs;  ///< row r: Bernstein coefficients on element first + r

    [[nodiscard]] bool empty() const { return coeffs.rows() == 0; }
    [[nodiscard]] int last() const { return first + static_cast<int>(coeffs.rows()) - 1; }
    [[nodiscard]] bool covers(int e) const { return !empty() && e >= first && e <= last(); }
    [[nodiscard]] Eigen::VectorXd row(int e, int p) const
    {
        return covers(e) ? Eigen::VectorXd(coeffs.row(e - first).transpose()) : Eigen::VectorXd::Zero(p + 1);
    }

    /// this += a * other, growing the element range as needed.
    void add(double a, const PiecewisePolynomial& other);
    void scale(double a) { coeffs *= a; }

    [[nodiscard]] double evaluate(const spline::KnotVector& knots, double x) const;
    /// Range of elements carrying a coefficient above rel_tol * max |coefficient|.
    [[nodiscard]] std::pair<int, int> support(double rel_tol = 1e-13) const;
    [[nodiscard]] int support_size(double rel_tol = 1e-13) const;
};

/// B-spline i of a space as a piecewise polynomial.
PiecewisePolynomial bspline_piece(const spline::SplineSpace1D& space, int i);

/// (u, v)_rho evaluated with the element Gram matrices.
double inner(const PiecewisePolynomial& u, const PiecewisePolynomial& v, const ElementQuadrature& q);

/// (f, u)_rho for a callable f.
double inner(const std::function<double(double)>& f, const PiecewisePolynomial& u, const ElementQuadrature& q);

}  // namespace dualmortar::dual
