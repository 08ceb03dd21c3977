#include "dualmortar/dual/inner_product.hpp"

#include <algorithm>
#include <cmath>

#include "dualmortar/common/errors.hpp"
#include "dualmortar/common/quadrature.hpp"
#include "dualmortar/spline/spline_space.hpp"

namespace dualmortar::dual {

std::string to_string(WeightMode m) { return m == WeightMode::physical ? "physical" : "parametric"; }

WeightMode weight_mode_from_string(const std::string& s)
{
    if (s == "physical") return WeightMode::physical;
    if (s == "parametric") return WeightMode::parametric;
    throw ConfigError("unknown weight mode '" + s + "'");
}

WeightedInnerProduct WeightedInnerProduct::parametric() { return {}; }

WeightedInnerProduct WeightedInnerProduct::physical(std::function<double(double)> rho_hat)
{
    WeightedInnerProduct ip;
    ip.mode_ = WeightMode::physical;
    ip.rho_ = std::move(rho_hat);
    return ip;
}

ElementQuadrature::ElementQuadrature(const spline::KnotVector& knots, const WeightedInnerProduct& ip)
    : knots_(knots), mode_(ip.mode())
{
    const int p = knots_.degree();
    const QuadratureRule rule = gauss_legendre(ip.points_per_element(p));
    ref_points_ = rule.points;
    bern_ = spline::bernstein_matrix(p, ref_points_);
    const int nq = rule.size();
    const int ne = knots_.num_elements();
    points_.resize(static_cast<std::size_t>(ne) * nq);
    weights_.resize(points_.size());
    gram_.resize(ne);
    for (int e = 0; e < ne; ++e) {
        const double a = knots_.breakpoint(e), b = knots_.breakpoint(e + 1);
        Eigen::VectorXd w(nq);
        for (int q = 0; q < nq; ++q) {
            const double x = a + (b - a) * rule.points[q];
            const double rho = ip.rho_hat(x);
            if (!(rho > 0.0))
                throw DomainError("weighted inner product: rho_hat must be positive (got " + std::to_string(rho) +
                                  " at t = " + std::to_string(x) + ")");
            points_[e * nq + q] = x;
            weights_[e * nq + q] = w[q] = rule.weights[q] * (b - a) * rho;
        }
        gram_[e] = bern_.transpose() * w.asDiagonal() * bern_;
    }
}

void PiecewisePolynomial::add(double a, const PiecewisePolynomial& other)
{
    if (other.empty()) return;
    if (empty()) {
        first = other.first;
        coeffs = a * other.coeffs;
        return;
    }
    const int lo = std::min(first, other.first);
    const int hi = std::max(last(), other.last());
    if (lo != first || hi != last()) {
        Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(hi - lo + 1, coeffs.cols());
        grown.middleRows(first - lo, coeffs.rows()) = coeffs;
        coeffs = std::move(grown);
        first = lo;
    }
    coeffs.middleRows(other.first - first, other.coeffs.rows()) += a * other.coeffs;
}

double PiecewisePolynomial::evaluate(const spline::KnotVector& knots, double x) const
{
    const int e = knots.element_of(x);
    if (!covers(e)) return 0.0;
    const int p = static_cast<int>(coeffs.cols()) - 1;
    const double a = knots.breakpoint(e), b = knots.breakpoint(e + 1);
    std::vector<double> bern(p + 1);
    spline::bernstein_values(p, (x - a) / (b - a), bern.data());
    double v = 0.0;
    for (int k = 0; k <= p; ++k) v += coeffs(e - first, k) * bern[k];
    return v;
}

std::pair<int, int> PiecewisePolynomial::support(double rel_tol) const
{
    if (empty()) return {0, -1};
    const double cut = rel_tol * coeffs.cwiseAbs().maxCoeff();
    int lo = -1, hi = -1;
    for (int r = 0; r < coeffs.rows(); ++r) {
        if (coeffs.row(r).cwiseAbs().maxCoeff() > cut) {
            if (lo < 0) lo = r;
            hi = r;
        }
    }
    if (lo < 0) return {0, -1};
    return {first + lo, first + hi};
}

int PiecewisePolynomial::support_size(double rel_tol) const
{
    const auto [lo, hi] = support(rel_tol);
    return hi - lo + 1;
}

PiecewisePolynomial bspline_piece(const spline::SplineSpace1D& space, int i)
{
    const spline::KnotVector& knots = space.knots();
    const auto [lo, hi] = knots.support(i);
    const int p = knots.degree();
    PiecewisePolynomial f;
    f.first = lo;
    f.coeffs.resize(hi - lo + 1, p + 1);
    for (int e = lo; e <= hi; ++e) f.coeffs.row(e - lo) = space.extraction(e).row(i - knots.first_active(e));
    return f;
}

double inner(const PiecewisePolynomial& u, const PiecewisePolynomial& v, const ElementQuadrature& q)
{
    if (u.empty() || v.empty()) return 0.0;
    const int lo = std::max(u.first, v.first), hi = std::min(u.last(), v.last());
    double s = 0.0;
    for (int e = lo; e <= hi; ++e)
        s += u.coeffs.row(e - u.first).dot(q.gram(e) * v.coeffs.row(e - v.first).transpose());
    return s;
}

double inner(const std::function<double(double)>& f, const PiecewisePolynomial& u, const ElementQuadrature& q)
{
    double s = 0.0;
    for (int e = u.first; e <= u.last(); ++e) {
        const Eigen::VectorXd vals = q.bernstein() * u.coeffs.row(e - u.first).transpose();
        const auto pts = q.points(e);
        const auto wts = q.weights(e);
        for (int k = 0; k < q.num_points(); ++k) s += wts[k] * f(pts[k]) * vals[k];
    }
    return s;
}

}  // namespace dualmortar::dual
