#include "dualmortar/spline/spline_space.hpp"

#include <cmath>
#include <numbers>

#include "dualmortar/common/errors.hpp"

namespace dualmortar::spline {

void bernstein_values(int p, double t, double* out)
{
    // de Casteljau-style triangular build-up; stable on [0, 1].
    out[0] = 1.0;
    const double s = 1.0 - t;
    for (int j = 1; j <= p; ++j) {
        double saved = 0.0;
        for (int k = 0; k < j; ++k) {
            const double tmp = out[k];
            out[k] = saved + s * tmp;
            saved = t * tmp;
        }
        out[j] = saved;
    }
}

Eigen::MatrixXd bernstein_matrix(int p, const std::vector<double>& points)
{
    Eigen::MatrixXd m(points.size(), p + 1);
    std::vector<double> row(p + 1);
    for (std::size_t k = 0; k < points.size(); ++k) {
        bernstein_values(p, points[k], row.data());
        for (int a = 0; a <= p; ++a) m(k, a) = row[a];
    }
    return m;
}

SplineSpace1D::SplineSpace1D(KnotVector knots) : knots_(std::move(knots))
{
    const int p = degree();
    std::vector<double> cheb(p + 1);
    for (int k = 0; k <= p; ++k)
        cheb[k] = 0.5 * (1.0 - std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * (p + 1))));
    const Eigen::MatrixXd bern = bernstein_matrix(p, cheb);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(bern);

    extraction_.resize(num_elements());
    Eigen::MatrixXd vals(p + 1, p + 1);
    Eigen::MatrixXd d;
    for (int e = 0; e < num_elements(); ++e) {
        const double a = knots_.breakpoint(e), b = knots_.breakpoint(e + 1);
        for (int k = 0; k <= p; ++k) {
            evaluate_on_element(e, a + (b - a) * cheb[k], 0, d);
            vals.col(k) = d.row(0).transpose();
        }
        // vals = C * bern^T, so C^T = bern^{-1} * vals^T
        extraction_[e] = lu.solve(vals.transpose()).transpose();
    }
}

int SplineSpace1D::evaluate_on_element(int e, double x, int nderiv, Eigen::MatrixXd& out) const
{
    const int p = degree();
    const int mu = knots_.span_of_element(e);
    const auto& U = knots_.knots();
    nderiv = std::min(nderiv, p);
    out.setZero(nderiv + 1, p + 1);

    // Piegl & Tiller, Algorithm A2.3
    Eigen::MatrixXd ndu(p + 1, p + 1);
    std::vector<double> left(p + 1), right(p + 1);
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - U[mu + 1 - j];
        right[j] = U[mu + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[r + 1] + left[j - r];
            const double temp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu(j, j) = saved;
    }
    for (int j = 0; j <= p; ++j) out(0, j) = ndu(j, p);

    Eigen::MatrixXd a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a(0, 0) = 1.0;
        for (int k = 1; k <= nderiv; ++k) {
            double dval = 0.0;
            const int rk = r - k, pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                dval = a(s2, 0) * ndu(rk, pk);
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                dval += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                dval += a(s2, k) * ndu(r, pk);
            }
            out(k, r) = dval;
            std::swap(s1, s2);
        }
    }
    double fac = p;
    for (int k = 1; k <= nderiv; ++k) {
        out.row(k) *= fac;
        fac *= (p - k);
    }
    return mu - p;
}

int SplineSpace1D::evaluate_derivatives(double x, int nderiv, Eigen::MatrixXd& out) const
{
    return evaluate_on_element(knots_.element_of(x), x, nderiv, out);
}

BasisValues SplineSpace1D::evaluate(double x) const
{
    Eigen::MatrixXd d;
    BasisValues bv;
    bv.first = evaluate_derivatives(x, 0, d);
    bv.values.assign(d.data(), d.data() + d.cols());
    return bv;
}

double SplineSpace1D::basis_function(int i, double x) const
{
    const BasisValues bv = evaluate(x);
    const int r = i - bv.first;
    return (r >= 0 && r <= degree()) ? bv.values[r] : 0.0;
}

}  // namespace dualmortar::spline
