#include "dualmortar/elasticity/kirsch.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dualmortar/common/errors.hpp"

namespace dualmortar::elasticity {

KirschSolution::KirschSolution(double T, double R, const Material& material) : T_(T), R_(R), material_(material)
{
    if (!(R > 0.0)) throw DomainError("hole radius must be positive");
    verify();
}

KirschSolution::Polar KirschSolution::polar_stress(double r, double th) const
{
    if (r < R_ * (1.0 - 1e-12)) throw DomainError("Kirsch solution evaluated inside the hole");
    const double q2 = R_ * R_ / (r * r), q4 = q2 * q2;
    const double c = std::cos(2 * th), s = std::sin(2 * th);
    const double h = 0.5 * T_;
    return {h * (1 - q2) + h * (1 - 4 * q2 + 3 * q4) * c, h * (1 + q2) - h * (1 + 3 * q4) * c,
            -h * (1 + 2 * q2 - 3 * q4) * s};
}

Eigen::Matrix2d KirschSolution::stress(const Eigen::Vector2d& x) const
{
    const double r = x.norm(), th = std::atan2(x.y(), x.x());
    const Polar p = polar_stress(r, th);
    const double c = std::cos(th), s = std::sin(th);
    Eigen::Matrix2d Q;
    Q << c, -s, s, c;
    Eigen::Matrix2d sp;
    sp << p.rr, p.rt, p.rt, p.tt;
    return Q * sp * Q.transpose();
}

Eigen::Vector2d KirschSolution::displacement(const Eigen::Vector2d& x) const
{
    const double r = x.norm(), th = std::atan2(x.y(), x.x());
    if (r < R_ * (1.0 - 1e-12)) throw DomainError("Kirsch solution evaluated inside the hole");
    const double k = material_.kappa(), a2 = R_ * R_, a4 = a2 * a2;
    const double f = T_ / (4.0 * material_.mu());
    const double c2 = std::cos(2 * th), s2 = std::sin(2 * th);
    const double ur = f * (r * (0.5 * (k - 1) + c2) + a2 / r * (1 + (1 + k) * c2) - a4 / (r * r * r) * c2);
    const double ut = f * ((1 - k) * a2 / r - r - a4 / (r * r * r)) * s2;
    const double c = std::cos(th), s = std::sin(th);
    return {ur * c - ut * s, ur * s + ut * c};
}

void KirschSolution::verify() const
{
    const auto fail = [](const std::string& what, double v) {
        std::ostringstream msg;
        msg << "Kirsch solution rejected: " << what << " (" << v << ")";
        throw NumericalError(msg.str());
    };
    const double T = std::abs(T_) > 0 ? std::abs(T_) : 1.0;
    for (int k = 0; k <= 16; ++k) {
        const double th = k * std::numbers::pi / 8;
        const Polar p = polar_stress(R_, th);
        if (std::abs(p.rr) > 1e-12 * T || std::abs(p.rt) > 1e-12 * T) fail("hole not traction free", p.rr);
    }
    for (double th : {0.0, 0.4, 1.1, 2.5}) {
        const Eigen::Vector2d x = 1e6 * R_ * Eigen::Vector2d(std::cos(th), std::sin(th));
        Eigen::Matrix2d far;
        far << T_, 0, 0, 0;
        const double d = (stress(x) - far).cwiseAbs().maxCoeff();
        if (d > 1e-6 * T) fail("far field is not uniaxial", d);
    }
    const double h = 1e-5 * R_;
    double eps_scale = 0.0;
    const auto grad_u = [&](const Eigen::Vector2d& x) {
        Eigen::Matrix2d g;
        for (int j = 0; j < 2; ++j) {
            const Eigen::Vector2d e = h * Eigen::Vector2d::Unit(j);
            g.col(j) = (displacement(x + e) - displacement(x - e)) / (2 * h);
        }
        return g;
    };
    for (double r : {1.3 * R_, 2.0 * R_, 3.7 * R_})
        for (double th : {0.2, 0.9, 1.4, 2.8}) {
            const Eigen::Vector2d x = r * Eigen::Vector2d(std::cos(th), std::sin(th));
            Eigen::Vector2d div = Eigen::Vector2d::Zero();
            for (int j = 0; j < 2; ++j) {
                const Eigen::Vector2d e = h * Eigen::Vector2d::Unit(j);
                div += (stress(x + e) - stress(x - e)).col(j) / (2 * h);
            }
            if (div.norm() > 1e-6 * T / R_) fail("stress field not in equilibrium", div.norm());
            const Eigen::Matrix2d g = grad_u(x);
            const Eigen::Matrix2d eps = 0.5 * (g + g.transpose());
            const Eigen::Matrix2d ref = strain(x);
            eps_scale = std::max(eps_scale, ref.cwiseAbs().maxCoeff());
            const double d = (eps - ref).cwiseAbs().maxCoeff();
            if (d > 1e-6 * std::max(eps_scale, 1e-300)) fail("displacement does not match the stress field", d);
        }
}

}  // namespace dualmortar::elasticity
