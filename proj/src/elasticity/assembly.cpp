#include "dualmortar/elasticity/assembly.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "dualmortar/common/errors.hpp"
#include "dualmortar/common/quadrature.hpp"

namespace dualmortar::elasticity {

namespace {

struct ElementRange {
    int nu, nv;
    [[nodiscard]] int count() const { return nu * nv; }
};

template <class Block, class F>
void for_elements(int count, Execution exec, std::vector<Block>& out, F&& compute)
{
    out.assign(count, Block{});
    if (exec == Execution::serial) {
        for (int k = 0; k < count; ++k) compute(k, out[k]);
        return;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < count; ++k) {
        try {
            compute(k, out[k]);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

struct ElementMatrix {
    std::vector<int> indices;
    Eigen::MatrixXd K;
    Eigen::VectorXd f;
};

/// Physical gradients (2 x n) of the active basis functions.
Eigen::MatrixXd physical_gradients(const spline::PatchBasis& b)
{
    return b.jacobian.transpose().partialPivLu().solve(b.dparam);
}

void check_det(const spline::PatchBasis& b, int eu, int ev)
{
    if (!(b.det > 0.0)) {
        std::ostringstream msg;
        msg << "non-positive Jacobian " << b.det << " in element (" << eu << ", " << ev << ")";
        throw GeometryError(msg.str());
    }
}

int default_points(int points, int fallback) { return points > 0 ? points : fallback; }

}  // namespace

PatchSystem assemble_stiffness(const NurbsPatch& patch, const Material& material, const VectorField& body_force,
                               int points, Execution exec)
{
    const int p = std::max(patch.space(0).degree(), patch.space(1).degree());
    const QuadratureRule rule = gauss_legendre(default_points(points, p + 1));
    const ElementRange er{patch.space(0).num_elements(), patch.space(1).num_elements()};
    const Eigen::Matrix3d D = material.voigt();

    std::vector<ElementMatrix> blocks;
    for_elements(er.count(), exec, blocks, [&](int k, ElementMatrix& em) {
        const int eu = k % er.nu, ev = k / er.nu;
        const auto& ku = patch.space(0).knots();
        const auto& kv = patch.space(1).knots();
        const double u0 = ku.breakpoint(eu), hu = ku.breakpoint(eu + 1) - u0;
        const double v0 = kv.breakpoint(ev), hv = kv.breakpoint(ev + 1) - v0;
        spline::PatchBasis b;
        for (int j = 0; j < rule.size(); ++j)
            for (int i = 0; i < rule.size(); ++i) {
                patch.basis_on_element(eu, ev, {u0 + hu * rule.points[i], v0 + hv * rule.points[j]}, b);
                check_det(b, eu, ev);
                const int n = static_cast<int>(b.indices.size());
                if (em.indices.empty()) {
                    em.indices = b.indices;
                    em.K = Eigen::MatrixXd::Zero(2 * n, 2 * n);
                    em.f = Eigen::VectorXd::Zero(2 * n);
                }
                const Eigen::MatrixXd g = physical_gradients(b);
                Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 2 * n);
                for (int a = 0; a < n; ++a) {
                    B(0, 2 * a) = g(0, a);
                    B(1, 2 * a + 1) = g(1, a);
                    B(2, 2 * a) = g(1, a);
                    B(2, 2 * a + 1) = g(0, a);
                }
                const double w = rule.weights[i] * rule.weights[j] * hu * hv * b.det;
                em.K.noalias() += w * B.transpose() * D * B;
                if (body_force) {
                    const Eigen::Vector2d fb = body_force(b.x);
                    for (int a = 0; a < n; ++a) em.f.segment<2>(2 * a) += w * b.values[a] * fb;
                }
            }
    });

    std::vector<Triplet> t;
    PatchSystem sys;
    sys.f = Eigen::VectorXd::Zero(2 * patch.size());
    for (const auto& em : blocks) {
        const int n = static_cast<int>(em.indices.size());
        for (int a = 0; a < n; ++a) {
            for (int c = 0; c < 2; ++c) sys.f[2 * em.indices[a] + c] += em.f[2 * a + c];
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d)
                        t.emplace_back(2 * em.indices[a] + c, 2 * em.indices[b] + d, em.K(2 * a + c, 2 * b + d));
        }
    }
    sys.K.resize(2 * patch.size(), 2 * patch.size());
    sys.K.setFromTriplets(t.begin(), t.end());
    return sys;
}

Eigen::Vector2d outward_normal(const NurbsPatch& patch, Face f, double t)
{
    const auto pp = patch.evaluate_unchecked(NurbsPatch::face_point(f, t));
    const int along = NurbsPatch::face_direction(f);
    const double s = (f == Face::east || f == Face::north) ? 1.0 : -1.0;
    const Eigen::Vector2d n = s * pp.jacobian.transpose().inverse().col(1 - along);
    return n.normalized();
}

Eigen::VectorXd assemble_traction(const NurbsPatch& patch, Face f, const TractionField& traction, int points)
{
    const int along = NurbsPatch::face_direction(f);
    const auto& knots = patch.space(along).knots();
    const int p = knots.degree();
    const QuadratureRule rule = gauss_legendre(default_points(points, p + 3));
    const int across = 1 - along;
    const int e_across = (f == Face::east || f == Face::north) ? patch.space(across).num_elements() - 1 : 0;
    const double s = (f == Face::east || f == Face::north) ? 1.0 : -1.0;

    Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * patch.size());
    spline::PatchBasis b;
    for (int e = 0; e < knots.num_elements(); ++e) {
        const double a = knots.breakpoint(e), h = knots.breakpoint(e + 1) - a;
        for (int q = 0; q < rule.size(); ++q) {
            const Eigen::Vector2d zeta = NurbsPatch::face_point(f, a + h * rule.points[q]);
            if (along == 0) patch.basis_on_element(e, e_across, zeta, b);
            else patch.basis_on_element(e_across, e, zeta, b);
            const Eigen::Vector2d tangent = b.jacobian.col(along);
            const Eigen::Vector2d n = (s * b.jacobian.transpose().inverse().col(across)).normalized();
            const Eigen::Vector2d tr = traction(b.x, n);
            const double w = rule.weights[q] * h * tangent.norm();
            for (std::size_t k = 0; k < b.indices.size(); ++k)
                load.segment<2>(2 * b.indices[k]) += w * b.values[static_cast<Eigen::Index>(k)] * tr;
        }
    }
    return load;
}

FieldPoint evaluate_field(const NurbsPatch& patch, const Eigen::VectorXd& u_local, const Eigen::Vector2d& zeta)
{
    const int eu = patch.space(0).knots().element_of(zeta[0]);
    const int ev = patch.space(1).knots().element_of(zeta[1]);
    spline::PatchBasis b;
    patch.basis_on_element(eu, ev, zeta, b);
    const Eigen::MatrixXd g = physical_gradients(b);
    FieldPoint fp;
    fp.x = b.x;
    fp.det = b.det;
    fp.u.setZero();
    fp.grad.setZero();
    for (std::size_t k = 0; k < b.indices.size(); ++k) {
        const Eigen::Vector2d ua = u_local.segment<2>(2 * b.indices[k]);
        fp.u += b.values[static_cast<Eigen::Index>(k)] * ua;
        fp.grad += ua * g.col(static_cast<Eigen::Index>(k)).transpose();
    }
    return fp;
}

std::vector<Eigen::VectorXd> split_by_patch(const MultipatchDomain& domain, const Eigen::VectorXd& u)
{
    std::vector<Eigen::VectorXd> out;
    int at = 0;
    for (const auto& p : domain.patches) {
        out.push_back(u.segment(at, 2 * p.size()));
        at += 2 * p.size();
    }
    if (at != u.size()) throw ConfigError("solution vector does not match the domain");
    return out;
}

namespace {

/// sum over elements of int g(eps_h, x) with element sums reduced in a fixed order.
double integrate_strain(const MultipatchDomain& domain, const std::vector<Material>& materials,
                        const Eigen::VectorXd& u, int points, Execution exec,
                        const std::function<double(const Material&, const Eigen::Matrix2d&, const Eigen::Vector2d&)>& g)
{
    if (static_cast<int>(materials.size()) != domain.num_patches()) throw ConfigError("one material per patch required");
    const auto parts = split_by_patch(domain, u);
    double total = 0.0;
    for (int k = 0; k < domain.num_patches(); ++k) {
        const auto& patch = domain.patches[k];
        const int p = std::max(patch.space(0).degree(), patch.space(1).degree());
        const QuadratureRule rule = gauss_legendre(default_points(points, p + 3));
        const ElementRange er{patch.space(0).num_elements(), patch.space(1).num_elements()};
        std::vector<double> sums;
        for_elements(er.count(), exec, sums, [&](int e, double& sum) {
            const int eu = e % er.nu, ev = e / er.nu;
            const auto& ku = patch.space(0).knots();
            const auto& kv = patch.space(1).knots();
            const double u0 = ku.breakpoint(eu), hu = ku.breakpoint(eu + 1) - u0;
            const double v0 = kv.breakpoint(ev), hv = kv.breakpoint(ev + 1) - v0;
            spline::PatchBasis b;
            for (int j = 0; j < rule.size(); ++j)
                for (int i = 0; i < rule.size(); ++i) {
                    patch.basis_on_element(eu, ev, {u0 + hu * rule.points[i], v0 + hv * rule.points[j]}, b);
                    check_det(b, eu, ev);
                    const Eigen::MatrixXd grads = physical_gradients(b);
                    Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
                    for (std::size_t a = 0; a < b.indices.size(); ++a)
                        grad += parts[k].segment<2>(2 * b.indices[a]) *
                                grads.col(static_cast<Eigen::Index>(a)).transpose();
                    const Eigen::Matrix2d eps = 0.5 * (grad + grad.transpose());
                    sum += rule.weights[i] * rule.weights[j] * hu * hv * b.det * g(materials[k], eps, b.x);
                }
        });
        for (double s : sums) total += s;
    }
    return total;
}

}  // namespace

double energy(const MultipatchDomain& domain, const std::vector<Material>& materials, const Eigen::VectorXd& u,
              int points, Execution exec)
{
    return integrate_strain(domain, materials, u, points, exec,
                            [](const Material& m, const Eigen::Matrix2d& eps, const Eigen::Vector2d&) {
                                return (m.stress(eps).array() * eps.array()).sum();
                            });
}

double energy_error(const MultipatchDomain& domain, const std::vector<Material>& materials, const Eigen::VectorXd& u,
                    const TensorField& exact_strain, int points, Execution exec)
{
    const double e2 = integrate_strain(domain, materials, u, points, exec,
                                       [&](const Material& m, const Eigen::Matrix2d& eps, const Eigen::Vector2d& x) {
                                           const Eigen::Matrix2d d = exact_strain(x) - eps;
                                           return (m.stress(d).array() * d.array()).sum();
                                       });
    return std::sqrt(std::max(e2, 0.0));
}

}  // namespace dualmortar::elasticity
