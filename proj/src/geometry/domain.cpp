#include "dualmortar/geometry/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dualmortar/common/errors.hpp"
#include "dualmortar/common/quadrature.hpp"

namespace dualmortar::geometry {

std::string to_string(BoundaryKind k)
{
    switch (k) {
    case BoundaryKind::neumann: return "neumann";
    case BoundaryKind::dirichlet: return "dirichlet";
    default: return "free";
    }
}

BoundaryKind boundary_kind_from_string(const std::string& s)
{
    if (s == "free") return BoundaryKind::free;
    if (s == "neumann") return BoundaryKind::neumann;
    if (s == "dirichlet") return BoundaryKind::dirichlet;
    throw ConfigError("unknown boundary kind '" + s + "'");
}

void MultipatchDomain::add_patch(NurbsPatch patch, std::string region)
{
    patches.push_back(std::move(patch));
    boundaries.emplace_back();
    regions.push_back(std::move(region));
}

double MultipatchDomain::diameter() const
{
    Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::max());
    Eigen::Vector2d hi = -lo;
    for (const auto& p : patches)
        for (const auto& c : p.controls()) {
            lo = lo.cwiseMin(c);
            hi = hi.cwiseMax(c);
        }
    return patches.empty() ? 0.0 : (hi - lo).norm();
}

Eigen::Vector2d MultipatchDomain::face_point(const FaceRef& f, double t) const
{
    return patches[f.patch].evaluate_unchecked(NurbsPatch::face_point(f.face, t)).x;
}

MultipatchDomain MultipatchDomain::refined(int levels) const
{
    MultipatchDomain d = *this;
    for (auto& p : d.patches) p = p.refined(levels);
    return d;
}

void MultipatchDomain::validate() const
{
    for (int k = 0; k < num_patches(); ++k) {
        const NurbsPatch& p = patches[k];
        const auto& ku = p.space(0).knots();
        const auto& kv = p.space(1).knots();
        const auto ru = gauss_legendre(ku.degree() + 1);
        const auto rv = gauss_legendre(kv.degree() + 1);
        double det_max = 0.0, det_min = std::numeric_limits<double>::max();
        Eigen::Vector2d where = Eigen::Vector2d::Zero();
        for (int ev = 0; ev < kv.num_elements(); ++ev)
            for (int eu = 0; eu < ku.num_elements(); ++eu)
                for (double su : ru.points)
                    for (double sv : rv.points) {
                        const Eigen::Vector2d z(ku.breakpoint(eu) + su * (ku.breakpoint(eu + 1) - ku.breakpoint(eu)),
                                                kv.breakpoint(ev) + sv * (kv.breakpoint(ev + 1) - kv.breakpoint(ev)));
                        const double det = p.evaluate_unchecked(z).det;
                        det_max = std::max(det_max, std::abs(det));
                        if (det < det_min) {
                            det_min = det;
                            where = z;
                        }
                    }
        if (!(det_min > 1e-10 * det_max)) {
            std::ostringstream msg;
            msg << "patch " << k << ": non-positive Jacobian " << det_min << " at parameter (" << where.x() << ", "
                << where.y() << ")";
            throw GeometryError(msg.str());
        }
    }
    const double tol = tolerance();
    for (std::size_t l = 0; l < interfaces.size(); ++l) {
        const auto& iface = interfaces[l];
        for (int k = 0; k <= 10; ++k) {
            const double ts = k / 10.0;
            const double tm = pullback_to_master(*this, iface, ts);
            if ((face_point(iface.master, tm) - face_point(iface.slave, ts)).norm() > tol)
                throw GeometryError("interface " + std::to_string(l) + " does not match geometrically");
        }
    }
}

FaceProjection project_to_face(const NurbsPatch& patch, Face f, const Eigen::Vector2d& x, double guess, double tol,
                               int max_iterations)
{
    const int dir = NurbsPatch::face_direction(f);
    const auto eval = [&](double t, Eigen::Vector2d& d) {
        const spline::PatchPoint pt = patch.evaluate_unchecked(NurbsPatch::face_point(f, t));
        d = pt.jacobian.col(dir);
        return Eigen::Vector2d(pt.x);
    };
    Eigen::Vector2d d;
    const auto slope = [&](double t) {
        const Eigen::Vector2d y = eval(t, d);
        return (y - x).dot(d);
    };

    // Bracket the stationary point of the distance; fall back to the nearest sample.
    double a = 0.0, b = 1.0;
    if (slope(a) >= 0.0 || slope(b) <= 0.0) {
        constexpr int samples = 64;
        int best = 0;
        double best_dist = std::numeric_limits<double>::max();
        for (int k = 0; k <= samples; ++k) {
            const double dist = (eval(static_cast<double>(k) / samples, d) - x).norm();
            if (dist < best_dist) {
                best_dist = dist;
                best = k;
            }
        }
        a = std::max(0.0, (best - 1.0) / samples);
        b = std::min(1.0, (best + 1.0) / samples);
        guess = static_cast<double>(best) / samples;
        if (slope(a) >= 0.0 || slope(b) <= 0.0) {
            FaceProjection out;
            out.distance = std::numeric_limits<double>::max();
            for (double t : {a, b, guess}) {
                const double dist = (eval(t, d) - x).norm();
                if (dist < out.distance) {
                    out.t = t;
                    out.distance = dist;
                }
            }
            return out;
        }
    }

    FaceProjection out;
    double t = std::clamp(guess, a, b);
    for (int it = 1; it <= max_iterations; ++it) {
        const Eigen::Vector2d y = eval(t, d);
        out.t = t;
        out.distance = (y - x).norm();
        out.iterations = it;
        if (out.distance <= tol) break;
        const double g = (y - x).dot(d);
        if (g < 0.0)
            a = t;
        else
            b = t;
        double next = t - g / d.squaredNorm();
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (std::abs(next - t) < 1e-16) break;
        t = next;
    }
    return out;
}

namespace {

double pull(const MultipatchDomain& domain, const FaceRef& from, const FaceRef& to, int orientation, double t,
            double guess)
{
    const Eigen::Vector2d x = domain.face_point(from, t);
    if (!(guess >= 0.0 && guess <= 1.0)) guess = orientation > 0 ? t : 1.0 - t;
    const double tol = domain.tolerance();
    const FaceProjection p = project_to_face(domain.patches[to.patch], to.face, x, guess, tol);
    if (!(p.distance <= tol)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "pull-back of face parameter " << t << " (point " << x.x() << ", " << x.y() << ") onto patch "
            << to.patch << " face " << spline::to_string(to.face) << " failed: residual " << p.distance << " after "
            << p.iterations << " iterations";
        throw GeometryError(msg.str());
    }
    return p.t;
}

}  // namespace

double pullback_to_master(const MultipatchDomain& domain, const InterfaceSpec& iface, double ts, double guess)
{
    if (ts <= 0.0) return iface.orientation > 0 ? 0.0 : 1.0;
    if (ts >= 1.0) return iface.orientation > 0 ? 1.0 : 0.0;
    return pull(domain, iface.slave, iface.master, iface.orientation, ts, guess);
}

double pullback_to_slave(const MultipatchDomain& domain, const InterfaceSpec& iface, double tm, double guess)
{
    if (tm <= 0.0) return iface.orientation > 0 ? 0.0 : 1.0;
    if (tm >= 1.0) return iface.orientation > 0 ? 1.0 : 0.0;
    return pull(domain, iface.master, iface.slave, iface.orientation, tm, guess);
}

std::vector<std::array<dual::CrosspointFlags, 2>> detect_crosspoints(const MultipatchDomain& domain)
{
    const double tol = domain.tolerance();
    const auto touches = [&](const FaceRef& f, const Eigen::Vector2d& x) {
        return project_to_face(domain.patches[f.patch], f.face, x, 0.5, tol).distance <= tol;
    };

    std::vector<std::array<dual::CrosspointFlags, 2>> flags(domain.interfaces.size());
    for (std::size_t l = 0; l < domain.interfaces.size(); ++l) {
        const InterfaceSpec& iface = domain.interfaces[l];
        for (int end = 0; end < 2; ++end) {
            const Eigen::Vector2d x = domain.face_point(iface.slave, end);
            std::array<bool, 2> hit{false, false};
            for (std::size_t o = 0; o < domain.interfaces.size(); ++o)
                if (o != l && touches(domain.interfaces[o].slave, x)) hit = {true, true};
            for (int k = 0; k < domain.num_patches(); ++k)
                for (Face f : {Face::west, Face::east, Face::south, Face::north}) {
                    const BoundaryTag& tag = domain.boundary(k, f);
                    if (tag.kind != BoundaryKind::dirichlet || !touches({k, f}, x)) continue;
                    for (int c = 0; c < 2; ++c) hit[c] = hit[c] || tag.components[c];
                }
            for (int c = 0; c < 2; ++c) (end == 0 ? flags[l][c].left : flags[l][c].right) = hit[c];
        }
    }
    return flags;
}

void apply_crosspoints(MultipatchDomain& domain)
{
    const auto flags = detect_crosspoints(domain);
    for (std::size_t l = 0; l < flags.size(); ++l) domain.interfaces[l].crosspoints = flags[l];
}

}  // namespace dualmortar::geometry
