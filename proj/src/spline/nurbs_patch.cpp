#include "dualmortar/spline/nurbs_patch.hpp"

#include <algorithm>
#include <sstream>

#include "dualmortar/common/errors.hpp"

namespace dualmortar::spline {

std::string to_string(Face f)
{
    switch (f) {
    case Face::west: return "west";
    case Face::east: return "east";
    case Face::south: return "south";
    case Face::north: return "north";
    }
    return "?";
}

Face face_from_string(const std::string& s)
{
    if (s == "west") return Face::west;
    if (s == "east") return Face::east;
    if (s == "south") return Face::south;
    if (s == "north") return Face::north;
    throw ConfigError("unknown face '" + s + "'");
}

NurbsPatch::NurbsPatch(SplineSpace1D u, SplineSpace1D v, std::vector<Eigen::Vector2d> control,
                       std::vector<double> weights)
    : u_(std::move(u)), v_(std::move(v)), control_(std::move(control)), weights_(std::move(weights))
{
    if (static_cast<int>(control_.size()) != size() || static_cast<int>(weights_.size()) != size())
        throw DomainError("NurbsPatch: control net size does not match the spline spaces");
    for (double w : weights_)
        if (!(w > 0.0)) throw DomainError("NurbsPatch: weights must be positive");
    for (const auto* s : {&u_, &v_})
        if (s->knots().lower() != 0.0 || s->knots().upper() != 1.0)
            throw DomainError("NurbsPatch: parametric domain must be the unit square");
    const double d = diameter();
    jac_tol_ = 1e-12 * d * d;
}

double NurbsPatch::diameter() const
{
    Eigen::Vector2d lo = control_.front(), hi = control_.front();
    for (const auto& c : control_) {
        lo = lo.cwiseMin(c);
        hi = hi.cwiseMax(c);
    }
    return (hi - lo).norm();
}

void NurbsPatch::basis_on_element(int eu, int ev, const Eigen::Vector2d& zeta, PatchBasis& out) const
{
    Eigen::MatrixXd du, dv;
    const int fu = u_.evaluate_on_element(eu, zeta[0], 1, du);
    const int fv = v_.evaluate_on_element(ev, zeta[1], 1, dv);
    const int nu = static_cast<int>(du.cols()), nv = static_cast<int>(dv.cols());
    const int n = nu * nv;
    out.indices.resize(n);
    out.values.resize(n);
    out.dparam.resize(2, n);

    double W = 0.0, Wu = 0.0, Wv = 0.0;
    for (int b = 0; b < nv; ++b) {
        for (int a = 0; a < nu; ++a) {
            const int loc = a + nu * b;
            const int flat = index(fu + a, fv + b);
            const double w = weights_[flat];
            out.indices[loc] = flat;
            out.values[loc] = w * du(0, a) * dv(0, b);
            out.dparam(0, loc) = w * du(1, a) * dv(0, b);
            out.dparam(1, loc) = w * du(0, a) * dv(1, b);
            W += out.values[loc];
            Wu += out.dparam(0, loc);
            Wv += out.dparam(1, loc);
        }
    }
    for (int loc = 0; loc < n; ++loc) {
        const double N = out.values[loc];
        out.values[loc] = N / W;
        out.dparam(0, loc) = (out.dparam(0, loc) * W - N * Wu) / (W * W);
        out.dparam(1, loc) = (out.dparam(1, loc) * W - N * Wv) / (W * W);
    }
    out.x.setZero();
    out.jacobian.setZero();
    for (int loc = 0; loc < n; ++loc) {
        const auto& c = control_[out.indices[loc]];
        out.x += out.values[loc] * c;
        out.jacobian.col(0) += out.dparam(0, loc) * c;
        out.jacobian.col(1) += out.dparam(1, loc) * c;
    }
    out.det = out.jacobian.determinant();
}

PatchPoint NurbsPatch::evaluate_unchecked(const Eigen::Vector2d& zeta) const
{
    PatchBasis b;
    basis_on_element(u_.knots().element_of(zeta[0]), v_.knots().element_of(zeta[1]), zeta, b);
    return {b.x, b.jacobian, b.det};
}

PatchPoint NurbsPatch::evaluate(const Eigen::Vector2d& zeta) const
{
    PatchPoint pt = evaluate_unchecked(zeta);
    if (std::abs(pt.det) < jac_tol_) {
        std::ostringstream msg;
        msg << "NurbsPatch: singular Jacobian (det = " << pt.det << ") at zeta = (" << zeta[0] << ", "
            << zeta[1] << ")";
        throw GeometryError(msg.str());
    }
    return pt;
}

void insert_knot(std::vector<double>& U, int p, Eigen::MatrixXd& P, double x)
{
    // span k with U[k] <= x < U[k+1]
    const int m = static_cast<int>(U.size());
    int k = static_cast<int>(std::upper_bound(U.begin(), U.end(), x) - U.begin()) - 1;
    k = std::min(k, m - p - 2);
    const int n = static_cast<int>(P.rows());
    Eigen::MatrixXd Q(n + 1, P.cols());
    for (int i = 0; i <= k - p; ++i) Q.row(i) = P.row(i);
    for (int i = k - p + 1; i <= k; ++i) {
        const double alpha = (x - U[i]) / (U[i + p] - U[i]);
        Q.row(i) = alpha * P.row(i) + (1.0 - alpha) * P.row(i - 1);
    }
    for (int i = k + 1; i <= n; ++i) Q.row(i) = P.row(i - 1);
    U.insert(U.begin() + k + 1, x);
    P = std::move(Q);
}

namespace {

// Homogeneous control data arranged so that rows run along `dir`.
Eigen::MatrixXd homogeneous_along(const NurbsPatch& patch, int dir)
{
    const int nu = patch.num_u(), nv = patch.num_v();
    const int rows = dir == 0 ? nu : nv;
    const int curves = dir == 0 ? nv : nu;
    Eigen::MatrixXd H(rows, 3 * curves);
    for (int j = 0; j < nv; ++j) {
        for (int i = 0; i < nu; ++i) {
            const int a = patch.index(i, j);
            const int r = dir == 0 ? i : j;
            const int c = dir == 0 ? j : i;
            const double w = patch.weight(a);
            H(r, 3 * c + 0) = w * patch.control(a)[0];
            H(r, 3 * c + 1) = w * patch.control(a)[1];
            H(r, 3 * c + 2) = w;
        }
    }
    return H;
}

NurbsPatch from_homogeneous(const SplineSpace1D& su, const SplineSpace1D& sv, const Eigen::MatrixXd& H, int dir)
{
    const int nu = su.num_basis(), nv = sv.num_basis();
    std::vector<Eigen::Vector2d> ctrl(nu * nv);
    std::vector<double> w(nu * nv);
    for (int j = 0; j < nv; ++j) {
        for (int i = 0; i < nu; ++i) {
            const int r = dir == 0 ? i : j;
            const int c = dir == 0 ? j : i;
            const double wt = H(r, 3 * c + 2);
            ctrl[i + nu * j] = Eigen::Vector2d(H(r, 3 * c) / wt, H(r, 3 * c + 1) / wt);
            w[i + nu * j] = wt;
        }
    }
    return NurbsPatch(su, sv, std::move(ctrl), std::move(w));
}

NurbsPatch insert_along(const NurbsPatch& patch, int dir, const std::vector<double>& new_knots)
{
    if (new_knots.empty()) return patch;
    const auto& kv = patch.space(dir).knots();
    std::vector<double> U(kv.knots().begin(), kv.knots().end());
    Eigen::MatrixXd H = homogeneous_along(patch, dir);
    for (double x : new_knots) insert_knot(U, kv.degree(), H, x);
    SplineSpace1D s(KnotVector(kv.degree(), std::move(U)));
    NurbsPatch out = dir == 0 ? from_homogeneous(s, patch.space(1), H, 0) : from_homogeneous(patch.space(0), s, H, 1);
    out.set_jacobian_tolerance(patch.jacobian_tolerance());
    return out;
}

}  // namespace

NurbsPatch NurbsPatch::subdivided(int parts_u, int parts_v) const
{
    NurbsPatch out = insert_along(*this, 0, u_.knots().subdivision_knots(parts_u));
    return insert_along(out, 1, v_.knots().subdivision_knots(parts_v));
}

NurbsPatch NurbsPatch::refined(int levels) const
{
    if (levels < 0) throw DomainError("NurbsPatch::refined: levels must be >= 0");
    return subdivided(1 << levels, 1 << levels);
}

NurbsPatch NurbsPatch::elevated_bezier(int pu, int pv) const
{
    if (u_.num_elements() != 1 || v_.num_elements() != 1)
        throw DomainError("NurbsPatch::elevated_bezier: patch must be a single element");
    if (pu < u_.degree() || pv < v_.degree()) throw DomainError("NurbsPatch::elevated_bezier: cannot lower degree");
    NurbsPatch cur = *this;
    for (int dir = 0; dir < 2; ++dir) {
        const int target = dir == 0 ? pu : pv;
        while (cur.space(dir).degree() < target) {
            const int p = cur.space(dir).degree();
            const Eigen::MatrixXd H = homogeneous_along(cur, dir);
            Eigen::MatrixXd E(p + 2, H.cols());
            E.row(0) = H.row(0);
            E.row(p + 1) = H.row(p);
            for (int i = 1; i <= p; ++i) {
                const double a = static_cast<double>(i) / (p + 1);
                E.row(i) = a * H.row(i - 1) + (1.0 - a) * H.row(i);
            }
            const auto& kv = cur.space(dir).knots();
            SplineSpace1D s(KnotVector::uniform(p + 1, 1, kv.lower(), kv.upper()));
            cur = dir == 0 ? from_homogeneous(s, cur.space(1), E, 0) : from_homogeneous(cur.space(0), s, E, 1);
        }
    }
    cur.set_jacobian_tolerance(jac_tol_);
    return cur;
}

Eigen::Vector2d NurbsPatch::face_point(Face f, double t)
{
    switch (f) {
    case Face::west: return {0.0, t};
    case Face::east: return {1.0, t};
    case Face::south: return {t, 0.0};
    case Face::north: return {t, 1.0};
    }
    return {0.0, 0.0};
}

std::vector<int> NurbsPatch::face_indices(Face f) const
{
    std::vector<int> idx;
    switch (f) {
    case Face::west:
        for (int j = 0; j < num_v(); ++j) idx.push_back(index(0, j));
        break;
    case Face::east:
        for (int j = 0; j < num_v(); ++j) idx.push_back(index(num_u() - 1, j));
        break;
    case Face::south:
        for (int i = 0; i < num_u(); ++i) idx.push_back(index(i, 0));
        break;
    case Face::north:
        for (int i = 0; i < num_u(); ++i) idx.push_back(index(i, num_v() - 1));
        break;
    }
    return idx;
}

}  // namespace dualmortar::spline
