#include "dualmortar/dual/dual_basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "dualmortar/common/errors.hpp"

namespace dualmortar::dual {

namespace {

constexpr double max_condition = 1e12;

double condition_number(const Eigen::MatrixXd& m)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 1.0;
    const double lo = s(s.size() - 1);
    return lo > 0.0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

// Legendre or monomial values of degrees 0..q-1 at x, on the interval [a, b].
void poly_values(PolyBasis poly, int q, double a, double b, double x, double* out)
{
    const double s = (x - a) / (b - a);
    if (poly == PolyBasis::monomial) {
        double v = 1.0;
        for (int l = 0; l < q; ++l, v *= s) out[l] = v;
        return;
    }
    const double t = 2.0 * s - 1.0;
    if (q > 0) out[0] = 1.0;
    if (q > 1) out[1] = t;
    for (int l = 2; l < q; ++l) out[l] = ((2 * l - 1) * t * out[l - 1] - (l - 1) * out[l - 2]) / l;
}

// (p_l, f) for l < q, with f a piecewise polynomial.
Eigen::VectorXd poly_moments(const PiecewisePolynomial& f, const ElementQuadrature& quad, PolyBasis poly, int q,
                             double a, double b)
{
    Eigen::VectorXd m = Eigen::VectorXd::Zero(q);
    std::vector<double> pv(q);
    for (int e = f.first; e <= f.last(); ++e) {
        const Eigen::VectorXd vals = quad.bernstein() * f.coeffs.row(e - f.first).transpose();
        const auto pts = quad.points(e);
        const auto wts = quad.weights(e);
        for (int k = 0; k < quad.num_points(); ++k) {
            poly_values(poly, q, a, b, pts[k], pv.data());
            for (int l = 0; l < q; ++l) m[l] += wts[k] * vals[k] * pv[l];
        }
    }
    return m;
}

double integral(const PiecewisePolynomial& f, const ElementQuadrature& quad)
{
    return inner([](double) { return 1.0; }, f, quad);
}

// Assemble psi_j = naive[retained_j] + sum_k z_kj naive[k].
void combine(const BrokenBasis& broken, const NaiveDualTable& naive, DualBasis& basis)
{
    std::sort(basis.z.begin(), basis.z.end(), [](const auto& l, const auto& r) {
        return l.member != r.member ? l.member < r.member : l.column < r.column;
    });
    basis.retained = broken.retained();
    basis.functions.clear();
    for (int i : basis.retained) basis.functions.push_back(naive.psi[broken.member_index(i, 0)]);
    for (const auto& z : basis.z) basis.functions[z.column].add(z.value, naive.psi[z.member]);
    basis.scale.assign(basis.retained.size(), 1.0);
}

int column_of(const BrokenBasis& broken, int bspline)
{
    const auto& r = broken.retained();
    const auto it = std::lower_bound(r.begin(), r.end(), bspline);
    return static_cast<int>(it - r.begin());
}

}  // namespace

std::string to_string(DualKind k) { return k == DualKind::optimal ? "optimal" : "naive_element"; }

DualKind dual_kind_from_string(const std::string& s)
{
    if (s == "optimal") return DualKind::optimal;
    if (s == "naive_element" || s == "naive") return DualKind::naive_element;
    throw ConfigError("unknown dual basis kind '" + s + "'");
}

NaiveDualTable build_naive_dual(const BrokenBasis& broken, const ElementQuadrature& quad)
{
    const auto& space = broken.space();
    const auto& kv = space.knots();
    const int p = kv.degree();
    const int ne = kv.num_elements();

    std::vector<Eigen::MatrixXd> local(ne);
    for (int e = 0; e < ne; ++e) {
        const Eigen::MatrixXd& r = space.extraction(e);
        const Eigen::MatrixXd m = r * quad.gram(e) * r.transpose();
        const double cond = condition_number(m);
        if (!(cond <= max_condition)) {
            std::ostringstream msg;
            msg << "element mass matrix of element " << e << " is singular (condition " << cond << ")";
            throw NumericalError(msg.str());
        }
        // (R G R^T)^-1 R = R^-T G^-1 avoids squaring the conditioning of the extraction
        const Eigen::MatrixXd g_inv = quad.gram(e).llt().solve(Eigen::MatrixXd::Identity(p + 1, p + 1));
        local[e] = r.transpose().partialPivLu().solve(g_inv);
    }

    NaiveDualTable table;
    table.psi.resize(broken.size());
    for (int mi = 0; mi < broken.size(); ++mi) {
        const BrokenMember& m = broken.member(mi);
        const Eigen::MatrixXd& a = broken.alpha(m.bspline);
        const int lo = kv.support(m.bspline).first;
        const double norm2 = a.row(m.local).squaredNorm();
        PiecewisePolynomial& f = table.psi[mi];
        f.first = m.function.first;
        f.coeffs.resize(m.function.coeffs.rows(), p + 1);
        for (int e = f.first; e <= f.last(); ++e) {
            const double alpha = a(m.local, e - lo);
            f.coeffs.row(e - f.first) = alpha / norm2 * local[e].row(m.bspline - kv.first_active(e));
        }
    }
    return table;
}

IndexSetChoice choose_index_set(const BrokenBasis& broken, const NaiveDualTable& naive, int member)
{
    const auto& kv = broken.knots();
    const int p = kv.degree();
    const int ne = kv.num_elements();
    // Ties of the central element go toward the interface centre for even p, which keeps the
    // basis mirror-symmetric. For odd p that would let supports reach 2p+2 elements, so the
    // plain floor is used.
    const bool mirror = p % 2 == 0 && broken.mirrored(broken.member(member).bspline);
    const auto frame = [&](int e) { return mirror ? ne - 1 - e : e; };

    const PiecewisePolynomial& f = naive.psi[member];
    int lo = frame(f.first), hi = frame(f.last());
    if (lo > hi) std::swap(lo, hi);
    const int centre = (lo + hi + 1) / 2;

    const auto retained_on = [&](int e) {
        std::vector<int> r;
        const int first = kv.first_active(e);
        for (int i = first; i <= first + p; ++i)
            if (broken.is_retained(i)) r.push_back(i);
        return r;
    };
    // Elements a dual of B_i may reach without exceeding 2p+1 elements in total.
    const auto fits = [&](const std::vector<int>& set) {
        for (int i : set) {
            const auto [s, t] = kv.support(i);
            if (f.first < s - (p + 1) / 2 || f.last() > t + p / 2) return false;
        }
        return true;
    };

    IndexSetChoice choice;
    choice.central_element = frame(centre);
    choice.bsplines = retained_on(choice.central_element);
    if (static_cast<int>(choice.bsplines.size()) == p + 1) return choice;

    const int dir = (2 * centre <= ne - 1) ? 1 : -1;
    for (int s = 1; centre + dir * s >= 0 && centre + dir * s < ne; ++s) {
        const int e = frame(centre + dir * s);
        std::vector<int> set = retained_on(e);
        if (static_cast<int>(set.size()) < p + 1) continue;
        if (fits(set)) {
            choice.central_element = e;
            choice.bsplines = std::move(set);
            choice.shift = s;
            return choice;
        }
        break;
    }

    choice.reduced = true;
    if (!choice.bsplines.empty()) return choice;
    for (int s = 1; s < ne; ++s)
        for (int e : {frame(centre) - s, frame(centre) + s}) {
            if (e < 0 || e >= ne) continue;
            std::vector<int> set = retained_on(e);
            if (set.empty()) continue;
            choice.central_element = e;
            choice.bsplines = std::move(set);
            choice.shift = s;
            return choice;
        }
    return choice;
}

DualBasis build_optimal_dual(const BrokenBasis& broken, const NaiveDualTable& naive, const ElementQuadrature& quad,
                             PolyBasis poly)
{
    const auto& space = broken.space();
    const auto& kv = space.knots();
    DualBasis basis(space, DualKind::optimal, quad.mode(), broken.flags());

    std::vector<PiecewisePolynomial> bsp(kv.num_basis());
    for (int i = 0; i < kv.num_basis(); ++i) bsp[i] = bspline_piece(space, i);

    for (int k : broken.extra()) {
        const IndexSetChoice choice = choose_index_set(broken, naive, k);
        const int q = static_cast<int>(choice.bsplines.size());
        const BrokenMember& m = broken.member(k);
        if (choice.shift > 0 || choice.reduced) {
            std::ostringstream msg;
            msg << "extra member " << k << " (B-spline " << m.bspline << ", extension " << m.local
                << "): index set taken from element " << choice.central_element;
            if (choice.shift > 0) msg << " after shifting " << choice.shift << " element(s)";
            if (choice.reduced) msg << ", reduced to " << q << " function(s) and polynomial degree " << q - 1;
            basis.log.push_back(msg.str());
        }
        if (q == 0) throw ConstructionError("extra member " + std::to_string(k) + " has an empty index set");

        const double a = kv.knot(choice.bsplines.front());
        const double b = kv.knot(choice.bsplines.back() + kv.degree() + 1);
        Eigen::MatrixXd s(q, q);
        for (int c = 0; c < q; ++c) s.col(c) = poly_moments(bsp[choice.bsplines[c]], quad, poly, q, a, b);
        const Eigen::VectorXd rhs = poly_moments(m.function, quad, poly, q, a, b);
        const double cond = condition_number(s);
        if (!(cond <= max_condition)) {
            std::ostringstream msg;
            msg << "local system of extra member " << k << " (B-spline " << m.bspline << ", extension " << m.local
                << ") is singular (condition " << cond << ")";
            throw ConstructionError(msg.str());
        }
        const Eigen::VectorXd zk = s.partialPivLu().solve(rhs);
        for (int c = 0; c < q; ++c)
            if (zk[c] != 0.0) basis.z.push_back({k, column_of(broken, choice.bsplines[c]), zk[c]});
    }
    combine(broken, naive, basis);
    return basis;
}

DualBasis build_element_dual(const BrokenBasis& broken, const NaiveDualTable& naive, const ElementQuadrature& quad)
{
    const auto& space = broken.space();
    const auto& kv = space.knots();
    const int n = kv.num_basis();
    DualBasis basis(space, DualKind::naive_element, quad.mode(), broken.flags());

    // Element weights w_ik = int_{e_k} B_i / int B_i, in the column order of alpha(i).
    const auto add_weighted = [&](int i, int column, double factor) {
        const PiecewisePolynomial b = bspline_piece(space, i);
        Eigen::VectorXd w(b.coeffs.rows());
        for (int r = 0; r < w.size(); ++r) {
            PiecewisePolynomial piece;
            piece.first = b.first + r;
            piece.coeffs = b.coeffs.row(r);
            w[r] = integral(piece, quad);
        }
        w /= w.sum();
        const Eigen::MatrixXd& a = broken.alpha(i);
        for (int j = 0; j < a.rows(); ++j) {
            if (j == 0 && broken.is_retained(i)) continue;
            basis.z.push_back({broken.member_index(i, j), column, factor * a.row(j).dot(w)});
        }
    };

    for (int i = 0; i < n; ++i)
        if (broken.is_retained(i)) add_weighted(i, column_of(broken, i), 1.0);

    const auto merge = [&](int removed, int neighbour) {
        const double cr = integral(bspline_piece(space, removed), quad);
        const double cn = integral(bspline_piece(space, neighbour), quad);
        add_weighted(removed, column_of(broken, neighbour), cr / cn);
        basis.log.push_back("crosspoint: dual of B-spline " + std::to_string(removed) + " merged into B-spline " +
                            std::to_string(neighbour));
    };
    if (broken.flags().left) merge(0, 1);
    if (broken.flags().right) merge(n - 1, n - 2);

    combine(broken, naive, basis);
    return basis;
}

DualBasis scale_dual(DualBasis basis, const ElementQuadrature& quad)
{
    for (int j = 0; j < basis.size(); ++j) {
        const PiecewisePolynomial b = bspline_piece(basis.space(), basis.retained[j]);
        const double c = integral(b, quad);
        if (!(c > 0.0))
            throw DomainError("scaling: (B_" + std::to_string(basis.retained[j]) + ", 1) is not positive");
        const double d = inner(b, basis.functions[j], quad);
        basis.functions[j].scale(c / d);
        basis.scale[j] = c;
    }
    return basis;
}

DualBasis make_dual_basis(const spline::SplineSpace1D& space, CrosspointFlags flags, DualKind kind,
                          const WeightedInnerProduct& ip, bool scaled)
{
    const BrokenBasis broken(space, flags);
    const ElementQuadrature quad(space.knots(), ip);
    const NaiveDualTable naive = build_naive_dual(broken, quad);
    DualBasis basis = kind == DualKind::optimal ? build_optimal_dual(broken, naive, quad)
                                                : build_element_dual(broken, naive, quad);
    return scaled ? scale_dual(std::move(basis), quad) : basis;
}

Eigen::MatrixXd coupling_gram(const DualBasis& basis, const ElementQuadrature& quad)
{
    const int n = basis.size();
    Eigen::MatrixXd g(n, n);
    std::vector<PiecewisePolynomial> b(n);
    for (int a = 0; a < n; ++a) b[a] = bspline_piece(basis.space(), basis.retained[a]);
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) g(a, c) = inner(b[a], basis.functions[c], quad);
    return g;
}

BiorthogonalityReport check_biorthogonality(const DualBasis& basis, const ElementQuadrature& quad)
{
    const Eigen::MatrixXd g = coupling_gram(basis, quad);
    double cmax = 0.0;
    for (double c : basis.scale) cmax = std::max(cmax, std::abs(c));
    BiorthogonalityReport r;
    for (int a = 0; a < g.rows(); ++a)
        for (int c = 0; c < g.cols(); ++c) {
            if (a == c)
                r.diagonal = std::max(r.diagonal, std::abs(g(a, c) - basis.scale[a]) / cmax);
            else
                r.off_diagonal = std::max(r.off_diagonal, std::abs(g(a, c)) / cmax);
        }
    return r;
}

double QuasiInterpolant::operator()(double x) const
{
    double v = 0.0;
    for (int j = 0; j < basis_.size(); ++j) v += coeffs_[j] * basis_.evaluate(j, x);
    return v;
}

QuasiInterpolant quasi_interpolate(const DualBasis& basis, const std::function<double(double)>& f,
                                   const ElementQuadrature& quad)
{
    std::vector<double> coeffs(basis.size());
    for (int j = 0; j < basis.size(); ++j)
        coeffs[j] = inner(f, bspline_piece(basis.space(), basis.retained[j]), quad) / basis.scale[j];
    return QuasiInterpolant(basis, std::move(coeffs));
}

}  // namespace dualmortar::dual
