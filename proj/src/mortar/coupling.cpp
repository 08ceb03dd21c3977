#include "dualmortar/mortar/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include <Eigen/Cholesky>

#include "dualmortar/common/errors.hpp"
#include "dualmortar/common/quadrature.hpp"

namespace dualmortar::mortar {

using dual::PiecewisePolynomial;
using dual::WeightMode;
using spline::SplineSpace1D;

std::string to_string(MultiplierKind k)
{
    switch (k) {
    case MultiplierKind::standard: return "std";
    case MultiplierKind::naive: return "naive";
    case MultiplierKind::optimal: return "optimal";
    }
    return "?";
}

MultiplierKind multiplier_kind_from_string(const std::string& s)
{
    if (s == "std" || s == "standard") return MultiplierKind::standard;
    if (s == "naive" || s == "ele_dual") return MultiplierKind::naive;
    if (s == "optimal") return MultiplierKind::optimal;
    throw ConfigError("unknown multiplier kind '" + s + "' (expected std, naive or optimal)");
}

FaceTrace::FaceTrace(const spline::NurbsPatch& patch, spline::Face face)
    : space_(patch.face_space(face)), controls_(patch.face_indices(face))
{
    for (int a : controls_) {
        weights_.push_back(patch.weight(a));
        points_.push_back(patch.control(a));
    }
}

int FaceTrace::evaluate(int e, double t, Eigen::VectorXd& values) const
{
    Eigen::MatrixXd n;
    const int first = space_.evaluate_on_element(e, t, 0, n);
    values.resize(n.cols());
    double W = 0.0;
    for (int r = 0; r < n.cols(); ++r) {
        values[r] = weights_[first + r] * n(0, r);
        W += values[r];
    }
    values /= W;
    return first;
}

FaceTrace::Point FaceTrace::geometry(int e, double t) const
{
    Eigen::MatrixXd n;
    const int first = space_.evaluate_on_element(e, t, 1, n);
    double W = 0.0, dW = 0.0;
    Eigen::Vector2d A = Eigen::Vector2d::Zero(), dA = Eigen::Vector2d::Zero();
    for (int r = 0; r < n.cols(); ++r) {
        const double w = weights_[first + r];
        W += w * n(0, r);
        dW += w * n(1, r);
        A += w * n(0, r) * points_[first + r];
        dA += w * n(1, r) * points_[first + r];
    }
    Point p;
    p.x = A / W;
    p.tangent = (dA * W - A * dW) / (W * W);
    p.weight = W;
    return p;
}

dual::WeightedInnerProduct interface_inner_product(const MultipatchDomain& domain, const InterfaceSpec& iface,
                                                   int points_per_element)
{
    dual::WeightedInnerProduct ip = dual::WeightedInnerProduct::parametric();
    if (iface.weight == WeightMode::physical) {
        FaceTrace trace(domain.patches[iface.slave.patch], iface.slave.face);
        ip = dual::WeightedInnerProduct::physical([trace](double t) {
            const auto g = trace.geometry(trace.space().knots().element_of(t), t);
            return g.tangent.norm() / g.weight;
        });
    }
    if (points_per_element > 0) ip.set_points_per_element(points_per_element);
    return ip;
}

std::vector<Segment> segment_interface(const MultipatchDomain& domain, const InterfaceSpec& iface)
{
    const FaceTrace slave(domain.patches[iface.slave.patch], iface.slave.face);
    const FaceTrace master(domain.patches[iface.master.patch], iface.master.face);

    struct Cut {
        double s, m;
        bool exact_s, exact_m;
    };
    std::vector<Cut> cuts;
    for (double b : slave.space().knots().breakpoints())
        cuts.push_back({b, geometry::pullback_to_master(domain, iface, b), true, false});
    const auto mb = master.space().knots().breakpoints();
    for (std::size_t k = 1; k + 1 < mb.size(); ++k)
        cuts.push_back({geometry::pullback_to_slave(domain, iface, mb[k]), mb[k], false, true});
    std::stable_sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.s < b.s; });

    std::vector<Cut> merged;
    for (const Cut& c : cuts) {
        if (!merged.empty() && c.s - merged.back().s <= 1e-12) {
            Cut& m = merged.back();
            if (c.exact_s && !m.exact_s) m.s = c.s, m.exact_s = true;
            if (c.exact_m && !m.exact_m) m.m = c.m, m.exact_m = true;
            continue;
        }
        merged.push_back(c);
    }
    std::vector<Segment> segs;
    for (std::size_t k = 0; k + 1 < merged.size(); ++k)
        segs.push_back({merged[k].s, merged[k + 1].s, merged[k].m, merged[k + 1].m});
    return segs;
}

double MultiplierBasis::evaluate(int j, double t) const
{
    const double v = functions[j].evaluate(space.knots(), t);
    if (!rational()) return v;
    const auto b = space.evaluate(t);
    double W = 0.0;
    for (std::size_t r = 0; r < b.values.size(); ++r) W += trace_weights[b.first + r] * b.values[r];
    return v / W;
}

MultiplierBasis make_multiplier(const SplineSpace1D& space, const std::vector<double>& trace_weights,
                                dual::CrosspointFlags flags, MultiplierKind kind, const dual::WeightedInnerProduct& ip,
                                bool scaled)
{
    const int n = space.num_basis();
    MultiplierBasis m;
    m.kind = kind;
    m.mode = ip.mode();
    m.flags = flags;
    m.space = space;
    if (flags.left) m.removed.push_back(0);
    if (flags.right && !(flags.left && n == 1)) m.removed.push_back(n - 1);

    if (kind == MultiplierKind::standard) {
        if (static_cast<int>(trace_weights.size()) != n) throw ConfigError("trace weights do not match the slave space");
        if (n - static_cast<int>(m.removed.size()) < 1)
            throw ConstructionError("no multiplier left after crosspoint removal");
        m.trace_weights = trace_weights;
        for (int i = 0; i < n; ++i) {
            if (std::find(m.removed.begin(), m.removed.end(), i) != m.removed.end()) continue;
            m.retained.push_back(i);
            PiecewisePolynomial f;
            f.add(trace_weights[i], dual::bspline_piece(space, i));
            if (flags.left && i == 1) f.add(trace_weights[0], dual::bspline_piece(space, 0));
            if (flags.right && i == n - 2) f.add(trace_weights[n - 1], dual::bspline_piece(space, n - 1));
            m.functions.push_back(std::move(f));
        }
        return m;
    }

    const auto dk = kind == MultiplierKind::naive ? dual::DualKind::naive_element : dual::DualKind::optimal;
    auto basis = dual::make_dual_basis(space, flags, dk, ip, scaled);
    m.retained = basis.retained;
    m.functions = std::move(basis.functions);
    return m;
}

namespace {

/// Dense local contribution: rows are multiplier indices, columns consecutive trace indices.
struct Block {
    std::vector<int> rows;
    int first_col = 0;
    Eigen::MatrixXd values;
};

std::vector<std::vector<int>> active_by_element(const MultiplierBasis& m, int num_elements)
{
    std::vector<std::vector<int>> act(num_elements);
    for (int j = 0; j < m.size(); ++j)
        for (int e = std::max(0, m.functions[j].first); e <= std::min(num_elements - 1, m.functions[j].last()); ++e)
            act[e].push_back(j);
    return act;
}

/// Values of the active multipliers at local coordinate xi of slave element e.
void multiplier_values(const MultiplierBasis& m, const std::vector<int>& active, int e, double xi, double W,
                       Eigen::VectorXd& out)
{
    const int p = m.space.degree();
    Eigen::VectorXd bern(p + 1);
    spline::bernstein_values(p, xi, bern.data());
    out.resize(static_cast<Eigen::Index>(active.size()));
    for (std::size_t r = 0; r < active.size(); ++r) {
        const auto& f = m.functions[active[r]];
        out[static_cast<Eigen::Index>(r)] = f.coeffs.row(e - f.first).dot(bern);
    }
    if (m.rational()) out /= W;
}

double coupling_weight(const FaceTrace::Point& g, WeightMode mode)
{
    return mode == WeightMode::physical ? g.tangent.norm() : g.weight;
}

template <class F>
void run_blocks(int count, Execution exec, std::vector<Block>& blocks, F&& compute)
{
    blocks.assign(count, Block{});
    if (exec == Execution::serial) {
        for (int k = 0; k < count; ++k) compute(k, blocks[k]);
        return;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < count; ++k) {
        try {
            compute(k, blocks[k]);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

double max_abs(const SparseMatrix& m)
{
    double v = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) v = std::max(v, std::abs(it.value()));
    return v;
}

void drop_roundoff(SparseMatrix& m, double reference)
{
    if (reference > 0.0) m.prune(reference, 1e-14);
    m.makeCompressed();
}

}  // namespace

double off_diagonal_ratio(const SparseMatrix& m)
{
    double diag = 0.0, off = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            (it.row() == it.col() ? diag : off) = std::max(it.row() == it.col() ? diag : off, std::abs(it.value()));
    return diag > 0.0 ? off / diag : (off > 0.0 ? INFINITY : 0.0);
}

CouplingMatrices assemble_coupling(const MultipatchDomain& domain, const InterfaceSpec& iface, int component,
                                   MultiplierKind kind, const CouplingOptions& options)
{
    const FaceTrace slave(domain.patches[iface.slave.patch], iface.slave.face);
    const int p = slave.space().degree();
    const int q = options.segment_points > 0 ? options.segment_points : 2 * p + 3;
    const auto ip = interface_inner_product(domain, iface, q);
    auto m = make_multiplier(slave.space(), slave.weights(), iface.crosspoints.at(component), kind, ip, options.scaled);
    return assemble_coupling(domain, iface, std::move(m), options);
}

CouplingMatrices assemble_coupling(const MultipatchDomain& domain, const InterfaceSpec& iface,
                                   MultiplierBasis multiplier, const CouplingOptions& options)
{
    if (multiplier.mode != iface.weight)
        throw ConfigError("multiplier weight mode " + dual::to_string(multiplier.mode) +
                          " does not match the interface weight mode " + dual::to_string(iface.weight));
    const FaceTrace slave(domain.patches[iface.slave.patch], iface.slave.face);
    const FaceTrace master(domain.patches[iface.master.patch], iface.master.face);
    if (!(multiplier.space.knots() == slave.space().knots()))
        throw ConfigError("multiplier is not built on the slave face space");

    const int p = slave.space().degree();
    const int q = options.segment_points > 0 ? options.segment_points : 2 * p + 3;
    const auto ip = interface_inner_product(domain, iface, q);
    const dual::ElementQuadrature quad(slave.space().knots(), ip);
    const auto& knots = slave.space().knots();
    const int ne = knots.num_elements();
    const auto active = active_by_element(multiplier, ne);
    const int nm = multiplier.size();

    CouplingMatrices cm;
    cm.segments = segment_interface(domain, iface);

    // slave-slave pairing on slave elements with the rule the multiplier was built with
    std::vector<Block> sblocks;
    run_blocks(ne, options.execution, sblocks, [&](int e, Block& blk) {
        blk.rows = active[e];
        blk.first_col = knots.first_active(e);
        const auto pts = quad.points(e);
        const auto wts = quad.weights(e);
        const Eigen::MatrixXd bs = quad.bernstein() * slave.space().extraction(e).transpose();
        const double a = knots.breakpoint(e), h = knots.breakpoint(e + 1) - a;
        blk.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(blk.rows.size()), p + 1);
        Eigen::VectorXd psi;
        for (int k = 0; k < quad.num_points(); ++k) {
            const double W = multiplier.rational() ? slave.geometry(e, pts[k]).weight : 1.0;
            multiplier_values(multiplier, blk.rows, e, (pts[k] - a) / h, W, psi);
            for (int c = 0; c <= p; ++c)
                blk.values.col(c) += wts[k] * bs(k, c) * slave.weights()[blk.first_col + c] * psi;
        }
    });

    // slave-master pairing on the merged segments
    const QuadratureRule rule = gauss_legendre(q);
    const auto& mknots = master.space().knots();
    std::vector<Block> mblocks;
    run_blocks(static_cast<int>(cm.segments.size()), options.execution, mblocks, [&](int k, Block& blk) {
        const Segment& s = cm.segments[k];
        const int es = knots.element_of(0.5 * (s.slave0 + s.slave1));
        const int em = mknots.element_of(0.5 * (s.master0 + s.master1));
        blk.rows = active[es];
        blk.first_col = mknots.first_active(em);
        const double a = knots.breakpoint(es), h = knots.breakpoint(es + 1) - a;
        blk.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(blk.rows.size()), master.space().degree() + 1);
        Eigen::VectorXd psi, rm;
        for (int g = 0; g < rule.size(); ++g) {
            const double ts = s.slave0 + rule.points[g] * (s.slave1 - s.slave0);
            const double guess = s.master0 + rule.points[g] * (s.master1 - s.master0);
            const double tm = geometry::pullback_to_master(domain, iface, ts, guess);
            const auto geo = slave.geometry(es, ts);
            multiplier_values(multiplier, blk.rows, es, (ts - a) / h, geo.weight, psi);
            master.evaluate(em, tm, rm);
            const double w = rule.weights[g] * (s.slave1 - s.slave0) * coupling_weight(geo, multiplier.mode);
            blk.values += w * psi * rm.transpose();
        }
    });

    std::vector<int> scol(slave.size(), -1), xcol(slave.size(), -1);
    for (std::size_t k = 0; k < multiplier.retained.size(); ++k) scol[multiplier.retained[k]] = static_cast<int>(k);
    for (std::size_t k = 0; k < multiplier.removed.size(); ++k) xcol[multiplier.removed[k]] = static_cast<int>(k);

    std::vector<Triplet> tss, tsx, tsm;
    for (const Block& b : sblocks)
        for (std::size_t r = 0; r < b.rows.size(); ++r)
            for (int c = 0; c < b.values.cols(); ++c) {
                const int col = b.first_col + c;
                const double v = b.values(static_cast<Eigen::Index>(r), c);
                if (scol[col] >= 0) tss.emplace_back(b.rows[r], scol[col], v);
                else tsx.emplace_back(b.rows[r], xcol[col], v);
            }
    for (const Block& b : mblocks)
        for (std::size_t r = 0; r < b.rows.size(); ++r)
            for (int c = 0; c < b.values.cols(); ++c)
                tsm.emplace_back(b.rows[r], b.first_col + c, b.values(static_cast<Eigen::Index>(r), c));

    cm.M_SS.resize(nm, static_cast<Eigen::Index>(multiplier.retained.size()));
    cm.M_SX.resize(nm, static_cast<Eigen::Index>(multiplier.removed.size()));
    cm.M_SM.resize(nm, master.size());
    cm.M_SS.setFromTriplets(tss.begin(), tss.end());
    cm.M_SX.setFromTriplets(tsx.begin(), tsx.end());
    cm.M_SM.setFromTriplets(tsm.begin(), tsm.end());
    cm.off_diagonal = off_diagonal_ratio(cm.M_SS);
    const double ref = std::max({max_abs(cm.M_SS), max_abs(cm.M_SX), max_abs(cm.M_SM)});
    drop_roundoff(cm.M_SS, ref);
    drop_roundoff(cm.M_SX, ref);
    drop_roundoff(cm.M_SM, ref);
    cm.multiplier = std::move(multiplier);
    return cm;
}

MortarProjection mortar_projection(const CouplingMatrices& cm)
{
    MortarProjection mp;
    const auto n = cm.M_SS.rows();
    if (cm.M_SS.cols() != n) throw NumericalError("M_SS is not square");
    if (is_dual(cm.kind())) {
        if (cm.off_diagonal > 1e-10) {
            std::ostringstream msg;
            msg << "M_SS of a dual multiplier is not diagonal (off-diagonal ratio " << cm.off_diagonal << ")";
            throw NumericalError(msg.str());
        }
        Eigen::VectorXd inv(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = cm.M_SS.coeff(i, i);
            if (!(std::abs(d) > 0.0)) throw NumericalError("M_SS has a zero diagonal entry");
            inv[i] = 1.0 / d;
        }
        mp.P = inv.asDiagonal() * cm.M_SM;
        mp.X = inv.asDiagonal() * cm.M_SX;
        mp.diagonal = true;
        return mp;
    }
    // merged end functions make the standard M_SS unsymmetric
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd(cm.M_SS));
    if (!(lu.rcond() > 1e-12)) throw NumericalError("M_SS is numerically singular");
    mp.P = lu.solve(Eigen::MatrixXd(cm.M_SM)).sparseView(0.0, 0.0);
    mp.X = lu.solve(Eigen::MatrixXd(cm.M_SX)).sparseView(0.0, 0.0);
    mp.P.makeCompressed();
    mp.X.makeCompressed();
    return mp;
}

}  // namespace dualmortar::mortar
