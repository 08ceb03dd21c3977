#include "dualmortar/mortar/system.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "dualmortar/common/errors.hpp"

namespace dualmortar::mortar {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

DofMap::DofMap(const MultipatchDomain& domain) : offset_{0}
{
    for (const auto& p : domain.patches) offset_.push_back(offset_.back() + p.size());
}

Constraints assemble_constraints(const MultipatchDomain& domain, const DofMap& dofs, MultiplierKind kind,
                                 const CouplingOptions& options)
{
    Constraints c;
    c.num_primal = dofs.size();
    for (int k = 0; k < static_cast<int>(domain.interfaces.size()); ++k) {
        const auto& iface = domain.interfaces[k];
        const FaceTrace slave(domain.patches[iface.slave.patch], iface.slave.face);
        const FaceTrace master(domain.patches[iface.master.patch], iface.master.face);
        for (int comp = 0; comp < 2; ++comp) {
            ConstraintBlock b;
            b.interface = k;
            b.component = comp;
            b.first_multiplier = c.num_multipliers;
            b.cm = assemble_coupling(domain, iface, comp, kind, options);
            for (int a : b.cm.multiplier.retained)
                b.slave.push_back(dofs.dof(iface.slave.patch, slave.controls()[a], comp));
            for (int a : b.cm.multiplier.removed)
                b.removed.push_back(dofs.dof(iface.slave.patch, slave.controls()[a], comp));
            for (int a : master.controls()) b.master.push_back(dofs.dof(iface.master.patch, a, comp));
            c.num_multipliers += b.cm.multiplier.size();
            c.blocks.push_back(std::move(b));
        }
    }
    return c;
}

SparseMatrix Constraints::matrix() const
{
    std::vector<Triplet> t;
    const auto put = [&](const SparseMatrix& m, const std::vector<int>& cols, int row0, double sign) {
        for (int r = 0; r < m.outerSize(); ++r)
            for (SparseMatrix::InnerIterator it(m, r); it; ++it)
                t.emplace_back(row0 + static_cast<int>(it.row()), cols[it.col()], sign * it.value());
    };
    for (const auto& b : blocks) {
        put(b.cm.M_SS, b.slave, b.first_multiplier, 1.0);
        put(b.cm.M_SX, b.removed, b.first_multiplier, 1.0);
        put(b.cm.M_SM, b.master, b.first_multiplier, -1.0);
    }
    SparseMatrix B(num_multipliers, num_primal);
    B.setFromTriplets(t.begin(), t.end());
    return B;
}

void Dirichlet::add(int dof, double value)
{
    dofs.push_back(dof);
    values.push_back(value);
}

void Dirichlet::finalize()
{
    std::vector<std::size_t> order(dofs.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return dofs[a] < dofs[b]; });
    std::vector<int> d;
    std::vector<double> v;
    for (auto k : order) {
        if (!d.empty() && d.back() == dofs[k]) {
            if (std::abs(v.back() - values[k]) > 1e-12 * std::max(1.0, std::abs(v.back())))
                throw ConfigError("conflicting Dirichlet values for DOF " + std::to_string(dofs[k]));
            continue;
        }
        d.push_back(dofs[k]);
        v.push_back(values[k]);
    }
    dofs = std::move(d);
    values = std::move(v);
}

Eigen::VectorXd Dirichlet::full(int n) const
{
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < dofs.size(); ++k) x[dofs[k]] = values[k];
    return x;
}

std::vector<char> Dirichlet::mask(int n) const
{
    std::vector<char> m(n, 0);
    for (int d : dofs) m[d] = 1;
    return m;
}

SaddlePointSystem assemble_saddle_point(const SparseMatrix& K, const Eigen::VectorXd& f, const Dirichlet& dirichlet,
                                        const Constraints& constraints)
{
    const int n = static_cast<int>(K.rows());
    const auto fixed = dirichlet.mask(n);
    const Eigen::VectorXd d = dirichlet.full(n);
    SaddlePointSystem sys;
    std::vector<int> col(n, -1);
    for (int i = 0; i < n; ++i)
        if (!fixed[i]) {
            col[i] = static_cast<int>(sys.primal.size());
            sys.primal.push_back(i);
        }
    sys.num_primal = static_cast<int>(sys.primal.size());
    sys.num_dual = constraints.num_multipliers;

    const SparseMatrix B = constraints.matrix();
    const Eigen::VectorXd Kd = K * d;
    const Eigen::VectorXd Bd = B * d;

    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(K.nonZeros() + 2 * B.nonZeros()));
    for (int r = 0; r < n; ++r) {
        if (fixed[r]) continue;
        for (SparseMatrix::InnerIterator it(K, r); it; ++it)
            if (col[it.col()] >= 0) t.emplace_back(col[r], col[it.col()], it.value());
    }
    for (int r = 0; r < B.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(B, r); it; ++it)
            if (col[it.col()] >= 0) {
                t.emplace_back(sys.num_primal + r, col[it.col()], it.value());
                t.emplace_back(col[it.col()], sys.num_primal + r, it.value());
            }
    const int size = sys.num_primal + sys.num_dual;
    sys.matrix.resize(size, size);
    sys.matrix.setFromTriplets(t.begin(), t.end());
    sys.rhs.resize(size);
    for (int k = 0; k < sys.num_primal; ++k) sys.rhs[k] = f[sys.primal[k]] - Kd[sys.primal[k]];
    sys.rhs.tail(sys.num_dual) = -Bd;
    return sys;
}

MortarSolution solve_saddle_point(const SaddlePointSystem& sys, const Dirichlet& dirichlet, int num_dofs)
{
    const auto t0 = std::chrono::steady_clock::now();
    const ColMatrix A(sys.matrix);
    Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw NumericalError("saddle-point factorization failed: " + lu.lastErrorMessage());
    const Eigen::VectorXd x = lu.solve(sys.rhs);
    if (lu.info() != Eigen::Success) throw NumericalError("saddle-point solve failed");
    MortarSolution s;
    s.solve_seconds = seconds_since(t0);
    s.u = dirichlet.full(num_dofs);
    for (int k = 0; k < sys.num_primal; ++k) s.u[sys.primal[k]] = x[k];
    s.lambda = x.tail(sys.num_dual);
    return s;
}

CondensedSystem condense_to_primal(const SparseMatrix& K, const Eigen::VectorXd& f, const Dirichlet& dirichlet,
                                   const Constraints& constraints)
{
    const int n = static_cast<int>(K.rows());
    const auto fixed = dirichlet.mask(n);
    const Eigen::VectorXd dvals = dirichlet.full(n);

    // eliminated DOF -> (block, row of P)
    std::vector<std::pair<int, int>> elim(n, {-1, -1});
    for (int b = 0; b < static_cast<int>(constraints.blocks.size()); ++b) {
        const auto& blk = constraints.blocks[b];
        for (int r = 0; r < static_cast<int>(blk.slave.size()); ++r) {
            const int g = blk.slave[r];
            if (fixed[g])
                throw ConfigError("slave DOF " + std::to_string(g) +
                                  " is also prescribed; the interface end needs a crosspoint flag");
            if (elim[g].first >= 0) throw ConfigError("slave DOF " + std::to_string(g) + " is eliminated twice");
            elim[g] = {b, r};
        }
    }
    for (const auto& blk : constraints.blocks)
        for (const auto* cols : {&blk.master, &blk.removed})
            for (int g : *cols)
                if (elim[g].first >= 0)
                    throw ConfigError("chained elimination: DOF " + std::to_string(g) +
                                      " is a slave DOF and also coupled as master or crosspoint DOF");

    CondensedSystem sys;
    std::vector<int> col(n, -1);
    for (int i = 0; i < n; ++i)
        if (!fixed[i] && elim[i].first < 0) {
            col[i] = static_cast<int>(sys.free.size());
            sys.free.push_back(i);
        }
    for (const auto& blk : constraints.blocks) sys.projections.push_back(mortar_projection(blk.cm));

    // rows of C for eliminated DOFs, gathered per block first
    std::vector<std::vector<std::pair<int, double>>> rows(n);
    sys.d = Eigen::VectorXd::Zero(n);
    for (int b = 0; b < static_cast<int>(constraints.blocks.size()); ++b) {
        const auto& blk = constraints.blocks[b];
        const auto& mp = sys.projections[b];
        const auto add = [&](const SparseMatrix& m, const std::vector<int>& cols, double sign) {
            for (int r = 0; r < m.outerSize(); ++r)
                for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
                    const int i = blk.slave[r], g = cols[it.col()];
                    if (fixed[g]) sys.d[i] += sign * it.value() * dvals[g];
                    else rows[i].emplace_back(col[g], sign * it.value());
                }
        };
        add(mp.P, blk.master, 1.0);
        add(mp.X, blk.removed, -1.0);
    }
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) {
        if (fixed[i]) sys.d[i] = dvals[i];
        else if (col[i] >= 0) t.emplace_back(i, col[i], 1.0);
        else
            for (const auto& [c, v] : rows[i]) t.emplace_back(i, c, v);
    }
    sys.C.resize(n, static_cast<Eigen::Index>(sys.free.size()));
    sys.C.setFromTriplets(t.begin(), t.end());

    const SparseMatrix KC = K * sys.C;
    const SparseMatrix Ct = sys.C.transpose();
    sys.matrix = Ct * KC;
    sys.matrix.makeCompressed();
    sys.rhs = Ct * (f - K * sys.d);

    auto K_ = std::make_shared<const SparseMatrix>(K);
    auto f_ = std::make_shared<const Eigen::VectorXd>(f);
    std::vector<std::pair<std::vector<int>, SparseMatrix>> mss;
    int nmult = 0;
    for (const auto& blk : constraints.blocks) {
        mss.emplace_back(blk.slave, blk.cm.M_SS);
        nmult += static_cast<int>(blk.cm.M_SS.rows());
    }
    sys.multipliers = [K_, f_, mss = std::move(mss), nmult](const Eigen::VectorXd& u) {
        const Eigen::VectorXd res = *f_ - *K_ * u;
        Eigen::VectorXd lambda(nmult);
        int at = 0;
        for (const auto& [slave, m] : mss) {
            Eigen::VectorXd rs(static_cast<Eigen::Index>(slave.size()));
            for (std::size_t k = 0; k < slave.size(); ++k) rs[static_cast<Eigen::Index>(k)] = res[slave[k]];
            const Eigen::MatrixXd mt = Eigen::MatrixXd(m).transpose();
            lambda.segment(at, mt.rows()) = mt.partialPivLu().solve(rs);
            at += static_cast<int>(mt.rows());
        }
        return lambda;
    };
    return sys;
}

MortarSolution solve_condensed(const CondensedSystem& sys, LinearSolver solver, bool with_multipliers)
{
    const auto t0 = std::chrono::steady_clock::now();
    const ColMatrix A(sys.matrix);
    Eigen::VectorXd x;
    if (solver == LinearSolver::direct) {
        Eigen::SimplicialLDLT<ColMatrix> ldlt(A);
        if (ldlt.info() != Eigen::Success) throw NumericalError("factorization of the condensed system failed");
        x = ldlt.solve(sys.rhs);
    } else {
        Eigen::ConjugateGradient<ColMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
        cg.setTolerance(1e-12);
        cg.setMaxIterations(10 * static_cast<int>(A.rows()));
        cg.compute(A);
        x = cg.solve(sys.rhs);
        if (cg.info() != Eigen::Success) {
            std::ostringstream msg;
            msg << "conjugate gradients did not converge: relative residual " << cg.error() << " after "
                << cg.iterations() << " iterations";
            throw NumericalError(msg.str());
        }
    }
    MortarSolution s;
    s.solve_seconds = seconds_since(t0);
    s.u = sys.expand(x);
    if (with_multipliers) s.lambda = sys.multipliers(s.u);
    return s;
}

double continuity_residual(const Constraints& constraints, const Eigen::VectorXd& u)
{
    const SparseMatrix B = constraints.matrix();
    double scale = 0.0;
    for (int r = 0; r < B.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(B, r); it; ++it) scale = std::max(scale, std::abs(it.value()));
    const double un = u.norm();
    if (scale == 0.0 || un == 0.0) return 0.0;
    return (B * u).norm() / (scale * un);
}

long predicted_condensed_nnz(const SparseMatrix& K, const SparseMatrix& C)
{
    const auto ones = [](SparseMatrix m) {
        for (int r = 0; r < m.outerSize(); ++r)
            for (SparseMatrix::InnerIterator it(m, r); it; ++it) it.valueRef() = 1.0;
        return m;
    };
    const SparseMatrix k = ones(K), c = ones(C);
    const SparseMatrix ct = c.transpose();
    const SparseMatrix kc = k * c;
    const SparseMatrix a = ct * kc;
    return a.nonZeros();
}

}  // namespace dualmortar::mortar
