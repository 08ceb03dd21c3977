#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dualmortar/common/sparse.hpp"
#include "dualmortar/mortar/coupling.hpp"

namespace dualmortar::mortar {

/// Two displacement components per control point; patches are stacked in order and the
/// components of one control point are adjacent.
class DofMap {
public:
    explicit DofMap(const MultipatchDomain& domain);
    [[nodiscard]] int dof(int patch, int control, int component) const
    {
        return 2 * (offset_[patch] + control) + component;
    }
    [[nodiscard]] int size() const { return 2 * offset_.back(); }
    [[nodiscard]] int num_patches() const { return static_cast<int>(offset_.size()) - 1; }

private:
    std::vector<int> offset_;
};

/// Constraint rows of one interface and one component:
///   M_SS u_S + M_SX u_X - M_SM u_M = 0.
struct ConstraintBlock {
    int interface = 0;
    int component = 0;
    int first_multiplier = 0;
    CouplingMatrices cm;
    std::vector<int> slave;    ///< global DOFs of the retained slave trace functions
    std::vector<int> removed;  ///< global DOFs of the removed slave trace functions
    std::vector<int> master;   ///< global DOFs of the master trace functions
};

struct Constraints {
    std::vector<ConstraintBlock> blocks;
    int num_primal = 0;
    int num_multipliers = 0;

    /// The full constraint matrix (multipliers x primal DOFs).
    [[nodiscard]] SparseMatrix matrix() const;
};

Constraints assemble_constraints(const MultipatchDomain& domain, const DofMap& dofs, MultiplierKind kind,
                                 const CouplingOptions& options = {});

/// Prescribed DOF values, sorted by DOF.
struct Dirichlet {
    std::vector<int> dofs;
    std::vector<double> values;
    void add(int dof, double value);
    /// Sorts and checks for conflicting duplicates.
    void finalize();
    [[nodiscard]] Eigen::VectorXd full(int n) const;
    [[nodiscard]] std::vector<char> mask(int n) const;
};

/// [[K, B^T], [B, 0]] on the non-Dirichlet DOFs; prescribed values moved to the right-hand side.
struct SaddlePointSystem {
    SparseMatrix matrix;
    Eigen::VectorXd rhs;
    std::vector<int> primal;  ///< global DOF of each primal row
    int num_primal = 0;
    int num_dual = 0;
};

SaddlePointSystem assemble_saddle_point(const SparseMatrix& K, const Eigen::VectorXd& f, const Dirichlet& dirichlet,
                                        const Constraints& constraints);

struct MortarSolution {
    Eigen::VectorXd u;
    Eigen::VectorXd lambda;
    double solve_seconds = 0.0;
};

MortarSolution solve_saddle_point(const SaddlePointSystem& sys, const Dirichlet& dirichlet, int num_dofs);

/// Primal system after eliminating the retained slave trace DOFs through the mortar projection
/// and the prescribed DOFs: u = C ubar + d, A = C^T K C, b = C^T (f - K d).
struct CondensedSystem {
    SparseMatrix C;
    Eigen::VectorXd d;
    SparseMatrix matrix;
    Eigen::VectorXd rhs;
    std::vector<int> free;                       ///< global DOF of each reduced unknown
    std::vector<MortarProjection> projections;   ///< per constraint block
    /// Multiplier coefficients from a primal solution, computed on request.
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> multipliers;

    [[nodiscard]] Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const { return C * reduced + d; }
};

CondensedSystem condense_to_primal(const SparseMatrix& K, const Eigen::VectorXd& f, const Dirichlet& dirichlet,
                                   const Constraints& constraints);

enum class LinearSolver { direct, cg };

/// Solves the condensed system; `cg` uses a diagonal preconditioner and fails with a
/// numerical error reporting the residual if it does not converge.
MortarSolution solve_condensed(const CondensedSystem& sys, LinearSolver solver = LinearSolver::direct,
                               bool with_multipliers = false);

/// max over blocks of |M_SS u_S + M_SX u_X - M_SM u_M|, relative to |u|.
double continuity_residual(const Constraints& constraints, const Eigen::VectorXd& u);

/// nnz of C^T K C computed on the boolean patterns of K and C.
long predicted_condensed_nnz(const SparseMatrix& K, const SparseMatrix& C);

}  // namespace dualmortar::mortar
