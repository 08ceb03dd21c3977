#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dualmortar/elasticity/assembly.hpp"
#include "dualmortar/elasticity/kirsch.hpp"
#include "dualmortar/geometry/benchmarks.hpp"
#include "dualmortar/mortar/system.hpp"

namespace dualmortar::elasticity {

using mortar::MultiplierKind;

enum class SlavePolicy { given, finer_side };

std::string to_string(SlavePolicy s);
SlavePolicy slave_policy_from_string(const std::string& s);

struct ExactSolution {
    VectorField displacement;
    TensorField strain;
};

/// Boundary data named in the domain's boundary tags are looked up in `tractions`
/// (Neumann) and `displacements` (Dirichlet). "zero" is always available.
struct ElasticProblem {
    MultipatchDomain domain;
    std::vector<Material> materials;  ///< per patch
    VectorField body_force;
    std::map<std::string, TractionField> tractions;
    std::map<std::string, VectorField> displacements;
    std::optional<ExactSolution> exact;
    MultiplierKind multiplier = MultiplierKind::optimal;
    SlavePolicy slave_policy = SlavePolicy::given;
    /// Factor applied to computed energies (4 for a quarter model of a symmetric body).
    double symmetry_factor = 1.0;
};

/// Swaps slave and master on interfaces whose master face has more elements, then
/// re-detects crosspoints.
void apply_slave_policy(MultipatchDomain& domain, SlavePolicy policy);

struct SolveOptions {
    int levels = 4;       ///< number of refinement levels solved
    int first_level = 0;  ///< refinements applied before the first solved level
    mortar::CouplingOptions coupling;
    mortar::LinearSolver solver = mortar::LinearSolver::direct;
    bool saddle_point = false;  ///< solve the saddle-point system instead of the condensed one
    bool multipliers = false;   ///< recover multipliers and report their sup norm
    int bulk_points = 0;        ///< 0 means p+1
    int error_points = 0;       ///< 0 means p+3
    Execution execution = Execution::serial;
    /// Energy-based error sqrt|(E_ref - E_h) / E_ref| when positive, exact energy norm otherwise.
    double reference_energy = 0.0;
};

/// All algebraic data of one mesh level.
struct Discretization {
    MultipatchDomain domain;
    mortar::DofMap dofs;
    SparseMatrix K;
    Eigen::VectorXd f;
    mortar::Dirichlet dirichlet;
    mortar::Constraints constraints;
};

Discretization discretize(const ElasticProblem& problem, const MultipatchDomain& domain, const SolveOptions& options);

struct LevelResult {
    int level = 0;
    double h = 1.0;  ///< slave interface element size relative to the first solved level
    int dofs_primal = 0;
    int dofs_dual = 0;
    double energy_error = 0.0;
    double observed_order = 0.0;  ///< NaN on the first level
    double solve_seconds = 0.0;
    double energy = 0.0;           ///< strain energy symmetry_factor / 2 * int sigma(u_h) : eps(u_h)
    double multiplier_sup = 0.0;   ///< set when multipliers are requested
    double continuity = 0.0;       ///< relative weak-continuity residual
};

struct LevelSolution {
    Discretization disc;
    mortar::MortarSolution solution;
    LevelResult result;
};

/// Discretizes and solves one refinement level of the problem.
LevelSolution solve_level(const ElasticProblem& problem, int level, const SolveOptions& options);

std::vector<LevelResult> solve_mortar_elasticity(const ElasticProblem& problem, const SolveOptions& options);

/// Sup norm over the interfaces of the Euclidean norm of the multiplier field, sampled
/// at `samples` points per slave element.
double multiplier_sup_norm(const mortar::Constraints& constraints, const Eigen::VectorXd& lambda, int samples = 8);

/// Header level,h,dofs_primal,dofs_dual,energy_error,observed_order,solve_seconds; values with
/// 17 significant digits. Timings are left empty unless requested so that outputs are reproducible.
void write_csv(std::ostream& out, const std::vector<LevelResult>& results, bool timings);

/// Quarter plate with a hole under tension T, exact traction on the cut edges, symmetry conditions.
ElasticProblem plate_problem(const std::string& geometry_case, const geometry::BenchmarkParams& params,
                             MultiplierKind kind, double T = 10.0, Material material = {1e5, 0.3, Plane::stress});

/// Quarter bimaterial annulus under unit internal pressure with roller symmetry conditions.
ElasticProblem annulus_problem(const geometry::BenchmarkParams& params, MultiplierKind kind,
                               Plane plane = Plane::strain);

}  // namespace dualmortar::elasticity
