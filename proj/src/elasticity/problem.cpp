#include "dualmortar/elasticity/problem.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include "dualmortar/common/errors.hpp"

namespace dualmortar::elasticity {

std::string to_string(SlavePolicy s) { return s == SlavePolicy::given ? "given" : "finer_side"; }

SlavePolicy slave_policy_from_string(const std::string& s)
{
    if (s == "given" || s == "explicit") return SlavePolicy::given;
    if (s == "finer_side" || s == "finer") return SlavePolicy::finer_side;
    throw ConfigError("unknown slave policy '" + s + "' (expected given or finer_side)");
}

void apply_slave_policy(MultipatchDomain& domain, SlavePolicy policy)
{
    if (policy == SlavePolicy::given) return;
    bool swapped = false;
    for (auto& iface : domain.interfaces) {
        const int ns = domain.patches[iface.slave.patch].face_space(iface.slave.face).num_elements();
        const int nm = domain.patches[iface.master.patch].face_space(iface.master.face).num_elements();
        if (nm > ns) {
            std::swap(iface.slave, iface.master);
            swapped = true;
        }
    }
    if (swapped) geometry::apply_crosspoints(domain);
}

Discretization discretize(const ElasticProblem& problem, const MultipatchDomain& domain, const SolveOptions& options)
{
    if (static_cast<int>(problem.materials.size()) != domain.num_patches())
        throw ConfigError("one material per patch required");
    Discretization d{domain, mortar::DofMap(domain), {}, {}, {}, {}};
    const int n = d.dofs.size();
    d.f = Eigen::VectorXd::Zero(n);
    std::vector<Triplet> t;
    for (int k = 0; k < domain.num_patches(); ++k) {
        const auto& patch = domain.patches[k];
        const int off = d.dofs.dof(k, 0, 0);
        auto ps = assemble_stiffness(patch, problem.materials[k], problem.body_force, options.bulk_points,
                                     options.execution);
        for (int r = 0; r < ps.K.outerSize(); ++r)
            for (SparseMatrix::InnerIterator it(ps.K, r); it; ++it)
                t.emplace_back(off + static_cast<int>(it.row()), off + static_cast<int>(it.col()), it.value());
        for (int f = 0; f < 4; ++f) {
            const auto face = static_cast<Face>(f);
            const auto& tag = domain.boundary(k, face);
            if (tag.kind == geometry::BoundaryKind::neumann && tag.data != "zero") {
                const auto it = problem.tractions.find(tag.data);
                if (it == problem.tractions.end()) throw ConfigError("no traction named '" + tag.data + "'");
                ps.f += assemble_traction(patch, face, it->second);
            }
        }
        d.f.segment(off, ps.f.size()) += ps.f;
    }
    d.K.resize(n, n);
    d.K.setFromTriplets(t.begin(), t.end());

    for (int k = 0; k < domain.num_patches(); ++k)
        for (int f = 0; f < 4; ++f) {
            const auto face = static_cast<Face>(f);
            const auto& tag = domain.boundary(k, face);
            if (tag.kind != geometry::BoundaryKind::dirichlet) continue;
            VectorField g = [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero().eval(); };
            if (tag.data != "zero") {
                const auto it = problem.displacements.find(tag.data);
                if (it == problem.displacements.end()) throw ConfigError("no displacement named '" + tag.data + "'");
                g = it->second;
            }
            // control-point values: exact for affine data
            for (int a : domain.patches[k].face_indices(face)) {
                const Eigen::Vector2d v = g(domain.patches[k].control(a));
                for (int c = 0; c < 2; ++c)
                    if (tag.components[c]) d.dirichlet.add(d.dofs.dof(k, a, c), v[c]);
            }
        }
    d.dirichlet.finalize();
    d.constraints = mortar::assemble_constraints(domain, d.dofs, problem.multiplier, options.coupling);
    return d;
}

double multiplier_sup_norm(const mortar::Constraints& constraints, const Eigen::VectorXd& lambda, int samples)
{
    double sup = 0.0;
    std::map<int, std::array<const mortar::ConstraintBlock*, 2>> by_iface;
    for (const auto& b : constraints.blocks) by_iface[b.interface][b.component] = &b;
    for (const auto& [iface, blocks] : by_iface) {
        const auto& knots = blocks[0]->cm.multiplier.space.knots();
        for (int e = 0; e < knots.num_elements(); ++e)
            for (int s = 0; s <= samples; ++s) {
                const double t = knots.breakpoint(e) + (knots.breakpoint(e + 1) - knots.breakpoint(e)) * s / samples;
                Eigen::Vector2d v = Eigen::Vector2d::Zero();
                for (int c = 0; c < 2; ++c) {
                    const auto* b = blocks[c];
                    if (!b) continue;
                    const auto& m = b->cm.multiplier;
                    for (int j = 0; j < m.size(); ++j)
                        if (m.functions[j].covers(e)) v[c] += lambda[b->first_multiplier + j] * m.evaluate(j, t);
                }
                sup = std::max(sup, v.norm());
            }
    }
    return sup;
}

LevelSolution solve_level(const ElasticProblem& problem, int level, const SolveOptions& options)
{
    MultipatchDomain domain = problem.domain;
    apply_slave_policy(domain, problem.slave_policy);
    domain = domain.refined(level);

    LevelSolution ls{discretize(problem, domain, options), {}, {}};
    const auto& d = ls.disc;
    if (options.saddle_point) {
        const auto sys = mortar::assemble_saddle_point(d.K, d.f, d.dirichlet, d.constraints);
        ls.solution = mortar::solve_saddle_point(sys, d.dirichlet, d.dofs.size());
    } else {
        const auto sys = mortar::condense_to_primal(d.K, d.f, d.dirichlet, d.constraints);
        ls.solution = mortar::solve_condensed(sys, options.solver, options.multipliers);
    }

    LevelResult& r = ls.result;
    r.level = level;
    r.h = std::ldexp(1.0, -(level - options.first_level));
    r.dofs_primal = d.dofs.size();
    r.dofs_dual = d.constraints.num_multipliers;
    r.solve_seconds = ls.solution.solve_seconds;
    r.energy = 0.5 * problem.symmetry_factor *
               energy(domain, problem.materials, ls.solution.u, options.error_points, options.execution);
    if (options.reference_energy > 0.0)
        r.energy_error = std::sqrt(std::abs((options.reference_energy - r.energy) / options.reference_energy));
    else if (problem.exact)
        r.energy_error = std::sqrt(problem.symmetry_factor) *
                         energy_error(domain, problem.materials, ls.solution.u, problem.exact->strain,
                                      options.error_points, options.execution);
    else r.energy_error = std::numeric_limits<double>::quiet_NaN();
    r.observed_order = std::numeric_limits<double>::quiet_NaN();
    r.continuity = mortar::continuity_residual(d.constraints, ls.solution.u);
    if (options.multipliers && ls.solution.lambda.size() > 0)
        r.multiplier_sup = multiplier_sup_norm(d.constraints, ls.solution.lambda);
    return ls;
}

std::vector<LevelResult> solve_mortar_elasticity(const ElasticProblem& problem, const SolveOptions& options)
{
    if (options.levels < 1) throw ConfigError("at least one level is required");
    std::vector<LevelResult> out;
    for (int l = options.first_level; l < options.first_level + options.levels; ++l) {
        LevelResult r = solve_level(problem, l, options).result;
        if (!out.empty()) r.observed_order = std::log2(out.back().energy_error / r.energy_error);
        out.push_back(r);
    }
    return out;
}

void write_csv(std::ostream& out, const std::vector<LevelResult>& results, bool timings)
{
    const auto num = [](double v) {
        if (std::isnan(v)) return std::string();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "level,h,dofs_primal,dofs_dual,energy_error,observed_order,solve_seconds\r\n";
    for (const auto& r : results)
        out << r.level << ',' << num(r.h) << ',' << r.dofs_primal << ',' << r.dofs_dual << ',' << num(r.energy_error)
            << ',' << num(r.observed_order) << ',' << (timings ? num(r.solve_seconds) : std::string()) << "\r\n";
}

ElasticProblem plate_problem(const std::string& geometry_case, const geometry::BenchmarkParams& params,
                             MultiplierKind kind, double T, Material material)
{
    if (geometry_case.rfind("plate", 0) != 0) throw ConfigError("'" + geometry_case + "' is not a plate geometry");
    ElasticProblem pb;
    pb.domain = geometry::benchmark_geometry(geometry_case, params);
    pb.materials.assign(pb.domain.num_patches(), material);
    const KirschSolution exact(T, geometry::PlateSetup::hole_radius, material);
    pb.tractions["exact"] = [exact](const Eigen::Vector2d& x, const Eigen::Vector2d& n) {
        return exact.traction(x, n);
    };
    pb.displacements["exact"] = [exact](const Eigen::Vector2d& x) { return exact.displacement(x); };
    pb.exact = ExactSolution{[exact](const Eigen::Vector2d& x) { return exact.displacement(x); },
                             [exact](const Eigen::Vector2d& x) { return exact.strain(x); }};
    pb.multiplier = kind;
    return pb;
}

ElasticProblem annulus_problem(const geometry::BenchmarkParams& params, MultiplierKind kind, Plane plane)
{
    ElasticProblem pb;
    pb.domain = geometry::benchmark_geometry("bimaterial_annulus", params);
    for (const auto& region : pb.domain.regions)
        pb.materials.push_back(region == "stiff" ? Material{1e5, 0.3, plane} : Material{1e3, 0.3, plane});
    pb.tractions["pressure"] = [](const Eigen::Vector2d&, const Eigen::Vector2d& n) { return (-n).eval(); };
    pb.multiplier = kind;
    pb.symmetry_factor = 4.0;
    return pb;
}

}  // namespace dualmortar::elasticity
