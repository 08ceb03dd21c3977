#pragma once

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualmortar/study/config.hpp"

namespace dualmortar::study {

/// Outcome of a driver: the JSON report (also written to the output directory) and whether
/// every checked property held.
struct StudyResult {
    nlohmann::json report;
    bool ok = true;
};

/// Random open knot vector on [0, 1] with element sizes in a 1:3 range and interior
/// multiplicities in 1..max_mult.
spline::KnotVector random_open_knots(std::mt19937_64& rng, int p, int elements, int max_mult);

/// Dual basis property suite over random spaces: biorthogonality, support bounds, polynomial
/// reproduction of the quasi-interpolant and tensor biorthogonality. Writes verify_basis.json.
StudyResult verify_basis(const StudyConfig& c);

/// The elasticity problem of the configured geometry for one mesh ratio and multiplier kind.
elasticity::ElasticProblem make_problem(const StudyConfig& c, const std::array<int, 2>& ratio,
                                        mortar::MultiplierKind kind);
elasticity::SolveOptions solve_options(const StudyConfig& c);

/// Convergence table per ratio and kind (CSV each) and convergence.json with observed orders
/// and optimal/standard error ratios. Geometries without an exact solution use the energy
/// measure against a reference energy computed `reference_levels` refinements further.
StudyResult convergence(const StudyConfig& c);

/// Saddle-point and condensed systems of every kind at `level` for the first ratio:
/// sizes, nnz, fill and bandwidth in sparsity.json, optionally Matrix Market exports.
StudyResult sparsity(const StudyConfig& c);

/// File stem used for one convergence run, e.g. plate_straight_matching_p2_3x2_optimal.
std::string run_name(const StudyConfig& c, const std::array<int, 2>& ratio, mortar::MultiplierKind kind);

}  // namespace dualmortar::study
