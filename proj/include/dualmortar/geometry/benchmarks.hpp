#pragma once

#include <string>
#include <vector>

#include "dualmortar/geometry/domain.hpp"

namespace dualmortar::geometry {

/// Plate with a circular hole, quarter model: hole radius 1, plate [0, 4]^2. Patch 0 lies below
/// the diagonal, patch 1 above it; u runs clockwise in angle and v from the hole outward.
struct PlateSetup {
    static constexpr double hole_radius = 1.0;
    static constexpr double half_width = 4.0;
};

/// Bimaterial annulus with a thin elliptic inclusion, quarter model. Patches inner, inclusion,
/// outer; u runs from the y axis to the x axis and v outward.
struct AnnulusSetup {
    static constexpr double inner_radius = 0.75;
    static constexpr double outer_radius = 1.0;
    static constexpr double thickness = 0.01;
    static constexpr double a1 = 0.55 * (inner_radius + outer_radius - thickness / 2);
    static constexpr double b1 = 0.5 * (inner_radius + outer_radius - thickness / 2) / 1.1;
    static constexpr double a2 = 0.55 * (inner_radius + outer_radius + thickness / 2);
    static constexpr double b2 = 0.5 * (inner_radius + outer_radius + thickness / 2) / 1.1;
};

struct BenchmarkParams {
    int degree = 2;
    /// Plate: elements per direction on the slave (lower) and master (upper) patch.
    int slave_elements = 3;
    int master_elements = 2;
    /// Annulus: the thin inclusion is the slave side of both interfaces.
    bool inclusion_slave = true;
    /// plate_straight_nonmatching: position of the master's middle control row (fraction of the radial edge).
    double stretch = 0.3;
    /// plate_curved: offset of the interface's middle control point.
    double bulge = 0.5;
    dual::WeightMode weight = dual::WeightMode::physical;
};

const std::vector<std::string>& benchmark_names();

/// Builds a named benchmark domain: plate_straight_matching, plate_straight_nonmatching,
/// plate_curved or bimaterial_annulus. Crosspoints are detected and the domain validated.
MultipatchDomain benchmark_geometry(const std::string& name, const BenchmarkParams& params = {});

/// Single-element NURBS patch of degrees (pu, pv); control points in flat order i + (pu+1) j.
NurbsPatch bezier_patch(int pu, int pv, std::vector<Eigen::Vector2d> control, std::vector<double> weights);

}  // namespace dualmortar::geometry
