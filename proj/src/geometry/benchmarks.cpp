#include "dualmortar/geometry/benchmarks.hpp"

#include <cmath>
#include <numbers>

#include "dualmortar/common/errors.hpp"

namespace dualmortar::geometry {

namespace {

using Eigen::Vector2d;

// Conic rows: one quadratic rational arc per row, rows stacked along v.
struct Rows {
    std::vector<std::array<Vector2d, 3>> points;
    std::array<double, 3> weights{1.0, 1.0, 1.0};
};

NurbsPatch rows_patch(const Rows& rows)
{
    std::vector<Vector2d> c;
    std::vector<double> w;
    for (const auto& r : rows.points)
        for (int i = 0; i < 3; ++i) {
            c.push_back(r[i]);
            w.push_back(rows.weights[i]);
        }
    return bezier_patch(2, static_cast<int>(rows.points.size()) - 1, std::move(c), std::move(w));
}

std::array<Vector2d, 3> blend(const std::array<Vector2d, 3>& a, const std::array<Vector2d, 3>& b, double s)
{
    return {(1 - s) * a[0] + s * b[0], (1 - s) * a[1] + s * b[1], (1 - s) * a[2] + s * b[2]};
}

NurbsPatch finish(const NurbsPatch& bezier, int p, int nu, int nv)
{
    return bezier.elevated_bezier(p, p).subdivided(nu, nv);
}

MultipatchDomain plate(const std::string& name, const BenchmarkParams& prm)
{
    const double r = PlateSetup::hole_radius, l = PlateSetup::half_width;
    const double t = std::tan(std::numbers::pi / 8.0);
    const double c = r * std::numbers::sqrt2 / 2.0;
    const double w = std::cos(std::numbers::pi / 8.0);

    // Angle decreases along u so that (u, v) = (angle, radius) is positively oriented.
    const std::array<Vector2d, 3> hole0{Vector2d(c, c), Vector2d(r, r * t), Vector2d(r, 0)};
    const std::array<Vector2d, 3> outer0{Vector2d(l, l), Vector2d(l, l / 2), Vector2d(l, 0)};
    const std::array<Vector2d, 3> hole1{Vector2d(0, r), Vector2d(r * t, r), Vector2d(c, c)};
    const std::array<Vector2d, 3> outer1{Vector2d(0, l), Vector2d(l / 2, l), Vector2d(l, l)};

    Rows lower, upper;
    lower.weights = upper.weights = {1.0, w, 1.0};
    if (name == "plate_curved") {
        const Vector2d shift = prm.bulge * Vector2d(1.0, -1.0) / std::numbers::sqrt2;
        auto mid0 = blend(hole0, outer0, 0.5);
        auto mid1 = blend(hole1, outer1, 0.5);
        mid0[0] += shift;
        mid1[2] += shift;
        lower.points = {hole0, mid0, outer0};
        upper.points = {hole1, mid1, outer1};
    } else if (name == "plate_straight_nonmatching") {
        if (!(prm.stretch > 0.0 && prm.stretch < 1.0)) throw ConfigError("stretch must lie in (0, 1)");
        lower.points = {hole0, outer0};
        upper.points = {hole1, blend(hole1, outer1, prm.stretch), outer1};
    } else {
        lower.points = {hole0, outer0};
        upper.points = {hole1, outer1};
    }

    MultipatchDomain d;
    d.add_patch(finish(rows_patch(lower), prm.degree, prm.slave_elements, prm.slave_elements), "plate");
    d.add_patch(finish(rows_patch(upper), prm.degree, prm.master_elements, prm.master_elements), "plate");

    d.boundary(0, Face::east) = {BoundaryKind::dirichlet, {false, true}, "zero"};
    d.boundary(0, Face::north) = {BoundaryKind::neumann, {true, true}, "exact"};
    d.boundary(1, Face::west) = {BoundaryKind::dirichlet, {true, false}, "zero"};
    d.boundary(1, Face::north) = {BoundaryKind::neumann, {true, true}, "exact"};

    InterfaceSpec iface;
    iface.slave = {0, Face::west};
    iface.master = {1, Face::east};
    iface.weight = prm.weight;
    d.interfaces.push_back(iface);
    return d;
}

MultipatchDomain annulus(const BenchmarkParams& prm)
{
    using A = AnnulusSetup;
    const double w = std::numbers::sqrt2 / 2.0;
    const auto arc = [](double a, double b) {
        return std::array<Vector2d, 3>{Vector2d(0, b), Vector2d(a, b), Vector2d(a, 0)};
    };
    const auto region = [&](double a0, double b0, double a1, double b1) {
        Rows rows;
        rows.weights = {1.0, w, 1.0};
        rows.points = {arc(a0, b0), arc(a1, b1)};
        return rows_patch(rows);
    };
    const int p = prm.degree;

    MultipatchDomain d;
    d.add_patch(finish(region(A::inner_radius, A::inner_radius, A::a1, A::b1), p, 5, 3), "soft");
    d.add_patch(finish(region(A::a1, A::b1, A::a2, A::b2), p, 17, 1), "stiff");
    d.add_patch(finish(region(A::a2, A::b2, A::outer_radius, A::outer_radius), p, 6, 2), "soft");

    for (int k = 0; k < 3; ++k) {
        d.boundary(k, Face::west) = {BoundaryKind::dirichlet, {true, false}, "zero"};
        d.boundary(k, Face::east) = {BoundaryKind::dirichlet, {false, true}, "zero"};
    }
    d.boundary(0, Face::south) = {BoundaryKind::neumann, {true, true}, "pressure"};

    const FaceRef inner_master{0, Face::north}, inclusion_in{1, Face::south};
    const FaceRef inclusion_out{1, Face::north}, outer_master{2, Face::south};
    InterfaceSpec a, b;
    a.weight = b.weight = prm.weight;
    if (prm.inclusion_slave) {
        a.slave = inclusion_in;
        a.master = inner_master;
        b.slave = inclusion_out;
        b.master = outer_master;
    } else {
        a.slave = inner_master;
        a.master = inclusion_in;
        b.slave = outer_master;
        b.master = inclusion_out;
    }
    d.interfaces = {a, b};
    return d;
}

}  // namespace

NurbsPatch bezier_patch(int pu, int pv, std::vector<Eigen::Vector2d> control, std::vector<double> weights)
{
    return NurbsPatch(spline::SplineSpace1D(spline::KnotVector::uniform(pu, 1)),
                      spline::SplineSpace1D(spline::KnotVector::uniform(pv, 1)), std::move(control),
                      std::move(weights));
}

const std::vector<std::string>& benchmark_names()
{
    static const std::vector<std::string> names{"plate_straight_matching", "plate_straight_nonmatching",
                                                "plate_curved", "bimaterial_annulus"};
    return names;
}

MultipatchDomain benchmark_geometry(const std::string& name, const BenchmarkParams& params)
{
    if (std::find(benchmark_names().begin(), benchmark_names().end(), name) == benchmark_names().end())
        throw ConfigError("unknown benchmark geometry '" + name + "'");
    if (params.degree < 2 || params.degree > 4)
        throw ConfigError("benchmark geometries need degree 2..4 (exact conics), got " + std::to_string(params.degree));
    if (params.slave_elements < 1 || params.master_elements < 1) throw ConfigError("element counts must be positive");

    MultipatchDomain d = name == "bimaterial_annulus" ? annulus(params) : plate(name, params);
    apply_crosspoints(d);
    d.validate();
    return d;
}

}  // namespace dualmortar::geometry
