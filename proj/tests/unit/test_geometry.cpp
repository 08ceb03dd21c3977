#include <cmath>
#include <random>

#include "doctest.h"
#include "dualmortar/common/errors.hpp"
#include "dualmortar/geometry/benchmarks.hpp"
#include "dualmortar/geometry/domain_io.hpp"

using namespace dualmortar;
using namespace dualmortar::geometry;
using Eigen::Vector2d;

namespace {

NurbsPatch square(double x0, double y0, double x1, double y1)
{
    return bezier_patch(1, 1, {Vector2d(x0, y0), Vector2d(x1, y0), Vector2d(x0, y1), Vector2d(x1, y1)}, {1, 1, 1, 1});
}

// Three unit squares: P0 at the origin, P1 to its right, P2 above it.
MultipatchDomain three_squares()
{
    MultipatchDomain d;
    d.add_patch(square(0, 0, 1, 1));
    d.add_patch(square(1, 0, 2, 1));
    d.add_patch(square(0, 1, 1, 2));
    InterfaceSpec a, b;
    a.slave = {0, Face::east};
    a.master = {1, Face::west};
    b.slave = {0, Face::north};
    b.master = {2, Face::south};
    d.interfaces = {a, b};
    return d;
}

}  // namespace

TEST_CASE("plate benchmarks")
{
    for (const std::string name : {"plate_straight_matching", "plate_straight_nonmatching", "plate_curved"})
        for (int p : {2, 3}) {
            BenchmarkParams prm;
            prm.degree = p;
            const MultipatchDomain d = benchmark_geometry(name, prm);
            REQUIRE(d.num_patches() == 2);
            REQUIRE(d.interfaces.size() == 1);
            CHECK(d.patches[0].face_space(Face::west).num_elements() == 3);
            CHECK(d.patches[1].face_space(Face::east).num_elements() == 2);
            // endpoints lie on traction-free or traction boundaries
            for (int c = 0; c < 2; ++c) CHECK(d.interfaces[0].crosspoints[c] == dual::CrosspointFlags{});
            for (int k = 0; k <= 20; ++k) {
                const double t = k / 20.0;
                CHECK(d.face_point({0, Face::south}, t).norm() == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(d.face_point({1, Face::south}, t).norm() == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(d.face_point({0, Face::north}, t).x() == doctest::Approx(4.0).epsilon(1e-14));
                CHECK(d.face_point({1, Face::north}, t).y() == doctest::Approx(4.0).epsilon(1e-14));
                CHECK(std::abs(d.face_point({0, Face::east}, t).y()) < 1e-14);
                CHECK(std::abs(d.face_point({1, Face::west}, t).x()) < 1e-14);
            }
        }
    CHECK_THROWS_AS(benchmark_geometry("plate_square"), ConfigError);
    BenchmarkParams linear;
    linear.degree = 1;
    CHECK_THROWS_AS(benchmark_geometry("plate_curved", linear), ConfigError);
}

TEST_CASE("interface pull-back")
{
    const MultipatchDomain a = benchmark_geometry("plate_straight_matching");
    for (int k = 0; k <= 10; ++k)
        CHECK(pullback_to_master(a, a.interfaces[0], k / 10.0) == doctest::Approx(k / 10.0).epsilon(1e-12));

    for (const std::string name : {"plate_straight_nonmatching", "plate_curved", "bimaterial_annulus"}) {
        const MultipatchDomain d = benchmark_geometry(name);
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (const auto& iface : d.interfaces) {
            CHECK(pullback_to_master(d, iface, 0.0) == 0.0);
            CHECK(pullback_to_master(d, iface, 1.0) == 1.0);
            double prev = -1.0;
            std::vector<double> ts(50);
            for (double& t : ts) t = u(rng);
            std::sort(ts.begin(), ts.end());
            for (double ts_ : ts) {
                const double tm = pullback_to_master(d, iface, ts_);
                CHECK((d.face_point(iface.master, tm) - d.face_point(iface.slave, ts_)).norm() <= d.tolerance());
                CHECK(tm > prev);
                prev = tm;
                CHECK(pullback_to_slave(d, iface, tm) == doctest::Approx(ts_).epsilon(1e-9));
            }
        }
    }
    // the stretched master parametrization is a genuine reparametrization
    const MultipatchDomain b = benchmark_geometry("plate_straight_nonmatching");
    CHECK(std::abs(pullback_to_master(b, b.interfaces[0], 0.5) - 0.5) > 0.05);
}

TEST_CASE("bimaterial annulus")
{
    using A = AnnulusSetup;
    CHECK(A::a1 == doctest::Approx(0.95975));
    CHECK(A::b1 == doctest::Approx(0.7932).epsilon(1e-4));
    CHECK(A::a2 == doctest::Approx(0.96525));
    CHECK(A::b2 == doctest::Approx(0.7977).epsilon(1e-4));

    const MultipatchDomain d = benchmark_geometry("bimaterial_annulus");
    REQUIRE(d.num_patches() == 3);
    CHECK(d.patches[0].space(0).num_elements() == 5);
    CHECK(d.patches[0].space(1).num_elements() == 3);
    CHECK(d.patches[1].space(0).num_elements() == 17);
    CHECK(d.patches[1].space(1).num_elements() == 1);
    CHECK(d.patches[2].space(0).num_elements() == 6);
    CHECK(d.patches[2].space(1).num_elements() == 2);
    CHECK(d.regions == std::vector<std::string>{"soft", "stiff", "soft"});
    for (int k = 0; k <= 20; ++k) {
        const double t = k / 20.0;
        const Vector2d e1 = d.face_point({1, Face::south}, t);
        const Vector2d e2 = d.face_point({1, Face::north}, t);
        CHECK(std::pow(e1.x() / A::a1, 2) + std::pow(e1.y() / A::b1, 2) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::pow(e2.x() / A::a2, 2) + std::pow(e2.y() / A::b2, 2) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.face_point({0, Face::south}, t).norm() == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(d.face_point({2, Face::north}, t).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    // endpoints on the symmetry lines: x fixed at the start (y axis), y fixed at the end (x axis)
    for (const auto& iface : d.interfaces) {
        CHECK(iface.slave.patch == 1);
        CHECK(iface.crosspoints[0] == dual::CrosspointFlags{true, false});
        CHECK(iface.crosspoints[1] == dual::CrosspointFlags{false, true});
    }
    BenchmarkParams coarse;
    coarse.inclusion_slave = false;
    const MultipatchDomain c = benchmark_geometry("bimaterial_annulus", coarse);
    CHECK(c.interfaces[0].slave.patch == 0);
    CHECK(c.interfaces[1].slave.patch == 2);
}

TEST_CASE("crosspoint detection")
{
    MultipatchDomain d = three_squares();
    auto flags = detect_crosspoints(d);
    for (int c = 0; c < 2; ++c) {
        CHECK(flags[0][c] == dual::CrosspointFlags{false, true});
        CHECK(flags[1][c] == dual::CrosspointFlags{false, true});
    }
    // symmetric in the interface ordering
    std::swap(d.interfaces[0], d.interfaces[1]);
    const auto swapped = detect_crosspoints(d);
    CHECK(swapped[0] == flags[1]);
    CHECK(swapped[1] == flags[0]);

    // endpoint on a Dirichlet face
    MultipatchDomain e = three_squares();
    e.interfaces.pop_back();
    e.boundary(0, Face::south) = {BoundaryKind::dirichlet, {true, true}, "zero"};
    const auto f = detect_crosspoints(e);
    for (int c = 0; c < 2; ++c) CHECK(f[0][c] == dual::CrosspointFlags{true, false});
    e.boundary(0, Face::south).components = {true, false};
    const auto g = detect_crosspoints(e);
    CHECK(g[0][0] == dual::CrosspointFlags{true, false});
    CHECK(g[0][1] == dual::CrosspointFlags{false, false});
}

TEST_CASE("refinement preserves the geometry")
{
    const MultipatchDomain d = benchmark_geometry("plate_curved");
    const MultipatchDomain r = d.refined(2);
    CHECK(r.patches[0].space(1).num_elements() == 12);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 2; ++k)
        for (int s = 0; s < 100; ++s) {
            const Vector2d z(u(rng), u(rng));
            CHECK((d.patches[k].evaluate(z).x - r.patches[k].evaluate(z).x).norm() < 1e-12);
        }
}

TEST_CASE("invalid patches are rejected")
{
    MultipatchDomain d;
    // folded: two control points swapped
    d.add_patch(bezier_patch(1, 1, {Vector2d(0, 0), Vector2d(1, 0), Vector2d(1, 1), Vector2d(0, 1)}, {1, 1, 1, 1}));
    CHECK_THROWS_AS(d.validate(), GeometryError);

    MultipatchDomain gap = three_squares();
    gap.patches[1] = square(1.1, 0, 2, 1);
    CHECK_THROWS_AS(gap.validate(), GeometryError);
}

TEST_CASE("domain json round trip")
{
    const MultipatchDomain d = benchmark_geometry("bimaterial_annulus");
    const auto j = to_json(d);
    const MultipatchDomain e = domain_from_json(nlohmann::json::parse(j.dump()));
    REQUIRE(e.num_patches() == 3);
    CHECK(to_json(e) == j);
    for (int k = 0; k < 3; ++k) {
        CHECK(e.patches[k].controls() == d.patches[k].controls());
        CHECK(e.patches[k].weights() == d.patches[k].weights());
    }
    // flags are detected when the file omits them
    auto stripped = j;
    for (auto& i : stripped["interfaces"]) i.erase("crosspoints");
    const MultipatchDomain f = domain_from_json(stripped);
    for (std::size_t l = 0; l < 2; ++l)
        for (int c = 0; c < 2; ++c) CHECK(f.interfaces[l].crosspoints[c] == d.interfaces[l].crosspoints[c]);

    CHECK_THROWS_AS(domain_from_json(nlohmann::json::parse(R"({"patches": [{"degree": [1]}]})")), ConfigError);
}
