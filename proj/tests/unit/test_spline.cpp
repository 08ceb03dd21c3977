#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dualmortar/common/errors.hpp"
#include "dualmortar/common/quadrature.hpp"
#include "dualmortar/spline/nurbs_patch.hpp"
#include "dualmortar/spline/spline_space.hpp"
#include "dualmortar/spline/tensor_space.hpp"
#include "test_support.hpp"

using namespace dualmortar;
using namespace dualmortar::spline;

namespace {

std::vector<double> knots_of(const KnotVector& kv) { return {kv.knots().begin(), kv.knots().end()}; }

// Quarter annulus with radii r0 < r1: u runs along the arc, v radially.
NurbsPatch quarter_annulus(double r0, double r1)
{
    const double w = std::numbers::sqrt2 / 2.0;
    std::vector<Eigen::Vector2d> c;
    std::vector<double> wt;
    for (double r : {r0, r1}) {
        c.emplace_back(r, 0.0);
        c.emplace_back(r, r);
        c.emplace_back(0.0, r);
        wt.insert(wt.end(), {1.0, w, 1.0});
    }
    return NurbsPatch(SplineSpace1D(KnotVector::uniform(2, 1)), SplineSpace1D(KnotVector::uniform(1, 1)), c, wt);
}

}  // namespace

TEST_CASE("gauss-legendre integrates polynomials exactly")
{
    for (int n = 1; n <= 8; ++n) {
        const auto rule = gauss_legendre(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0.0;
            for (int q = 0; q < n; ++q) s += rule.weights[q] * std::pow(rule.points[q], k);
            CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
        }
    }
}

TEST_CASE("knot vector validation")
{
    CHECK_THROWS_AS(KnotVector(2, {0, 0, 1, 1}), DomainError);              // too short
    CHECK_THROWS_AS(KnotVector(1, {0, 0, 0, 1, 1}), DomainError);           // end multiplicity 3
    CHECK_THROWS_AS(KnotVector(2, {0, 0, 0, .5, .5, .5, 1, 1, 1}), DomainError);  // interior mult p+1
    CHECK_THROWS_AS(KnotVector(1, {0, 0, .6, .5, 1, 1}), DomainError);      // decreasing
    const KnotVector kv(2, {0, 0, 0, .25, .5, .5, 1, 1, 1});
    CHECK(kv.num_basis() == 6);
    CHECK(kv.num_elements() == 3);
    CHECK(kv.multiplicities()[2] == 2);
    CHECK(kv.support(0) == std::pair{0, 0});
    CHECK(kv.support(2) == std::pair{0, 1});
    CHECK(kv.support(3) == std::pair{1, 2});
    CHECK(kv.element_of(0.25) == 1);  // right-continuous
    CHECK(kv.element_of(1.0) == 2);   // left-continuous at the upper end
}

TEST_CASE("eval_bspline_basis examples")
{
    SUBCASE("hat functions")
    {
        const SplineSpace1D s(KnotVector(1, {0, 0, 1, 1}));
        const auto b = s.evaluate(0.25);
        CHECK(b.first == 0);
        CHECK(b.values[0] == doctest::Approx(0.75));
        CHECK(b.values[1] == doctest::Approx(0.25));
    }
    SUBCASE("quadratic Bernstein at the midpoint")
    {
        const SplineSpace1D s(KnotVector(2, {0, 0, 0, 1, 1, 1}));
        const auto b = s.evaluate(0.5);
        CHECK(b.values[0] == doctest::Approx(0.25));
        CHECK(b.values[1] == doctest::Approx(0.5));
        CHECK(b.values[2] == doctest::Approx(0.25));
    }
    SUBCASE("matches recursive Cox-de Boor")
    {
        const KnotVector kv(2, {0, 0, 0, 0.5, 1, 1, 1});
        const SplineSpace1D s(kv);
        const auto b = s.evaluate(0.25);
        double sum = 0.0;
        for (int r = 0; r <= 2; ++r) {
            CHECK(b.values[r] == doctest::Approx(testsupport::cox_de_boor(knots_of(kv), b.first + r, 2, 0.25)).epsilon(1e-14));
            sum += b.values[r];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("outside the knot range")
    {
        const SplineSpace1D s(KnotVector::uniform(2, 3));
        CHECK_THROWS_AS(s.evaluate(1.0 + 1e-9), DomainError);
        CHECK_THROWS_AS(s.evaluate(-1e-9), DomainError);
    }
}

TEST_CASE("basis properties on random knot vectors")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int p = 1 + trial % 4;
        const KnotVector kv = testsupport::random_knots(rng, p, 1 + trial % 7, p);
        const SplineSpace1D s(kv);
        const auto U = knots_of(kv);
        for (int k = 0; k < 25; ++k) {
            const double x = k == 0 ? 1.0 : unif(rng);
            const auto b = s.evaluate(x);
            double sum = 0.0;
            for (int r = 0; r <= p; ++r) {
                CHECK(b.values[r] >= -1e-15);
                CHECK(b.values[r] == doctest::Approx(testsupport::cox_de_boor(U, b.first + r, p, x)).epsilon(1e-12));
                sum += b.values[r];
            }
            CHECK(std::abs(sum - 1.0) < 1e-13);
            // local support: inactive functions vanish
            for (int i = 0; i < s.num_basis(); ++i) {
                if (i >= b.first && i <= b.first + p) continue;
                CHECK(testsupport::cox_de_boor(U, i, p, x) == 0.0);
            }
        }
        // first derivative against central differences
        Eigen::MatrixXd d;
        for (int e = 0; e < s.num_elements(); ++e) {
            const double a = kv.breakpoint(e), c = kv.breakpoint(e + 1);
            const double x = 0.5 * (a + c), h = 1e-6 * (c - a);
            const int first = s.evaluate_on_element(e, x, 1, d);
            Eigen::MatrixXd dp, dm;
            s.evaluate_on_element(e, x + h, 0, dp);
            s.evaluate_on_element(e, x - h, 0, dm);
            for (int r = 0; r <= p; ++r) {
                const double fd = (dp(0, r) - dm(0, r)) / (2 * h);
                CHECK(d(1, r) == doctest::Approx(fd).epsilon(1e-6).scale(1.0 / (c - a)));
            }
            (void)first;
        }
    }
}

TEST_CASE("element_bernstein_coeffs")
{
    SUBCASE("single element is the identity")
    {
        for (int p = 1; p <= 4; ++p) {
            const SplineSpace1D s(KnotVector::uniform(p, 1));
            CHECK((s.extraction(0) - Eigen::MatrixXd::Identity(p + 1, p + 1)).norm() < 1e-14);
        }
    }
    SUBCASE("p=1 two elements")
    {
        const SplineSpace1D s(KnotVector(1, {0, 0, .5, 1, 1}));
        // middle hat: row 1 on element 0, row 0 on element 1
        CHECK(s.extraction(0)(1, 0) == doctest::Approx(0.0));
        CHECK(s.extraction(0)(1, 1) == doctest::Approx(1.0));
        CHECK(s.extraction(1)(0, 0) == doctest::Approx(1.0));
        CHECK(s.extraction(1)(0, 1) == doctest::Approx(0.0));
    }
    SUBCASE("random p=3 reconstruction")
    {
        std::mt19937_64 rng(7);
        const KnotVector kv = testsupport::random_knots(rng, 3, 6, 3);
        const SplineSpace1D s(kv);
        const auto U = knots_of(kv);
        std::vector<double> bern(4);
        double worst = 0.0;
        for (int e = 0; e < s.num_elements(); ++e) {
            const double a = kv.breakpoint(e), b = kv.breakpoint(e + 1);
            for (int k = 0; k < 9; ++k) {
                const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * (2 * k + 1) / 18.0));
                bernstein_values(3, t, bern.data());
                for (int r = 0; r <= 3; ++r) {
                    double v = 0.0;
                    for (int c = 0; c <= 3; ++c) v += s.extraction(e)(r, c) * bern[c];
                    const double ref = testsupport::cox_de_boor(U, kv.first_active(e) + r, 3, a + t * (b - a));
                    worst = std::max(worst, std::abs(v - ref));
                }
            }
        }
        CHECK(worst <= 1e-13);
    }
}

TEST_CASE("refinement nesting: coarse functions lie in the refined space")
{
    std::mt19937_64 rng(3);
    for (int p = 1; p <= 3; ++p) {
        const KnotVector coarse = testsupport::random_knots(rng, p, 4, p);
        const KnotVector fine = coarse.refined(1);
        CHECK(fine.num_elements() == 2 * coarse.num_elements());
        // original knots preserved with multiplicities
        for (std::size_t b = 1; b + 1 < coarse.breakpoints().size(); ++b) {
            const auto it = std::find(fine.breakpoints().begin(), fine.breakpoints().end(), coarse.breakpoints()[b]);
            REQUIRE(it != fine.breakpoints().end());
            CHECK(fine.multiplicities()[it - fine.breakpoints().begin()] == coarse.multiplicities()[b]);
        }
        // least squares fit of each coarse function by fine functions at sample points
        const SplineSpace1D sc(coarse), sf(fine);
        const int m = 20 * sf.num_basis();
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, sf.num_basis());
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, sc.num_basis());
        for (int k = 0; k < m; ++k) {
            const double x = (k + 0.5) / m;
            const auto bf = sf.evaluate(x);
            const auto bc = sc.evaluate(x);
            for (int r = 0; r <= p; ++r) {
                A(k, bf.first + r) = bf.values[r];
                B(k, bc.first + r) = bc.values[r];
            }
        }
        const Eigen::MatrixXd X = A.colPivHouseholderQr().solve(B);
        CHECK((A * X - B).cwiseAbs().maxCoeff() <= 1e-11);
    }
    CHECK(KnotVector(1, {0, 0, 1, 1}).refined(1) == KnotVector(1, {0, 0, 0.5, 1, 1}));
    CHECK(KnotVector(2, {0, 0, 0, .3, 1, 1, 1}).refined(0) == KnotVector(2, {0, 0, 0, .3, 1, 1, 1}));
}

TEST_CASE("tensor spline space")
{
    const TensorSplineSpace t({SplineSpace1D(KnotVector::uniform(2, 3)), SplineSpace1D(KnotVector::uniform(1, 2))});
    CHECK(t.size() == 5 * 3);
    const std::vector<int> mi{3, 2};
    CHECK(t.multi_index(t.flat_index(mi)) == mi);
    const double z[2] = {0.4, 0.7};
    const auto act = t.evaluate(z);
    double sum = 0.0;
    for (double v : act.values) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(act.values.size() == 6);
    // product structure
    const auto bu = t.direction(0).evaluate(0.4);
    const auto bv = t.direction(1).evaluate(0.7);
    for (std::size_t a = 0; a < act.indices.size(); ++a) {
        const auto m = t.multi_index(act.indices[a]);
        CHECK(act.values[a] == doctest::Approx(bu.values[m[0] - bu.first] * bv.values[m[1] - bv.first]));
    }
}

TEST_CASE("eval_nurbs")
{
    SUBCASE("affine map from Greville points")
    {
        const KnotVector ku(2, {0, 0, 0, .4, 1, 1, 1}), kv(3, {0, 0, 0, 0, .5, 1, 1, 1, 1});
        const SplineSpace1D su(ku), sv(kv);
        Eigen::Matrix2d A;
        A << 2.0, 0.5, -0.3, 1.5;
        const Eigen::Vector2d b(1.0, -2.0);
        std::vector<Eigen::Vector2d> c;
        auto greville = [](const KnotVector& k, int i) {
            double g = 0.0;
            for (int j = 1; j <= k.degree(); ++j) g += k.knot(i + j);
            return g / k.degree();
        };
        for (int j = 0; j < sv.num_basis(); ++j)
            for (int i = 0; i < su.num_basis(); ++i) c.push_back(A * Eigen::Vector2d(greville(ku, i), greville(kv, j)) + b);
        const NurbsPatch patch(su, sv, c, std::vector<double>(c.size(), 1.0));
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int k = 0; k < 50; ++k) {
            const Eigen::Vector2d z(unif(rng), unif(rng));
            const auto pt = patch.evaluate(z);
            CHECK((pt.x - (A * z + b)).norm() < 1e-13);
            CHECK((pt.jacobian - A).norm() < 1e-12);
            CHECK(pt.det == doctest::Approx(A.determinant()));
        }
    }
    SUBCASE("identity patch has identity Jacobian")
    {
        const SplineSpace1D s(KnotVector::uniform(1, 1));
        const NurbsPatch id(s, s, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {1, 1, 1, 1});
        const auto pt = id.evaluate({0.3, 0.8});
        CHECK((pt.jacobian - Eigen::Matrix2d::Identity()).norm() < 1e-15);
        CHECK((pt.x - Eigen::Vector2d(0.3, 0.8)).norm() < 1e-15);
    }
    SUBCASE("quarter annulus lies on exact circles")
    {
        const NurbsPatch patch = quarter_annulus(1.0, 2.5);
        for (int k = 0; k <= 20; ++k) {
            const double u = k / 20.0;
            CHECK(std::abs(patch.evaluate({u, 0.0}).x.norm() - 1.0) < 1e-12);
            CHECK(std::abs(patch.evaluate({u, 1.0}).x.norm() - 2.5) < 1e-12);
        }
    }
    SUBCASE("singular Jacobian is reported")
    {
        const SplineSpace1D s(KnotVector::uniform(1, 1));
        const NurbsPatch degenerate(s, s, {{0, 0}, {1, 0}, {0, 0}, {1, 0}}, {1, 1, 1, 1});
        CHECK_THROWS_AS(degenerate.evaluate({0.5, 0.5}), GeometryError);
    }
    SUBCASE("unit weights reproduce the B-spline map")
    {
        const SplineSpace1D su(KnotVector::uniform(2, 2)), sv(KnotVector::uniform(2, 1));
        std::vector<Eigen::Vector2d> c;
        std::mt19937_64 rng(5);
        std::normal_distribution<double> jitter(0.0, 0.05);
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 4; ++i) c.emplace_back(i / 3.0 + jitter(rng), j / 2.0 + jitter(rng));
        const NurbsPatch patch(su, sv, c, std::vector<double>(c.size(), 1.0));
        const TensorSplineSpace t({su, sv});
        const double z[2] = {0.37, 0.61};
        const auto act = t.evaluate(z);
        Eigen::Vector2d x = Eigen::Vector2d::Zero();
        for (std::size_t a = 0; a < act.indices.size(); ++a) x += act.values[a] * c[act.indices[a]];
        CHECK((patch.evaluate({z[0], z[1]}).x - x).norm() < 1e-14);
    }
}

TEST_CASE("h_refine_uniform on patches preserves the geometry map")
{
    const NurbsPatch coarse = quarter_annulus(1.0, 2.0).elevated_bezier(3, 2);
    const NurbsPatch same = coarse.refined(0);
    CHECK(same.size() == coarse.size());
    const NurbsPatch fine = coarse.refined(2);
    const NurbsPatch odd = coarse.subdivided(3, 5);
    CHECK(fine.space(0).num_elements() == 4);
    CHECK(odd.space(1).num_elements() == 5);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const Eigen::Vector2d z(unif(rng), unif(rng));
        const auto x0 = coarse.evaluate(z).x;
        worst = std::max({worst, (fine.evaluate(z).x - x0).norm(), (odd.evaluate(z).x - x0).norm(),
                          (same.evaluate(z).x - x0).norm()});
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("face helpers")
{
    const NurbsPatch patch = quarter_annulus(1.0, 2.0).subdivided(2, 3);
    const auto south = patch.face_indices(Face::south);
    CHECK(static_cast<int>(south.size()) == patch.num_u());
    CHECK((patch.control(south.front()) - Eigen::Vector2d(1.0, 0.0)).norm() < 1e-14);
    const auto east = patch.face_indices(Face::east);
    CHECK(static_cast<int>(east.size()) == patch.num_v());
    CHECK(NurbsPatch::face_direction(Face::east) == 1);
    CHECK(face_from_string("north") == Face::north);
    CHECK_THROWS_AS(face_from_string("up"), ConfigError);
}
