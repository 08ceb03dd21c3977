// Acceptance gate: runs every criterion and prints one PASS/FAIL line per criterion.
//
// Basis criteria use oracles of their own: B-splines from the Cox-de Boor recursion and
// integrals from a Gauss rule computed here, so only the dual functions come from the library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "domains.hpp"
#include "dualmortar/dual/dual_basis.hpp"
#include "dualmortar/dual/tensor_dual.hpp"
#include "dualmortar/elasticity/problem.hpp"
#include "dualmortar/study/drivers.hpp"
#include "test_support.hpp"

using namespace dualmortar;
using elasticity::MultiplierKind;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Gauss-Legendre nodes and weights on [0, 1] by Newton iteration on P_n.
struct Gauss {
    std::vector<double> x, w;
    explicit Gauss(int n)
    {
        for (int i = 0; i < n; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5)), dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                if (n == 1) p1 = t, p0 = 1.0;
                dp = n * (t * p1 - p0) / (t * t - 1.0);
                const double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            x.push_back(0.5 * (1.0 - t));
            w.push_back(1.0 / ((1.0 - t * t) * dp * dp));
        }
    }
};

std::vector<double> knots_of(const spline::KnotVector& kv) { return {kv.knots().begin(), kv.knots().end()}; }

/// A randomized 1D space of the biorthogonality suite with its weight.
struct SuiteSpace {
    spline::KnotVector kv;
    dual::CrosspointFlags flags;
    std::function<double(double)> rho;
    bool weighted = false;
};

std::vector<SuiteSpace> suite(int p, int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-0.3, 0.3);
    std::vector<SuiteSpace> out;
    for (int s = 0; s < count; ++s) {
        const int ne = 1 + static_cast<int>(rng() % 30);
        SuiteSpace sp{testsupport::random_knots(rng, p, ne, p), {s % 4 == 1 || s % 4 == 3, s % 4 >= 2}, nullptr, false};
        if (sp.kv.num_basis() < p + 2) sp.flags = {};
        // quadratic weight: integrands stay polynomial, so both quadratures are exact
        const double a = coef(rng), b = coef(rng);
        sp.weighted = s % 2 == 1;
        sp.rho = sp.weighted ? std::function<double(double)>([a, b](double x) { return 1.0 + a * x + b * x * x; })
                             : std::function<double(double)>([](double) { return 1.0; });
        out.push_back(std::move(sp));
    }
    return out;
}

dual::DualBasis build(const SuiteSpace& s, dual::DualKind kind)
{
    const auto ip = s.weighted ? dual::WeightedInnerProduct::physical(s.rho) : dual::WeightedInnerProduct::parametric();
    return dual::make_dual_basis(spline::SplineSpace1D(s.kv), s.flags, kind, ip);
}

/// Oracle Gram G(a, b) = int B_{retained a} psi_b rho.
Eigen::MatrixXd oracle_gram(const SuiteSpace& s, const dual::DualBasis& d)
{
    const auto U = knots_of(s.kv);
    const int p = s.kv.degree(), n = d.size();
    const Gauss g(p + 3);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> psi(n);
    for (int e = 0; e < s.kv.num_elements(); ++e) {
        const double a = s.kv.breakpoint(e), h = s.kv.breakpoint(e + 1) - a;
        for (std::size_t q = 0; q < g.x.size(); ++q) {
            const double x = a + h * g.x[q], w = h * g.w[q] * s.rho(x);
            for (int b = 0; b < n; ++b) psi[b] = d.evaluate(b, x);
            for (int r = 0; r < n; ++r) {
                const double B = testsupport::cox_de_boor(U, d.retained[r], p, x);
                if (B == 0.0) continue;
                for (int b = 0; b < n; ++b) G(r, b) += w * B * psi[b];
            }
        }
    }
    return G;
}

double biorthogonality_defect(const Eigen::MatrixXd& G, const dual::DualBasis& d)
{
    const double cmax = *std::max_element(d.scale.begin(), d.scale.end());
    double worst = 0.0;
    for (int r = 0; r < G.rows(); ++r)
        for (int b = 0; b < G.cols(); ++b) worst = std::max(worst, std::abs(G(r, b) - (r == b ? d.scale[r] : 0.0)) / cmax);
    return worst;
}

/// Elements on which psi_j is visibly nonzero, from sampled values.
int sampled_support(const dual::DualBasis& d, int j)
{
    const auto& kv = d.knots();
    std::vector<double> peak(kv.num_elements(), 0.0);
    for (int e = 0; e < kv.num_elements(); ++e)
        for (int t = 1; t < 16; ++t) {
            const double x = kv.breakpoint(e) + (kv.breakpoint(e + 1) - kv.breakpoint(e)) * t / 16.0;
            peak[e] = std::max(peak[e], std::abs(d.evaluate(j, x)));
        }
    const double top = *std::max_element(peak.begin(), peak.end());
    int first = -1, last = -1;
    for (int e = 0; e < kv.num_elements(); ++e)
        if (peak[e] > 1e-12 * top) {
            if (first < 0) first = e;
            last = e;
        }
    return last - first + 1;
}

/// sup_x |Q x^k - x^k| over k <= p, Q f = sum_j (f, B_j)_rho / c_j psi_j, all integrals by the oracle.
double reproduction_defect(const SuiteSpace& s, const dual::DualBasis& d)
{
    const auto U = knots_of(s.kv);
    const int p = s.kv.degree(), n = d.size();
    const Gauss g(p + 3);
    double worst = 0.0;
    for (int k = 0; k <= p; ++k) {
        std::vector<double> c(n, 0.0);
        for (int e = 0; e < s.kv.num_elements(); ++e) {
            const double a = s.kv.breakpoint(e), h = s.kv.breakpoint(e + 1) - a;
            for (std::size_t q = 0; q < g.x.size(); ++q) {
                const double x = a + h * g.x[q], w = h * g.w[q] * s.rho(x) * std::pow(x, k);
                for (int r = 0; r < n; ++r) c[r] += w * testsupport::cox_de_boor(U, d.retained[r], p, x);
            }
        }
        for (int r = 0; r < n; ++r) c[r] /= d.scale[r];
        for (int e = 0; e < s.kv.num_elements(); ++e)
            for (int t = 0; t <= 16; ++t) {
                const double x = s.kv.breakpoint(e) + (s.kv.breakpoint(e + 1) - s.kv.breakpoint(e)) * t / 16.0;
                double v = 0.0;
                for (int r = 0; r < n; ++r) v += c[r] * d.evaluate(r, x);
                worst = std::max(worst, std::abs(v - std::pow(x, k)));
            }
    }
    return worst;
}

constexpr std::uint64_t seed = 0x5EED;
const dual::DualKind dual_kinds[] = {dual::DualKind::naive_element, dual::DualKind::optimal};

Outcome criterion1()
{
    double worst = 0.0;
    int spaces = 0;
    for (int p : {1, 2, 3})
        for (auto kind : dual_kinds)
            for (const auto& s : suite(p, 200, seed + p)) {
                const auto d = build(s, kind);
                worst = std::max(worst, biorthogonality_defect(oracle_gram(s, d), d));
                ++spaces;
            }
    return {worst <= 1e-10, fmt("max relative defect %.3e over %d bases (tol 1e-10)", worst, spaces)};
}

Outcome criterion2()
{
    int widest_opt = 0, widest_naive = 0, bad = 0;
    for (int p : {1, 2, 3})
        for (auto kind : dual_kinds)
            for (const auto& s : suite(p, 200, seed + p)) {
                const auto d = build(s, kind);
                const int bound = kind == dual::DualKind::optimal ? 2 * p + 1 : p + 1;
                for (int j = 0; j < d.size(); ++j) {
                    const int w = sampled_support(d, j);
                    bad += w > bound;
                    auto& widest = kind == dual::DualKind::optimal ? widest_opt : widest_naive;
                    widest = std::max(widest, w - bound);
                }
            }
    return {bad == 0, fmt("%d functions over their bound; widest minus bound: optimal %d, naive %d", bad, widest_opt,
                          widest_naive)};
}

Outcome criterion3()
{
    double worst = 0.0;
    int spaces = 0;
    for (int p : {1, 2, 3})
        for (const auto& s : suite(p, 200, seed + p)) {
            if (s.flags.left || s.flags.right) continue;
            worst = std::max(worst, reproduction_defect(s, build(s, dual::DualKind::optimal)));
            ++spaces;
        }
    const std::vector<double> breaks{0.0, 0.13, 0.37, 0.52, 0.81, 1.0};
    const SuiteSpace fixed{spline::KnotVector::from_breakpoints(2, breaks, std::vector<int>(4, 1)), {},
                           [](double) { return 1.0; }, false};
    const double naive = reproduction_defect(fixed, build(fixed, dual::DualKind::naive_element));
    return {worst <= 1e-10 && naive >= 1e-4,
            fmt("optimal sup residual %.3e over %d spaces (tol 1e-10); naive p=2 fixed mesh %.3e (expected >= 1e-4)",
                worst, spaces, naive)};
}

Outcome criterion4()
{
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int p : {1, 2, 3})
        for (int s = 0; s < 20; ++s) {
            const auto ip = dual::WeightedInnerProduct::parametric();
            std::vector<dual::DualBasis> f;
            std::vector<std::vector<double>> U;
            for (int axis = 0; axis < 2; ++axis) {
                const auto kv = testsupport::random_knots(rng, p, 1 + static_cast<int>(rng() % 8), p);
                dual::CrosspointFlags flags{(rng() & 1) != 0, (rng() & 2) != 0};
                if (kv.num_basis() < p + 2) flags = {};
                f.push_back(dual::make_dual_basis(spline::SplineSpace1D(kv), flags, dual::DualKind::optimal, ip));
                U.push_back(knots_of(kv));
            }
            const auto t = dual::tensor_dual(f[0], f[1]);
            const auto& ku = f[0].knots();
            const auto& kv = f[1].knots();
            const int n = t.size();
            const Gauss g(p + 2);
            Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
            std::vector<double> psi(n);
            for (int eu = 0; eu < ku.num_elements(); ++eu)
                for (int ev = 0; ev < kv.num_elements(); ++ev) {
                    const double au = ku.breakpoint(eu), hu = ku.breakpoint(eu + 1) - au;
                    const double av = kv.breakpoint(ev), hv = kv.breakpoint(ev + 1) - av;
                    for (std::size_t qu = 0; qu < g.x.size(); ++qu)
                        for (std::size_t qv = 0; qv < g.x.size(); ++qv) {
                            const double x = au + hu * g.x[qu], y = av + hv * g.x[qv];
                            const double w = hu * hv * g.w[qu] * g.w[qv];
                            for (int b = 0; b < n; ++b) psi[b] = t.evaluate(b, x, y);
                            for (int a = 0; a < n; ++a) {
                                const auto [iu, iv] = t.bsplines(a);
                                const double B = testsupport::cox_de_boor(U[0], iu, p, x) *
                                                 testsupport::cox_de_boor(U[1], iv, p, y);
                                if (B == 0.0) continue;
                                for (int b = 0; b < n; ++b) G(a, b) += w * B * psi[b];
                            }
                        }
                }
            double cmax = 0.0;
            for (int a = 0; a < n; ++a) cmax = std::max(cmax, t.scale(a));
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    worst = std::max(worst, std::abs(G(a, b) - (a == b ? t.scale(a) : 0.0)) / cmax);
        }
    return {worst <= 1e-10, fmt("max relative defect %.3e over 60 tensor spaces (tol 1e-10)", worst)};
}

const MultiplierKind all_kinds[] = {MultiplierKind::standard, MultiplierKind::naive, MultiplierKind::optimal};

Outcome criterion5()
{
    double worst = 0.0;
    for (auto kind : all_kinds) {
        const auto pb = elasticity::plate_problem("plate_straight_matching", {}, kind);
        elasticity::SolveOptions o;
        const auto condensed = elasticity::solve_level(pb, 0, o);
        o.saddle_point = true;
        const auto saddle = elasticity::solve_level(pb, 0, o);
        worst = std::max(worst, (condensed.solution.u - saddle.solution.u).norm() / saddle.solution.u.norm());
    }
    return {worst <= 1e-10, fmt("max relative difference in u %.3e over std, naive, optimal (tol 1e-10)", worst)};
}

Eigen::Vector2d affine_field(const Eigen::Vector2d& x)
{
    return {0.1 + 0.3 * x[0] - 0.2 * x[1], -0.4 + 0.25 * x[0] + 0.15 * x[1]};
}

Eigen::Matrix2d affine_strain(const Eigen::Vector2d&)
{
    Eigen::Matrix2d g;
    g << 0.3, -0.2, 0.25, 0.15;
    return 0.5 * (g + g.transpose());
}

Outcome criterion6()
{
    double energy = 0.0, coeff = 0.0;
    int runs = 0;
    for (int p : {1, 2, 3})
        for (auto [ns, nm] : {std::pair{2, 3}, std::pair{3, 2}})
            for (auto kind : all_kinds) {
                std::mt19937_64 rng(seed + 17 * p + ns);
                auto dom = testsupport::two_rectangles(testsupport::random_knots(rng, p, ns, 1),
                                                       testsupport::random_knots(rng, p, nm, 1), 3);
                for (int k = 0; k < 2; ++k)
                    for (int f = 0; f < 4; ++f) {
                        const auto face = static_cast<spline::Face>(f);
                        const bool coupled = (k == 0 && face == spline::Face::east) || (k == 1 && face == spline::Face::west);
                        if (!coupled) dom.boundary(k, face) = {geometry::BoundaryKind::dirichlet, {true, true}, "exact"};
                    }
                geometry::apply_crosspoints(dom);
                elasticity::ElasticProblem pb;
                pb.domain = dom;
                pb.materials.assign(2, {1.0, 0.3, elasticity::Plane::strain});
                pb.displacements["exact"] = affine_field;
                pb.exact = elasticity::ExactSolution{affine_field, affine_strain};
                pb.multiplier = kind;
                elasticity::SolveOptions o;
                o.levels = 1;
                const auto ls = elasticity::solve_level(pb, 0, o);
                energy = std::max(energy, ls.result.energy_error);
                // unit weights: the affine field has its values at the control points as coefficients
                for (int k = 0; k < 2; ++k)
                    for (int a = 0; a < ls.disc.domain.patches[k].size(); ++a) {
                        const Eigen::Vector2d g = affine_field(ls.disc.domain.patches[k].controls()[a]);
                        for (int c = 0; c < 2; ++c)
                            coeff = std::max(coeff, std::abs(ls.solution.u[ls.disc.dofs.dof(k, a, c)] - g[c]));
                    }
                ++runs;
            }
    return {energy <= 1e-9 && coeff <= 1e-9,
            fmt("max energy error %.3e, max coefficient error %.3e over %d runs (tol 1e-9)", energy, coeff, runs)};
}

struct Run {
    std::vector<elasticity::LevelResult> levels;
    double seconds = 0.0;
    [[nodiscard]] double order() const { return levels.back().observed_order; }
};

Run convergence_run(const std::string& geometry, int p, std::array<int, 2> ratio, MultiplierKind kind, int first,
                    int count)
{
    geometry::BenchmarkParams prm;
    prm.degree = p;
    prm.slave_elements = ratio[0];
    prm.master_elements = ratio[1];
    const auto pb = elasticity::plate_problem(geometry, prm, kind);
    elasticity::SolveOptions o;
    o.first_level = first;
    o.levels = count;
    o.multipliers = true;
    o.execution = Execution::parallel;
    const auto t0 = std::chrono::steady_clock::now();
    Run r{elasticity::solve_mortar_elasticity(pb, o), 0.0};
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

Outcome criterion7()
{
    const std::array<int, 2> fine{3, 2}, coarse{2, 3};
    const auto std2 = convergence_run("plate_straight_matching", 2, fine, MultiplierKind::standard, 2, 5);
    const auto opt2 = convergence_run("plate_straight_matching", 2, fine, MultiplierKind::optimal, 2, 5);
    const auto naive2 = convergence_run("plate_straight_matching", 2, coarse, MultiplierKind::naive, 2, 5);
    const auto opt3 = convergence_run("plate_straight_matching", 3, fine, MultiplierKind::optimal, 2, 5);
    const auto naive3 = convergence_run("plate_straight_matching", 3, coarse, MultiplierKind::naive, 2, 5);
    double ratio = 0.0;
    for (std::size_t l = 0; l < opt2.levels.size(); ++l)
        ratio = std::max(ratio, opt2.levels[l].energy_error / std2.levels[l].energy_error);
    double slowest = 0.0;
    for (const auto* r : {&std2, &opt2, &naive2, &opt3, &naive3}) slowest = std::max(slowest, r->seconds);
    const bool pass = opt2.order() >= 1.9 && ratio <= 2.0 && naive2.order() <= 1.7 && opt3.order() >= 2.7 &&
                      naive3.order() <= 2.0 && slowest <= 300.0;
    return {pass, fmt("p=2 optimal order %.3f (>= 1.9), max error ratio to std %.3f (<= 2), naive coarse-slave "
                      "order %.3f (<= 1.7); p=3 optimal order %.3f (>= 2.7), naive coarse-slave order %.3f (<= 2.0); "
                      "slowest run %.1fs (<= 300)",
                      opt2.order(), ratio, naive2.order(), opt3.order(), naive3.order(), slowest)};
}

Outcome criterion8()
{
    bool pass = true;
    std::string detail;
    for (const std::array<int, 2> ratio : {std::array<int, 2>{3, 2}, std::array<int, 2>{2, 3}}) {
        const auto r = convergence_run("plate_curved", 2, ratio, MultiplierKind::optimal, 1, 5);
        double jump = 1.0;
        for (std::size_t l = 1; l < r.levels.size(); ++l) {
            const double q = r.levels[l].multiplier_sup / r.levels[l - 1].multiplier_sup;
            jump = std::max({jump, q, 1.0 / q});
        }
        pass = pass && r.order() >= 1.9 && jump <= 1.5;
        detail += fmt("%s%d:%d order %.3f (>= 1.9), multiplier sup level-to-level ratio %.3f (<= 1.5)",
                      detail.empty() ? "" : "; ", ratio[0], ratio[1], r.order(), jump);
    }
    return {pass, detail};
}

Outcome criterion9()
{
    study::StudyConfig c;
    c.command = "sparsity";
    c.degree = 2;
    c.ratios = {{3, 2}};
    c.level = 5;
    c.export_matrices = false;
    c.out = "acceptance_sparsity";
    const auto r = study::sparsity(c).report;
    const auto& m = r["multipliers"];
    const double std_nnz = m["std"]["condensed"]["nnz"].get<double>();
    const double std_block = m["std"]["condensed_master_block_nnz"].get<double>();
    bool pass = true;
    std::string detail = fmt("primal %d, dual %d", m["std"]["primal_dofs"].get<int>(), m["std"]["dual_dofs"].get<int>());
    for (const char* k : {"naive", "optimal"}) {
        const double ratio = m[k]["condensed"]["nnz"].get<double>() / std_nnz;
        const double block = m[k]["condensed_master_block_nnz"].get<double>() / std_block;
        const double off = m[k]["m_ss_off_diagonal"].get<double>();
        pass = pass && ratio <= 0.2 && off <= 1e-12;
        detail += fmt("; %s condensed nnz ratio %.3f (<= 0.2), master block ratio %.3f, M_SS off-diagonal %.1e "
                      "(<= 1e-12)",
                      k, ratio, block, off);
    }
    return {pass, detail};
}

Outcome criterion10()
{
    geometry::BenchmarkParams prm;
    prm.degree = 2;
    auto pb = elasticity::annulus_problem(prm, MultiplierKind::optimal, elasticity::Plane::strain);
    pb.slave_policy = elasticity::SlavePolicy::finer_side;
    elasticity::SolveOptions o;
    o.execution = Execution::parallel;
    o.reference_energy = elasticity::solve_level(pb, 4, o).result.energy;
    o.first_level = 1;
    o.levels = 3;
    const auto r = elasticity::solve_mortar_elasticity(pb, o);
    bool decreasing = true;
    for (std::size_t l = 1; l < r.size(); ++l) decreasing = decreasing && r[l].energy_error < r[l - 1].energy_error;
    const double dev = std::abs(o.reference_energy - 3.59e-3) / 3.59e-3;
    return {decreasing && r.back().observed_order >= 1.8 && dev <= 0.05,
            fmt("errors %.3e %.3e %.3e (%s), order %.3f (>= 1.8), E_ref %.5e off 3.59e-3 by %.2f%% (<= 5%%)",
                r[0].energy_error, r[1].energy_error, r[2].energy_error, decreasing ? "decreasing" : "not decreasing",
                r.back().observed_order, o.reference_energy, 100.0 * dev)};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria"};
    std::vector<int> only, expect_fail;
    app.add_option("--only", only, "criteria to run (default all)")->delimiter(',');
    app.add_option("--expect-fail", expect_fail, "criteria documented as unattainable")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
        {"biorthogonality", criterion1},      {"support bound", criterion2},
        {"polynomial reproduction", criterion3}, {"tensor biorthogonality", criterion4},
        {"condensation equivalence", criterion5}, {"patch test", criterion6},
        {"convergence", criterion7},          {"curved interface", criterion8},
        {"sparsity", criterion9},             {"bimaterial annulus", criterion10}};
    const std::set<int> run(only.begin(), only.end()), known(expect_fail.begin(), expect_fail.end());

    int unexpected = 0;
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) {
        if (!run.empty() && !run.count(i)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i - 1].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const char* tag = o.pass ? "PASS" : "FAIL";
        const bool expected_fail = known.count(i) != 0;
        if (o.pass == expected_fail) ++unexpected;
        std::printf("criterion %2d %s %-26s %s [%.1fs]%s\n", i, tag, criteria[i - 1].first, o.detail.c_str(), s,
                    expected_fail ? (o.pass ? " (expected FAIL: now passes)" : " (known, documented)") : "");
        std::fflush(stdout);
    }
    return unexpected == 0 ? 0 : 1;
}
