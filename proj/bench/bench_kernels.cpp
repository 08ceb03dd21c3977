// Serial reference against OpenMP kernels on the refined plate: stiffness, coupling, energy error.

#include <benchmark/benchmark.h>

#include "dualmortar/elasticity/problem.hpp"
#include "dualmortar/mortar/system.hpp"

using namespace dualmortar;

namespace {

const elasticity::ElasticProblem& plate()
{
    static const auto pb = elasticity::plate_problem("plate_straight_matching", {}, mortar::MultiplierKind::optimal);
    return pb;
}

geometry::MultipatchDomain refined(int level) { return plate().domain.refined(level); }

Execution mode(const benchmark::State& state) { return state.range(1) ? Execution::parallel : Execution::serial; }

void stiffness(benchmark::State& state)
{
    const auto domain = refined(static_cast<int>(state.range(0)));
    const auto& material = plate().materials.front();
    for (auto _ : state)
        for (const auto& patch : domain.patches)
            benchmark::DoNotOptimize(elasticity::assemble_stiffness(patch, material, {}, 0, mode(state)));
}

void coupling(benchmark::State& state)
{
    const auto domain = refined(static_cast<int>(state.range(0)));
    mortar::CouplingOptions o;
    o.execution = mode(state);
    for (auto _ : state)
        for (int c = 0; c < 2; ++c)
            benchmark::DoNotOptimize(
                mortar::assemble_coupling(domain, domain.interfaces.front(), c, mortar::MultiplierKind::optimal, o));
}

void energy_error(benchmark::State& state)
{
    const auto domain = refined(static_cast<int>(state.range(0)));
    const mortar::DofMap dofs(domain);
    const Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(dofs.size(), -1e-4, 1e-4);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            elasticity::energy_error(domain, plate().materials, u, plate().exact->strain, 0, mode(state)));
}

void levels(benchmark::internal::Benchmark* b)
{
    b->ArgNames({"level", "parallel"});
    for (int level : {3, 5})
        for (int parallel : {0, 1}) b->Args({level, parallel});
    b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(stiffness)->Apply(levels);
BENCHMARK(coupling)->Apply(levels);
BENCHMARK(energy_error)->Apply(levels);

BENCHMARK_MAIN();
