#include "slabtrans/collision.hpp"
#include "slabtrans/halfspace.hpp"
#include "slabtrans/heat.hpp"
#include "slabtrans/kinetic.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace slabtrans;

namespace
{

const CollisionOperator&
paper_op()
{
  static const CollisionOperator op =
    build_collision_operator(paper_kernel(), 31, build_angular_grid(32));
  return op;
}

} // namespace

static void
BM_CollisionRelax(benchmark::State& state)
{
  std::vector<double> f(paper_op().grid().nodes);
  for (auto _ : state)
  {
    paper_op().relax(f, 1e-3);
    benchmark::DoNotOptimize(f.data());
  }
}
BENCHMARK(BM_CollisionRelax);

static void
BM_KineticStep(benchmark::State& state)
{
  const int cells = static_cast<int>(state.range(0));
  const KineticGrid g(-1, 1, cells, paper_op().grid());
  const double eps = 1.0 / 32;
  const KineticStepper stepper(g, paper_op(), SigmaProfile::uniform(1.0), eps, 0.5 * eps * g.dx());
  auto s = make_kinetic_state(g, [](double x, double mu) { return std::sin(3 * x) + mu; });
  const std::vector<double> in(g.half(), 0.0);
  for (auto _ : state)
  {
    stepper.step(s, in, in);
    benchmark::DoNotOptimize(s.f.data());
  }
  state.SetItemsProcessed(state.iterations() * cells * g.directions());
}
BENCHMARK(BM_KineticStep)->Arg(400)->Arg(4000);

static void
BM_HalfSpaceBuild(benchmark::State& state)
{
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
  {
    HalfSpaceSystem s(paper_op(), n, 0.1);
    benchmark::DoNotOptimize(s.eigenvalues().data());
  }
}
BENCHMARK(BM_HalfSpaceBuild)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void
BM_AlbedoApply(benchmark::State& state)
{
  static const HalfSpaceSystem sys(paper_op(), 16, 0.1);
  const auto g = paper_op().grid();
  std::vector<double> in, out;
  for (double mu : g.nodes)
    (mu > 0 ? in : out).push_back(mu);
  const auto map = albedo_map(sys, in, out);
  for (auto _ : state)
  {
    auto r = map.apply(in);
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_AlbedoApply);

static void
BM_HeatStep(benchmark::State& state)
{
  const HeatGrid g(-1, 1, static_cast<int>(state.range(0)));
  HeatState s{0.0, std::vector<double>(g.cells, 0.0)};
  for (int i = 0; i < g.cells; ++i)
    s.theta[i] = std::sin(3.14159 * g.center(i));
  for (auto _ : state)
  {
    s = heat_step(s, g, 0.4, 2.5e-4, 0.0, 0.0);
    benchmark::DoNotOptimize(s.theta.data());
  }
}
BENCHMARK(BM_HeatStep)->Arg(2000);
BENCHMARK_MAIN();
