// Kernels that dominate a time step: assembly, ILU setup, preconditioned
// GMRES on the monolithic system, and one split step.

#include <benchmark/benchmark.h>

#include "porosplit/assembly.hpp"
#include "porosplit/ilu.hpp"
#include "porosplit/splitters.hpp"

using namespace porosplit;

namespace {

ParameterMap grid(benchmark::State& state) {
  return {{"n_per_side", std::to_string(state.range(0))}};
}

void BM_ElasticStiffness(benchmark::State& state) {
  const auto mesh = std::make_shared<const Mesh>(unit_square_mesh(static_cast<std::size_t>(state.range(0)), 1.0));
  const FeSpace space = build_space(mesh, 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_elastic_stiffness(space, 711.0, 4066.0));
  state.counters["dofs"] = static_cast<double>(space.n_dofs());
}
BENCHMARK(BM_ElasticStiffness)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_ProblemSetup(benchmark::State& state) {
  const ParameterMap overrides = grid(state);
  for (auto _ : state) benchmark::DoNotOptimize(build_benchmark(CaseKind::swelling, overrides));
}
BENCHMARK(BM_ProblemSetup)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_IluFactor(benchmark::State& state) {
  auto pb = build_benchmark(CaseKind::swelling, grid(state));
  const int level = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(IluPreconditioner(pb->A_vv(), level));
}
BENCHMARK(BM_IluFactor)->Args({40, 0})->Args({40, 3})->Unit(benchmark::kMillisecond);

void BM_GmresIlu(benchmark::State& state) {
  auto pb = build_benchmark(CaseKind::swelling, grid(state));
  const IluPreconditioner ilu(pb->A_uu(), 3);
  const Vector b(pb->n_u(), 1.0);
  std::size_t iterations = 0;
  for (auto _ : state) {
    Vector x;
    iterations = gmres(pb->A_uu(), b, x, ilu).iterations;
    benchmark::DoNotOptimize(x);
  }
  state.counters["iters"] = static_cast<double>(iterations);
}
BENCHMARK(BM_GmresIlu)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state, const char* scheme) {
  auto pb = build_benchmark(CaseKind::swelling, grid(state));
  StepSolver solver(*pb, SplitConfig::parse(scheme));
  const State start = pb->initial_state();
  std::size_t iterations = 0;
  for (auto _ : state) {
    IterationReport rep;
    benchmark::DoNotOptimize(advance(solver, start, rep));
    iterations = rep.iterations;
  }
  state.counters["outer"] = static_cast<double>(iterations);
}
BENCHMARK_CAPTURE(BM_Step, monolithic, "monolithic")->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Step, altmin, "altmin")->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Step, l2s, "l2s(-0.5,0,1)")->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
