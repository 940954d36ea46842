#include "cwg/analysis.hpp"

#include <benchmark/benchmark.h>

using namespace cwg;

namespace {

void bm_assemble(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    const Mesh mesh = build_uniform_triangle_mesh(n);
    const auto mc = manufactured_case_1();
    for (auto _ : state) {
        GlobalSystem sys = assemble(mesh, k, mc.a, mc.f);
        benchmark::DoNotOptimize(sys.A.nonzeros());
    }
    state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}

void bm_assemble_condensed(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    const Mesh mesh = build_uniform_triangle_mesh(n);
    const auto mc = manufactured_case_1();
    for (auto _ : state) {
        CondensedSystem sys = assemble_condensed(mesh, k, mc.a, mc.f);
        benchmark::DoNotOptimize(sys.A.nonzeros());
    }
    state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}

void bm_solve_full(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mesh mesh = build_uniform_triangle_mesh(n);
    const DofMap dofmap(mesh, 1);
    const auto mc = manufactured_case_1();
    const GlobalSystem sys = assemble(mesh, 1, mc.a, mc.f);
    for (auto _ : state) {
        WeakFunction u = solve_full(sys, dofmap);
        benchmark::DoNotOptimize(u.coeffs.norm());
    }
}

void bm_solve_condensed(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mesh mesh = build_uniform_triangle_mesh(n);
    const auto mc = manufactured_case_1();
    for (auto _ : state) {
        WeakFunction u = solve_condensed(mesh, 1, mc.a, mc.f);
        benchmark::DoNotOptimize(u.coeffs.norm());
    }
}

void bm_cg_skeleton(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mesh mesh = build_uniform_triangle_mesh(n);
    const auto mc = manufactured_case_1();
    const CondensedSystem sys = assemble_condensed(mesh, 1, mc.a, mc.f);
    for (auto _ : state) {
        auto [x, report] = cg_solve(sys.A, sys.b);
        benchmark::DoNotOptimize(x.norm());
        state.counters["iterations"] = report.iterations;
    }
}

}  // namespace

BENCHMARK(bm_assemble)->Args({16, 1})->Args({32, 1})->Args({16, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_assemble_condensed)
    ->Args({16, 1})
    ->Args({32, 1})
    ->Args({16, 2})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bm_solve_full)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_solve_condensed)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_cg_skeleton)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
