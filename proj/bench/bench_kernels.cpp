// Serial reference vs OpenMP kernels on 2-D grids. Thread count follows
// OMP_NUM_THREADS; below kParallelThreshold nodes the parallel path runs serially.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "nlheat/kernels.hpp"

namespace k = nlheat::kernels;

namespace {

struct Data {
  k::StencilShape shape;
  std::vector<double> u, v, out;

  explicit Data(std::size_t side) {
    shape.dim = 2;
    shape.n = {side, side};
    shape.inv_h = {static_cast<double>(side), static_cast<double>(side)};
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    u.resize(side * side);
    v.resize(side * side);
    out.resize(side * side);
    for (auto& x : u) x = d(rng);
    for (auto& x : v) x = d(rng);
  }
};

template <void (*Kernel)(const k::StencilShape&, std::span<const double>, std::span<double>)>
void stencil(benchmark::State& state) {
  Data d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    Kernel(d.shape, d.u, d.out);
    benchmark::DoNotOptimize(d.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(d.u.size()));
}

template <double (*Kernel)(std::span<const double>, std::span<const double>)>
void reduction(benchmark::State& state) {
  Data d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(d.u, d.v));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(d.u.size()));
}

template <double (*Kernel)(std::span<const double>)>
void sum(benchmark::State& state) {
  Data d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(d.u));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(d.u.size()));
}

}  // namespace

#define SIDES ->Arg(128)->Arg(512)->Arg(2048)

BENCHMARK(stencil<k::serial::laplacian>)->Name("laplacian/serial") SIDES;
BENCHMARK(stencil<k::parallel::laplacian>)->Name("laplacian/parallel") SIDES;
BENCHMARK(stencil<k::serial::grad_sq>)->Name("grad_sq/serial") SIDES;
BENCHMARK(stencil<k::parallel::grad_sq>)->Name("grad_sq/parallel") SIDES;
BENCHMARK(reduction<k::serial::dot>)->Name("dot/serial") SIDES;
BENCHMARK(reduction<k::parallel::dot>)->Name("dot/parallel") SIDES;
BENCHMARK(sum<k::serial::sum>)->Name("sum/serial") SIDES;
BENCHMARK(sum<k::parallel::sum>)->Name("sum/parallel") SIDES;

BENCHMARK_MAIN();
