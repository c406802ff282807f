#include <benchmark/benchmark.h>

#include "ealab/disorder.hpp"
#include "ealab/excitation.hpp"
#include "ealab/groundstate.hpp"
#include "ealab/lattice.hpp"

namespace {

using namespace ea;

void bm_enumeration_2d(benchmark::State& state) {
  const int L = int(state.range(0));
  const BoxLattice lat = BoxLattice::build(2, L, Topology::periodic);
  const CouplingField j = sample_couplings(lat, 42);
  const BoundaryCondition bc = BoundaryCondition::free();
  for (auto _ : state)
    benchmark::DoNotOptimize(solve(lat, j, bc, SolveMethod::enumeration));
}
BENCHMARK(bm_enumeration_2d)->Arg(3)->Arg(4)->Arg(5);

void bm_column_dp_2d(benchmark::State& state) {
  const int L = int(state.range(0));
  const BoxLattice lat = BoxLattice::build(2, L, Topology::periodic);
  const CouplingField j = sample_couplings(lat, 42);
  const BoundaryCondition bc = BoundaryCondition::free();
  for (auto _ : state)
    benchmark::DoNotOptimize(solve(lat, j, bc, SolveMethod::column_dp));
}
BENCHMARK(bm_column_dp_2d)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void bm_column_dp_chain(benchmark::State& state) {
  const int L = int(state.range(0));
  const BoxLattice lat = BoxLattice::build(1, L, Topology::periodic);
  const CouplingField j = sample_couplings(lat, 42);
  const BoundaryCondition bc = BoundaryCondition::free();
  for (auto _ : state)
    benchmark::DoNotOptimize(solve(lat, j, bc, SolveMethod::column_dp));
}
BENCHMARK(bm_column_dp_chain)->Arg(64)->Arg(256)->Arg(1024);

void bm_critical_droplet(benchmark::State& state) {
  const int L = int(state.range(0));
  const BoxLattice lat = BoxLattice::build(2, L, Topology::periodic);
  const CouplingField j = sample_couplings(lat, 42);
  const BoundaryCondition bc = BoundaryCondition::free();
  for (auto _ : state)
    benchmark::DoNotOptimize(critical_droplet(lat, j, bc, 0));
}
BENCHMARK(bm_critical_droplet)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
