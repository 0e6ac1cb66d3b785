#include <benchmark/benchmark.h>

#include <memory>

#include "gsearch/dynamics.hpp"
#include "gsearch/resolvent.hpp"
#include "gsearch/search.hpp"
#include "gsearch/spectral.hpp"

using namespace gsearch;

static void BM_BuildLattice(benchmark::State& state) {
  const LatticeSpec spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_lattice(spec));
}
BENCHMARK(BM_BuildLattice)->Arg(12)->Arg(24)->Arg(48);

static void BM_EigSym(benchmark::State& state) {
  const LatticeSpec spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  const auto h = build_search_hamiltonian(spec, 1.0, SiteId{});
  for (auto _ : state) benchmark::DoNotOptimize(eig_sym(h.matrix()));
}
BENCHMARK(BM_EigSym)->Arg(6)->Arg(12)->Arg(18)->Unit(benchmark::kMillisecond);

static void BM_ResolventRoot(benchmark::State& state) {
  const LatticeSpec spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(resolvent_root(spec));
}
BENCHMARK(BM_ResolventRoot)->Arg(24)->Arg(96)->Arg(384)->Unit(benchmark::kMillisecond);

static void BM_EpsteinZeta(benchmark::State& state) {
  const auto form = dirac_form_matrix();
  for (auto _ : state) benchmark::DoNotOptimize(epstein_zeta(form, 2.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EpsteinZeta)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_Propagation(benchmark::State& state) {
  const LatticeSpec spec(12, 12);
  const auto h = build_search_hamiltonian(spec, 1.0, SiteId{});
  const Propagator prop(std::make_shared<const SpectrumResult>(eig_sym(h.matrix())),
                        optimal_start_state(spec, SiteId{}));
  const auto times = time_grid(0.05, 0.05 * static_cast<double>(state.range(0)));
  Eigen::MatrixXcd bra(1, spec.sites());
  bra.row(0) = neighbor_state(spec, SiteId{}).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(prop.projections(bra, times));
}
BENCHMARK(BM_Propagation)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
