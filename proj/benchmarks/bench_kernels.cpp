#include <benchmark/benchmark.h>

#include <cmath>

#include "nordvlas/field_solver.hpp"
#include "nordvlas/identities.hpp"
#include "nordvlas/initial_data.hpp"
#include "nordvlas/pusher.hpp"

using namespace nordvlas;

namespace {

DataParams matter() {
  DataParams d;
  d.A_f = 4.6405217;
  return d;
}

GridSpec grid_for(int cells) { return {{}, 2.75, cells}; }

void BM_Deposit(benchmark::State& state) {
  const GridSpec g = grid_for(static_cast<int>(state.range(0)));
  const Ensemble e = sample_ensemble(matter(), 8, 8, g);
  const ScalarFieldState s(g);
  const std::vector<double> phi = sample_phi_at_particles(e, g, s.phi);
  for (auto _ : state) benchmark::DoNotOptimize(deposit_mu(e, phi, g));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(e.size()));
}
BENCHMARK(BM_Deposit)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Push(benchmark::State& state) {
  const GridSpec g = grid_for(static_cast<int>(state.range(0)));
  DataParams d = matter();
  d.A_phi = 0.1;
  const ScalarFieldState s = initial_field(g, d);
  const LatticeSampler sampler(s);
  Ensemble e = sample_ensemble(d, 8, 8, g);
  for (auto _ : state) {
    state.PauseTiming();
    Ensemble copy = e;
    state.ResumeTiming();
    push_step(copy, sampler, 1e-3);
    benchmark::DoNotOptimize(copy.particles.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(e.size()));
}
BENCHMARK(BM_Push)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_WaveStep(benchmark::State& state) {
  const GridSpec g = grid_for(static_cast<int>(state.range(0)));
  DataParams d;
  d.A_phi = 0.1;
  d.A_pi = 0.1;
  ScalarFieldState s = initial_field(g, d);
  const SourceLattice mu{ScalarLattice(g)};
  const double dt = 0.4 * g.dx() / std::sqrt(3.0);
  s = step_wave(s, mu, dt);
  for (auto _ : state) benchmark::DoNotOptimize(step_wave(s, mu, dt));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.node_count()));
}
BENCHMARK(BM_WaveStep)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SamplePhi(benchmark::State& state) {
  const GridSpec g = grid_for(64);
  DataParams d = matter();
  d.A_phi = 0.1;
  const ScalarFieldState s = initial_field(g, d);
  const Ensemble e = sample_ensemble(d, 8, 8, g);
  for (auto _ : state) benchmark::DoNotOptimize(sample_phi_at_particles(e, g, s.phi));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(e.size()));
}
BENCHMARK(BM_SamplePhi)->Unit(benchmark::kMillisecond);

void BM_Bab(benchmark::State& state) {
  const double R = std::pow(10.0, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(b_ab(R, 1.0, 0.5, {0, 0, 1}));
}
BENCHMARK(BM_Bab)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
