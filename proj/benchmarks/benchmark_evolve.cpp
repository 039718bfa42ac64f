#include <benchmark/benchmark.h>

#include <spinsim/basis.hpp>
#include <spinsim/evolve.hpp>
#include <spinsim/hamiltonian.hpp>
#include <spinsim/protocols.hpp>
#include <spinsim/spectral.hpp>
#include <spinsim/state.hpp>

#include <memory>
#include <vector>

namespace {

using namespace spinsim;

CouplingProfile uniform_profile(int n_sites) {
  CouplingProfile p;
  p.j.assign(static_cast<std::size_t>(n_sites - 1), 1.0);
  return p;
}

// One exp(-i H dt) application by the short Lanczos recurrence: the cost per
// time step of every large trajectory run.
void BM_KrylovStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto basis = build_basis(n, 0);
  auto h = build_hamiltonian(basis, uniform_profile(n), FieldConfig::zeros(n));
  StateVector psi = random_state(basis, 42);
  PropagatorConfig cfg;
  cfg.backend = Backend::Krylov;
  for (auto _ : state) {
    psi = step(psi, h, 0.01, cfg);
    benchmark::DoNotOptimize(psi.amp.data());
  }
}
BENCHMARK(BM_KrylovStep)->Arg(8)->Arg(10)->Arg(12)->Arg(14)->Arg(16);

// Exact per-step eigendecomposition; only competitive at tiny dimensions.
void BM_DenseStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto basis = build_basis(n, 0);
  auto h = build_hamiltonian(basis, uniform_profile(n), FieldConfig::zeros(n));
  StateVector psi = random_state(basis, 42);
  PropagatorConfig cfg;
  cfg.backend = Backend::Dense;
  for (auto _ : state) {
    psi = step(psi, h, 0.01, cfg);
    benchmark::DoNotOptimize(psi.amp.data());
  }
}
BENCHMARK(BM_DenseStep)->Arg(6)->Arg(8)->Arg(10);

// Ground state of the uniform chain by thick-restart Lanczos (the target
// state of the preparation protocol, recomputed once per process).
void BM_UniformGroundState(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto basis = build_basis(n, 0);
  auto h = build_hamiltonian(basis, uniform_profile(n), FieldConfig::zeros(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ground_state(h));
  }
}
BENCHMARK(BM_UniformGroundState)->Arg(8)->Arg(10)->Arg(12);

// A short but complete ramped trajectory, including per-step Hamiltonian
// refresh and fidelity sampling.
void BM_PreparationTrajectory(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto basis = build_basis(n, 0);
  auto states = protocol_states(basis, RampKind::GroundPrep);
  RampSchedule schedule{RampKind::GroundPrep, n, 1.0, 1.0};
  DisorderRealization none{};
  PropagatorConfig cfg;
  cfg.dt = 0.01;
  cfg.observe_every = 100;
  for (auto _ : state) {
    Trajectory traj = run_protocol(states.initial, schedule, none,
                                   states.target, cfg, schedule.ramp_time);
    benchmark::DoNotOptimize(traj.fidelity_at_ramp_end);
  }
}
BENCHMARK(BM_PreparationTrajectory)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
