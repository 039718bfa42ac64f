#include <benchmark/benchmark.h>

#include <spinsim/basis.hpp>
#include <spinsim/hamiltonian.hpp>
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

// y = H x through the real-arithmetic CSR kernel: the inner loop of every
// Lanczos iteration and every Krylov propagation step.
void BM_SparseApplyReal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto basis = build_basis(n, 0);
  auto h = build_hamiltonian(basis, uniform_profile(n), FieldConfig::zeros(n));
  std::vector<double> x(h.dim(), 1.0), y(h.dim());
  for (auto _ : state) {
    h.apply_real(x, y);
    benchmark::DoNotOptimize(y.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(h.nnz()));
}
BENCHMARK(BM_SparseApplyReal)->Arg(8)->Arg(10)->Arg(12)->Arg(14)->Arg(16);

// Complex kernel, used whenever transverse fields force complex storage.
void BM_SparseApplyComplex(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto basis = build_basis(n);
  FieldConfig fields = FieldConfig::zeros(n);
  for (auto& b : fields.b) b = {0.1, 0.05, -0.02};
  auto h = build_hamiltonian(basis, uniform_profile(n), fields);
  std::vector<Complex> x(h.dim(), Complex{1.0, 0.0}), y(h.dim());
  for (auto _ : state) {
    h.apply(x, y);
    benchmark::DoNotOptimize(y.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(h.nnz()));
}
BENCHMARK(BM_SparseApplyComplex)->Arg(8)->Arg(10)->Arg(12);

// In-place value rewrite for new couplings (what a trajectory does every
// step), versus rebuilding the operator from triplets each time.
void BM_AssemblerUpdate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto basis = build_basis(n, 0);
  HamiltonianAssembler assembler(basis, FieldConfig::zeros(n));
  CouplingProfile p = uniform_profile(n);
  double wiggle = 0.0;
  for (auto _ : state) {
    wiggle = (wiggle < 0.5) ? wiggle + 1e-3 : 0.0;
    p.j[1] = 0.5 + wiggle;
    benchmark::DoNotOptimize(assembler.update(p));
  }
}
BENCHMARK(BM_AssemblerUpdate)->Arg(8)->Arg(10)->Arg(12)->Arg(14)->Arg(16);

void BM_BuildFromScratch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto basis = build_basis(n, 0);
  CouplingProfile p = uniform_profile(n);
  FieldConfig fields = FieldConfig::zeros(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_hamiltonian(basis, p, fields));
  }
}
BENCHMARK(BM_BuildFromScratch)->Arg(8)->Arg(10)->Arg(12)->Arg(14);

}  // namespace
