#include "spinsim/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracle_utils.hpp"
#include "spinsim/basis.hpp"
#include "spinsim/hamiltonian.hpp"

namespace {

using spinsim::build_basis;
using spinsim::build_hamiltonian;
using spinsim::CouplingProfile;
using spinsim::dense_oracle;
using spinsim::energy_gap;
using spinsim::FieldConfig;
using spinsim::ground_state;
using spinsim::LanczosOptions;
using spinsim::lowest_eigenpairs;
using spinsim::SparseOperator;
using spinsim::SpectralResult;

SparseOperator chain_hamiltonian(int n, bool dimerized,
                                 std::optional<int> sector = 0) {
  auto basis = build_basis(n, sector);
  CouplingProfile p;
  p.j.assign(static_cast<std::size_t>(n - 1), 1.0);
  if (dimerized) {
    for (int k = 2; k <= n - 1; k += 2) p.j[k - 1] = 0.0;
  }
  return build_hamiltonian(basis, p, FieldConfig::zeros(n));
}

TEST(EnergyGap, DimerizedChainGapIsFourExactly) {
  for (int n : {4, 6, 8}) {
    const double gap = energy_gap(chain_hamiltonian(n, true));
    EXPECT_NEAR(gap, 4.0, 1e-8) << "n=" << n;
  }
}

TEST(EnergyGap, UniformChainMatchesReference) {
  // Reference value computed with an independent dense solver.
  const double gap10 = energy_gap(chain_hamiltonian(10, false));
  EXPECT_NEAR(gap10, 1.3094464711, 2e-7);
}

TEST(EnergyGap, UniformGapShrinksWithLength) {
  const double g6 = energy_gap(chain_hamiltonian(6, false));
  const double g8 = energy_gap(chain_hamiltonian(8, false));
  const double g10 = energy_gap(chain_hamiltonian(10, false));
  EXPECT_GT(g6, g8);
  EXPECT_GT(g8, g10);
}

TEST(GroundState, MatchesDenseOracleEnergyAndVector) {
  const SparseOperator h = chain_hamiltonian(8, false);
  const SpectralResult lanczos = ground_state(h);
  const SpectralResult dense = dense_oracle(h);
  ASSERT_FALSE(lanczos.energies.empty());
  EXPECT_NEAR(lanczos.energies[0], dense.energies[0], 1e-9);
  const double overlap =
      std::abs(inner(lanczos.states[0], dense.states[0]));
  EXPECT_NEAR(overlap, 1.0, 1e-9);
  EXPECT_LT(lanczos.residuals[0], 1e-8);
}

TEST(GroundState, PhaseFixedByLargestAmplitude) {
  const SparseOperator h = chain_hamiltonian(6, false);
  const SpectralResult res = ground_state(h);
  double best = 0.0;
  spinsim::Complex best_amp{0.0, 0.0};
  for (const auto& a : res.states[0].amp) {
    if (std::abs(a) > best) {
      best = std::abs(a);
      best_amp = a;
    }
  }
  EXPECT_GT(best_amp.real(), 0.0);
  EXPECT_NEAR(best_amp.imag(), 0.0, 1e-12);
}

TEST(LowestEigenpairs, RandomDisorderedChainsAgreeWithDense) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 8;
    auto basis = build_basis(n, 0);
    CouplingProfile p;
    p.j.resize(static_cast<std::size_t>(n - 1));
    for (double& v : p.j) v = std::exp(-u(rng));
    FieldConfig f = FieldConfig::zeros(n);
    for (auto& b : f.b) b[2] = u(rng);  // longitudinal only in-sector
    const SparseOperator h = build_hamiltonian(basis, p, f);

    const SpectralResult lz = lowest_eigenpairs(h, 4);
    const SpectralResult dn = dense_oracle(h);
    for (int k = 0; k < 4; ++k) {
      EXPECT_NEAR(lz.energies[k], dn.energies[k], 1e-9)
          << "trial=" << trial << " k=" << k;
      EXPECT_LT(lz.residuals[k], 1e-8);
    }
  }
}

TEST(LowestEigenpairs, EigenpairsAreOrthonormal) {
  const SparseOperator h = chain_hamiltonian(8, false);
  const SpectralResult res = lowest_eigenpairs(h, 5);
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b <= a; ++b) {
      const double want = a == b ? 1.0 : 0.0;
      EXPECT_NEAR(std::abs(inner(res.states[a], res.states[b])), want, 1e-9)
          << a << "," << b;
    }
  }
}

TEST(EnergyGap, SkipsDegenerateGroundMultiplets) {
  // Two decoupled pairs at different couplings: spectrum has exact
  // degeneracies above the ground state; the gap must be the distance to the
  // first strictly higher level (4 * min J here), not zero.
  auto basis = build_basis(4, 0);
  CouplingProfile p;
  p.j = {0.5, 0.0, 1.0};
  const SparseOperator h = build_hamiltonian(basis, p, FieldConfig::zeros(4));
  EXPECT_NEAR(energy_gap(h), 2.0, 1e-8);
}

TEST(DenseOracle, FullSpectrumOnSmallChain) {
  const SparseOperator h = chain_hamiltonian(4, true);
  const SpectralResult res = dense_oracle(h);
  ASSERT_EQ(res.energies.size(), 6u);  // C(4,2)
  // Dimerized 4-site chain in sector 0: singlet-singlet ground state at -6.
  EXPECT_NEAR(res.energies[0], -6.0, 1e-12);
  EXPECT_NEAR(res.energies[1] - res.energies[0], 4.0, 1e-12);
}

}  // namespace
