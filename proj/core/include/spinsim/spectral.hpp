#pragma once

#include <cstdint>
#include <vector>

#include "spinsim/sparse_operator.hpp"
#include "spinsim/state.hpp"

namespace spinsim {

/// Eigensolver tuning. max_basis bounds memory (max_basis vectors of the
/// operator's dimension are kept); restarting keeps the lowest Ritz pairs.
struct LanczosOptions {
  int max_basis = 80;
  int max_restarts = 400;
  double tol = 1e-10;  // convergence threshold on ||H x - theta x||
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

/// Low-lying eigenpairs: energies ascending, matching orthonormal states,
/// and the explicit residual norm ||H x - E x|| for each pair.
struct SpectralResult {
  std::vector<double> energies;
  std::vector<StateVector> states;
  std::vector<double> residuals;
};

/// Lowest nev eigenpairs by thick-restart Lanczos with full
/// reorthogonalization (dense diagonalization below a small-dimension
/// cutoff). Throws on non-convergence, reporting the last residual.
SpectralResult lowest_eigenpairs(const SparseOperator& h, int nev,
                                 const LanczosOptions& opts = {});

/// Ground state (k = 1). The phase is fixed by making the
/// largest-magnitude amplitude real and positive.
SpectralResult ground_state(const SparseOperator& h,
                            const LanczosOptions& opts = {});

/// E_1 - E_0 where E_1 is the lowest eigenvalue strictly above E_0 (by more
/// than a 1e-8 degeneracy tolerance), in whatever basis h was built on.
double energy_gap(const SparseOperator& h, const LanczosOptions& opts = {});

/// Full dense eigendecomposition (verification oracle). Dimension <= 4096.
SpectralResult dense_oracle(const SparseOperator& h);

}  // namespace spinsim
