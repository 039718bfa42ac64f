#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "spinsim/basis.hpp"

namespace spinsim {

using Complex = std::complex<double>;

/// Complex amplitude vector over a SpinBasis. Single-owner mutable; never
/// shared between concurrent workers.
struct StateVector {
  std::shared_ptr<const SpinBasis> basis;
  std::vector<Complex> amp;

  StateVector() = default;
  explicit StateVector(std::shared_ptr<const SpinBasis> b)
      : basis(std::move(b)), amp(basis->dimension(), Complex{0.0, 0.0}) {}

  std::size_t dimension() const { return amp.size(); }
  double norm() const;
  /// Rescales to unit norm; throws on (numerically) zero vectors.
  void normalize();
};

/// <a|b> with conjugation on a. Throws on basis mismatch.
Complex inner(const StateVector& a, const StateVector& b);

/// Product state of part_a on sites [0, m) and part_b on sites [m, N),
/// reindexed into `target` and normalized. When the target basis is
/// sector-restricted, any product weight falling outside the sector signals a
/// bookkeeping bug and is rejected.
StateVector tensor_embed(const StateVector& part_a, const StateVector& part_b,
                         std::shared_ptr<const SpinBasis> target);

/// Carries a state between bases over the same sites (e.g. sector 0 into the
/// full basis). Amplitudes on states absent from the target are rejected.
StateVector reindex(const StateVector& v,
                    std::shared_ptr<const SpinBasis> target);

/// Normalized state with deterministically seeded Gaussian amplitudes.
StateVector random_state(std::shared_ptr<const SpinBasis> basis,
                         std::uint64_t seed);

}  // namespace spinsim
