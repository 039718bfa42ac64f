#include "spinsim/protocols.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace spinsim {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
}  // namespace

StateVector pair_state(Payload p) {
  auto basis = build_basis(2, std::nullopt);
  StateVector v(basis);
  // States are sorted by bitstring value: 00, 01, 10, 11. Site 0 is the
  // high bit, so |up down> = 0b10 (index 2) and |down up> = 0b01 (index 1).
  switch (p) {
    case Payload::Triplet:
      v.amp[2] = kInvSqrt2;
      v.amp[1] = kInvSqrt2;
      break;
    case Payload::Singlet:
      v.amp[2] = kInvSqrt2;
      v.amp[1] = -kInvSqrt2;
      break;
    case Payload::Superposition:
      // (psi- + psi+)/sqrt(2) = |up down>
      v.amp[2] = 1.0;
      break;
  }
  return v;
}

StateVector dimer_ground_state(std::shared_ptr<const SpinBasis> basis) {
  const int n = basis->n_sites();
  StateVector v(basis);
  const double pair_amp = std::pow(kInvSqrt2, n / 2);
  for (std::size_t i = 0; i < basis->dimension(); ++i) {
    const Bits s = basis->state(i);
    double amp = pair_amp;
    bool nonzero = true;
    for (int p = 0; p < n; p += 2) {
      const bool up_l = basis->spin_up(s, p);
      const bool up_r = basis->spin_up(s, p + 1);
      if (up_l == up_r) {
        nonzero = false;
        break;
      }
      if (!up_l) amp = -amp;  // |down up> carries the minus sign
    }
    if (nonzero) v.amp[i] = amp;
  }
  return v;
}

StateVector uniform_ground_state(std::shared_ptr<const SpinBasis> basis,
                                 const LanczosOptions& opts) {
  const int n = basis->n_sites();
  std::shared_ptr<const SpinBasis> sector_basis =
      (basis->sector() && *basis->sector() == 0) ? basis : build_basis(n, 0);
  CouplingProfile profile;
  profile.j.assign(static_cast<std::size_t>(n - 1), 1.0);
  const SparseOperator h =
      build_hamiltonian(sector_basis, profile, FieldConfig::zeros(n));
  SpectralResult res = ground_state(h, opts);
  StateVector& gs = res.states.front();
  if (sector_basis.get() == basis.get()) return std::move(gs);
  return reindex(gs, basis);
}

ProtocolStates protocol_states(std::shared_ptr<const SpinBasis> basis,
                               RampKind kind, Payload payload,
                               const LanczosOptions& opts) {
  if (basis->sector() && *basis->sector() != 0) {
    throw std::invalid_argument(
        "protocol_states: basis must use sector 0 or the full space");
  }
  ProtocolStates out{StateVector(basis), StateVector(basis)};
  if (kind == RampKind::GroundPrep) {
    out.initial = dimer_ground_state(basis);
    out.target = uniform_ground_state(basis, opts);
    return out;
  }
  const int n = basis->n_sites();
  if (n < 6) {
    throw std::invalid_argument(
        "protocol_states: transfer needs at least 6 sites");
  }
  const StateVector pair = pair_state(payload);
  std::shared_ptr<const SpinBasis> chain_basis = build_basis(n - 2, 0);
  const StateVector chain = uniform_ground_state(chain_basis, opts);
  out.initial = tensor_embed(pair, chain, basis);
  out.target = tensor_embed(chain, pair, basis);
  return out;
}

}  // namespace spinsim
