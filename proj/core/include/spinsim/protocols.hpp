#pragma once

#include <memory>

#include "spinsim/basis.hpp"
#include "spinsim/hamiltonian.hpp"
#include "spinsim/spectral.hpp"
#include "spinsim/state.hpp"

namespace spinsim {

/// Two-spin payload for the transfer protocol. Triplet and singlet are
/// (|ud> +/- |du>)/sqrt(2); the equal superposition (psi- + psi+)/sqrt(2)
/// reduces to |ud>.
enum class Payload { Triplet, Singlet, Superposition };

/// The payload on its own 2-site basis (full, dimension 4).
StateVector pair_state(Payload p);

/// Product of nearest-neighbor singlets on sites (0,1), (2,3), ...: the
/// exact ground state of the dimerized chain (couplings 1,0,1,0,...), which
/// is the ground-state-preparation initial state.
StateVector dimer_ground_state(std::shared_ptr<const SpinBasis> basis);

/// Ground state of the uniform chain (all couplings 1, no fields) expressed
/// on `basis`. Computed in the Sz = 0 sector and reindexed, since the global
/// ground state of the even isotropic chain is a total singlet.
StateVector uniform_ground_state(std::shared_ptr<const SpinBasis> basis,
                                 const LanczosOptions& opts = {});

struct ProtocolStates {
  StateVector initial;
  StateVector target;
};

/// Initial and target states for a protocol on `basis` (which must have
/// either sector 0 or no sector restriction). GroundPrep: dimer product ->
/// uniform ground state. Transfer: payload pair on sites (0,1) tensor the
/// uniform (N-2)-chain ground state -> same with the payload on the last
/// pair. Targets are always the disorder-free ones.
ProtocolStates protocol_states(std::shared_ptr<const SpinBasis> basis,
                               RampKind kind, Payload payload = Payload::Triplet,
                               const LanczosOptions& opts = {});

}  // namespace spinsim
