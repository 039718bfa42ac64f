#pragma once

#include <cstdint>
#include <vector>

#include "spinsim/hamiltonian.hpp"

namespace spinsim {

/// Strengths of the three disorder channels plus ensemble bookkeeping.
/// delta: half-width of the uniform static exchange disorder; eta: white
/// coupling-noise strength; b_nuc: per-component standard deviation of the
/// frozen random fields (units of J, with the field entering as B.sigma).
struct DisorderSpec {
  double delta = 0.0;
  double eta = 0.0;
  double b_nuc = 0.0;
  int n_realizations = 100;
  std::uint64_t master_seed = 0;

  bool any_disorder() const { return delta > 0.0 || eta > 0.0 || b_nuc > 0.0; }
};

/// One frozen draw of the quasi-static channels plus the seed for the
/// time-dependent white-noise stream. `eta` is carried so the stream can be
/// generated without the originating spec.
struct DisorderRealization {
  std::vector<double> static_eps;  // one per bond, in [-delta, delta]
  FieldConfig fields;              // per-site random field, frozen
  std::uint64_t noise_seed = 0;
  int index = 0;
  double eta = 0.0;
};

/// Draw realization `index` of the ensemble described by `spec`. Each index
/// has its own deterministic substream of the master seed, so realizations
/// are reproducible independently of evaluation order or worker count.
DisorderRealization sample_realization(const DisorderSpec& spec, int n_sites,
                                       int index);

/// White-noise draws for one integration step: i.i.d. Normal(0, eta^2) per
/// bond, generated counter-style from (noise_seed, step_index, bond) so the
/// same query always returns the same values.
std::vector<double> white_noise_at(const DisorderRealization& realization,
                                   std::uint64_t step_index, int n_bonds);

}  // namespace spinsim
