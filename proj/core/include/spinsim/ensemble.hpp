#pragma once

#include <vector>

#include "spinsim/disorder.hpp"
#include "spinsim/evolve.hpp"
#include "spinsim/protocols.hpp"

namespace spinsim {

/// What to run for each realization of a disorder ensemble.
struct ProtocolSpec {
  RampKind kind = RampKind::GroundPrep;
  int n_sites = 10;
  double ramp_time = 2.9;
  Payload payload = Payload::Triplet;
  /// End of the simulated window. Negative means "ramp_time" for ground-state
  /// preparation and "ramp_time + 5" for transfer (to capture the post-ramp
  /// fidelity oscillations).
  double t_end = -1.0;

  double resolved_t_end() const {
    if (t_end >= 0.0) return t_end;
    return kind == RampKind::Transfer ? ramp_time + 5.0 : ramp_time;
  }
};

/// Ensemble statistics of F(T) and (for runs with a post-ramp window) of the
/// windowed peak fidelity. Per-realization values are stored by realization
/// index, so results are identical regardless of how many workers ran them.
struct EnsembleStats {
  double mean_fidelity = 0.0;
  double std_error = 0.0;
  double mean_peak = 0.0;
  double peak_std_error = 0.0;
  std::vector<double> fidelities;
  std::vector<double> peaks;
};

/// Run `disorder.n_realizations` independent trajectories of `protocol`,
/// each with its own deterministic disorder draw, and aggregate. The target
/// is always the disorder-free one. Realizations are dispatched to
/// `n_workers` threads (0 = hardware concurrency); any trajectory failure
/// aborts the ensemble, reporting the failing realization index.
EnsembleStats run_ensemble(const ProtocolSpec& protocol,
                           const DisorderSpec& disorder,
                           const PropagatorConfig& cfg, int n_workers = 0);

}  // namespace spinsim
