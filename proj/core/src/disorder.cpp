#include "spinsim/disorder.hpp"

#include <stdexcept>

#include "spinsim/rng.hpp"

namespace spinsim {

namespace {
// Substream tags so the channels of one realization never overlap.
constexpr std::uint64_t kStreamStatic = 1;
constexpr std::uint64_t kStreamFields = 2;
constexpr std::uint64_t kStreamNoise = 3;
}  // namespace

DisorderRealization sample_realization(const DisorderSpec& spec, int n_sites,
                                       int index) {
  if (n_sites < 2) {
    throw std::invalid_argument("sample_realization: need at least 2 sites");
  }
  if (index < 0 || index >= spec.n_realizations) {
    throw std::invalid_argument(
        "sample_realization: index out of range for the ensemble");
  }
  if (spec.delta < 0.0 || spec.eta < 0.0 || spec.b_nuc < 0.0) {
    throw std::invalid_argument(
        "sample_realization: disorder strengths must be non-negative");
  }
  DisorderRealization out;
  out.index = index;
  out.eta = spec.eta;
  out.noise_seed = rng::derive(spec.master_seed, static_cast<std::uint64_t>(index),
                               kStreamNoise);

  const int nb = n_sites - 1;
  out.static_eps.assign(static_cast<std::size_t>(nb), 0.0);
  if (spec.delta > 0.0) {
    rng::SplitMix64 g(rng::derive(spec.master_seed,
                                  static_cast<std::uint64_t>(index),
                                  kStreamStatic));
    for (int k = 0; k < nb; ++k) {
      out.static_eps[static_cast<std::size_t>(k)] =
          rng::uniform_sym(g, spec.delta);
    }
  }

  out.fields = FieldConfig::zeros(n_sites);
  if (spec.b_nuc > 0.0) {
    rng::SplitMix64 g(rng::derive(spec.master_seed,
                                  static_cast<std::uint64_t>(index),
                                  kStreamFields));
    for (int site = 0; site < n_sites; ++site) {
      for (int c = 0; c < 3; ++c) {
        out.fields.b[static_cast<std::size_t>(site)][static_cast<std::size_t>(c)] =
            spec.b_nuc * rng::gaussian(g);
      }
    }
  }
  return out;
}

std::vector<double> white_noise_at(const DisorderRealization& realization,
                                   std::uint64_t step_index, int n_bonds) {
  std::vector<double> eps(static_cast<std::size_t>(n_bonds), 0.0);
  if (realization.eta <= 0.0) return eps;
  for (int k = 0; k < n_bonds; ++k) {
    rng::SplitMix64 g(rng::derive(realization.noise_seed, step_index,
                                  static_cast<std::uint64_t>(k)));
    eps[static_cast<std::size_t>(k)] = realization.eta * rng::gaussian(g);
  }
  return eps;
}

}  // namespace spinsim
