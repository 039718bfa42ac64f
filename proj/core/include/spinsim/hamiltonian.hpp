#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "spinsim/basis.hpp"
#include "spinsim/sparse_operator.hpp"

namespace spinsim {

/// Bond couplings J_k (units of J). Entry k (0-based storage) is the coupling
/// on the bond between sites k and k+1, i.e. J_{k+1} in the 1-based
/// convention of the ramp formulas.
struct CouplingProfile {
  std::vector<double> j;

  std::size_t n_bonds() const { return j.size(); }
};

enum class RampKind { GroundPrep, Transfer };

/// Time-dependent coupling schedule: which bonds ramp and over what time.
/// All couplings are expressed in units of the base exchange J (j_base = 1).
struct RampSchedule {
  RampKind kind = RampKind::GroundPrep;
  int n_sites = 0;
  double ramp_time = 1.0;  // T, units 1/J
  double j_base = 1.0;
};

/// Per-site magnetic field three-vectors (B_x, B_y, B_z), units of J·hbar.
struct FieldConfig {
  std::vector<std::array<double, 3>> b;

  static FieldConfig zeros(int n_sites) {
    FieldConfig f;
    f.b.assign(static_cast<std::size_t>(n_sites), {0.0, 0.0, 0.0});
    return f;
  }
  bool any_nonzero() const {
    for (const auto& v : b)
      if (v[0] != 0.0 || v[1] != 0.0 || v[2] != 0.0) return true;
    return false;
  }
  bool any_transverse() const {
    for (const auto& v : b)
      if (v[0] != 0.0 || v[1] != 0.0) return true;
    return false;
  }
};

/// Couplings at time t: the ramp value per bond, each multiplied by
/// exp(-(eps_static + eps_noise)). Ground-state preparation ramps every even
/// bond (1-based) from 0 to 1; transfer ramps bond 2 up and bond N-2 down.
/// The ramp saturates at t = T. Empty eps spans mean no disorder.
CouplingProfile couplings_at(const RampSchedule& schedule, double t,
                             std::span<const double> static_eps = {},
                             std::span<const double> noise_eps = {});

/// Reusable H(t) builder with a fixed sparsity pattern.
///
/// The exchange part changes every time step while the pattern (which states
/// connect to which) depends only on the basis, and the field part is frozen
/// for a whole realization. The assembler therefore precomputes the pattern
/// plus, per matrix entry, where its value comes from: the diagonal (a signed
/// sum of all bond couplings plus the longitudinal field), a bond flip term
/// (value 2 J_k), or a transverse field flip (value fixed at construction).
/// update() then rewrites only coupling-dependent values in place.
class HamiltonianAssembler {
 public:
  HamiltonianAssembler(std::shared_ptr<const SpinBasis> basis,
                       const FieldConfig& fields);

  /// Rewrite the operator's values for the given couplings and return it.
  const SparseOperator& update(const CouplingProfile& profile);

  const SparseOperator& op() const { return op_; }
  int n_bonds() const { return n_bonds_; }

 private:
  SparseOperator op_;
  int n_bonds_ = 0;
  // Per (row, bond): +1 if the bond's two spins are aligned in that basis
  // state, -1 otherwise. Row-major, dim x n_bonds.
  std::vector<std::int8_t> align_;
  // Longitudinal field contribution to each diagonal entry (frozen).
  std::vector<double> diag_field_;
  // Per nonzero: -1 diagonal, -2 frozen field flip, k >= 0 exchange flip on
  // bond k.
  std::vector<std::int32_t> src_;
};

/// H = sum_k J_k sigma_k . sigma_{k+1} + sum_k B_k . sigma_k  (Pauli form).
///
/// sigma.sigma on a bond contributes +1 (aligned) / -1 (anti-aligned) to the
/// diagonal and 2 J_k between |up,down> and |down,up>. B.sigma contributes
/// +/- B_z to the diagonal and B_x -/+ i B_y on single-spin flips. Transverse
/// field components require a full (sector-free) basis.
SparseOperator build_hamiltonian(std::shared_ptr<const SpinBasis> basis,
                                 const CouplingProfile& profile,
                                 const FieldConfig& fields);

}  // namespace spinsim
