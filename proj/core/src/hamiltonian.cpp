#include "spinsim/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinsim {

CouplingProfile couplings_at(const RampSchedule& schedule, double t,
                             std::span<const double> static_eps,
                             std::span<const double> noise_eps) {
  if (t < 0.0) {
    throw std::invalid_argument("couplings_at: negative time");
  }
  if (schedule.n_sites < 2) {
    throw std::invalid_argument("couplings_at: schedule needs >= 2 sites");
  }
  const int nb = schedule.n_sites - 1;
  if (!static_eps.empty() && static_eps.size() != static_cast<std::size_t>(nb)) {
    throw std::invalid_argument("couplings_at: static_eps length mismatch");
  }
  if (!noise_eps.empty() && noise_eps.size() != static_cast<std::size_t>(nb)) {
    throw std::invalid_argument("couplings_at: noise_eps length mismatch");
  }
  const double r = std::min(t, schedule.ramp_time) / schedule.ramp_time;
  CouplingProfile p;
  p.j.assign(static_cast<std::size_t>(nb), schedule.j_base);
  if (schedule.kind == RampKind::GroundPrep) {
    // 1-based bond index k: odd bonds stay at 1, even bonds ramp 0 -> 1.
    for (int k = 2; k <= nb; k += 2) p.j[k - 1] = schedule.j_base * r;
  } else {
    // Bond 2 ramps up, bond N-2 ramps down, everything else stays at 1.
    p.j[1] = schedule.j_base * r;
    p.j[schedule.n_sites - 3] = schedule.j_base * (1.0 - r);
  }
  for (int k = 0; k < nb; ++k) {
    double eps = 0.0;
    if (!static_eps.empty()) eps += static_eps[k];
    if (!noise_eps.empty()) eps += noise_eps[k];
    if (eps != 0.0) p.j[k] *= std::exp(-eps);
  }
  return p;
}

HamiltonianAssembler::HamiltonianAssembler(
    std::shared_ptr<const SpinBasis> basis, const FieldConfig& fields) {
  const int n = basis->n_sites();
  n_bonds_ = n - 1;
  if (fields.b.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("HamiltonianAssembler: field count mismatch");
  }
  const bool transverse = fields.any_transverse();
  if (transverse && basis->sector().has_value()) {
    throw std::invalid_argument(
        "HamiltonianAssembler: transverse field components are incompatible "
        "with a sector-restricted basis (they change total Sz); use a full "
        "basis");
  }
  const std::size_t dim = basis->dimension();

  align_.resize(dim * static_cast<std::size_t>(n_bonds_));
  diag_field_.assign(dim, 0.0);

  struct Entry {
    std::uint32_t col;
    std::int32_t src;
    Complex frozen;
  };
  std::vector<Entry> row_entries;
  op_.basis_ = basis;
  op_.hermitian_ = true;
  op_.real_valued_ = !transverse;
  op_.row_ptr_.assign(dim + 1, 0);
  // Count first: diagonal + one entry per anti-aligned bond + one per
  // transverse-field site flip that stays in the basis.
  std::vector<Complex> frozen_vals;
  std::vector<std::uint32_t> cols;
  cols.reserve(dim * (static_cast<std::size_t>(n_bonds_) / 2 + 2));
  src_.reserve(cols.capacity());

  for (std::size_t i = 0; i < dim; ++i) {
    const Bits s = basis->state(i);
    row_entries.clear();
    double dfield = 0.0;
    for (int k = 0; k < n_bonds_; ++k) {
      const bool up1 = basis->spin_up(s, k);
      const bool up2 = basis->spin_up(s, k + 1);
      if (up1 == up2) {
        align_[i * n_bonds_ + k] = +1;
      } else {
        align_[i * n_bonds_ + k] = -1;
        const Bits f = basis->flipped(basis->flipped(s, k), k + 1);
        const std::size_t j = basis->index_of(f);
        row_entries.push_back(
            {static_cast<std::uint32_t>(j), k, Complex{0.0, 0.0}});
      }
    }
    for (int site = 0; site < n; ++site) {
      const auto& bf = fields.b[static_cast<std::size_t>(site)];
      const bool up = basis->spin_up(s, site);
      dfield += up ? bf[2] : -bf[2];
      if (bf[0] != 0.0 || bf[1] != 0.0) {
        // Row s, column f (= s with this site flipped): <s| B.sigma |f> is
        // B_x - i B_y when s is up at the site and B_x + i B_y when down.
        const Bits f = basis->flipped(s, site);
        const std::size_t j = basis->index_of(f);
        const Complex v = up ? Complex{bf[0], -bf[1]} : Complex{bf[0], bf[1]};
        row_entries.push_back({static_cast<std::uint32_t>(j), -2, v});
      }
    }
    diag_field_[i] = dfield;
    row_entries.push_back({static_cast<std::uint32_t>(i), -1, Complex{0.0, 0.0}});
    std::sort(row_entries.begin(), row_entries.end(),
              [](const Entry& a, const Entry& b) { return a.col < b.col; });
    for (const Entry& e : row_entries) {
      cols.push_back(e.col);
      src_.push_back(e.src);
      frozen_vals.push_back(e.frozen);
    }
    op_.row_ptr_[i + 1] = cols.size();
  }
  op_.col_ = std::move(cols);
  if (op_.real_valued_) {
    op_.rval_.assign(src_.size(), 0.0);
  } else {
    op_.cval_.assign(frozen_vals.begin(), frozen_vals.end());
  }
}

const SparseOperator& HamiltonianAssembler::update(
    const CouplingProfile& profile) {
  if (profile.j.size() != static_cast<std::size_t>(n_bonds_)) {
    throw std::invalid_argument("HamiltonianAssembler: profile length mismatch");
  }
  const std::size_t dim = op_.dim();
  const double* jv = profile.j.data();
  for (std::size_t i = 0; i < dim; ++i) {
    const std::int8_t* arow = align_.data() + i * n_bonds_;
    double diag = diag_field_[i];
    for (int k = 0; k < n_bonds_; ++k) {
      diag += (arow[k] > 0) ? jv[k] : -jv[k];
    }
    const std::uint64_t end = op_.row_ptr_[i + 1];
    if (op_.real_valued_) {
      for (std::uint64_t e = op_.row_ptr_[i]; e < end; ++e) {
        const std::int32_t src = src_[e];
        op_.rval_[e] = (src == -1) ? diag : 2.0 * jv[src];
      }
    } else {
      for (std::uint64_t e = op_.row_ptr_[i]; e < end; ++e) {
        const std::int32_t src = src_[e];
        if (src == -1) {
          op_.cval_[e] = Complex{diag, 0.0};
        } else if (src >= 0) {
          op_.cval_[e] = Complex{2.0 * jv[src], 0.0};
        }
        // src == -2: frozen field flip, written at construction.
      }
    }
  }
  return op_;
}

SparseOperator build_hamiltonian(std::shared_ptr<const SpinBasis> basis,
                                 const CouplingProfile& profile,
                                 const FieldConfig& fields) {
  if (profile.j.size() != static_cast<std::size_t>(basis->n_sites() - 1)) {
    throw std::invalid_argument(
        "build_hamiltonian: profile must have n_sites - 1 couplings");
  }
  HamiltonianAssembler assembler(std::move(basis), fields);
  return assembler.update(profile);
}

}  // namespace spinsim
