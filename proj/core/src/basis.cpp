#include "spinsim/basis.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace spinsim {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

std::shared_ptr<const SpinBasis> build_basis(int n_sites,
                                             std::optional<int> sector) {
  if (n_sites < 2 || n_sites % 2 != 0) {
    throw std::invalid_argument(
        "build_basis: both protocols require an even chain; got n_sites = " +
        std::to_string(n_sites));
  }
  if (n_sites > 28) {
    throw std::invalid_argument(
        "build_basis: n_sites > 28 exceeds the supported state width");
  }

  auto basis = std::shared_ptr<SpinBasis>(new SpinBasis());
  basis->n_sites_ = n_sites;
  basis->sector_ = sector;

  if (sector) {
    const int sz = *sector;
    if (std::abs(sz) > n_sites || (sz + n_sites) % 2 != 0) {
      throw std::invalid_argument(
          "build_basis: infeasible sector " + std::to_string(sz) +
          " for n_sites = " + std::to_string(n_sites));
    }
    const int n_up = (n_sites + sz) / 2;
    basis->n_up_ = n_up;
    basis->states_.reserve(binomial(n_sites, n_up));
    if (n_up == 0) {
      basis->states_.push_back(0);
    } else {
      // Gosper's hack walks bitstrings of fixed popcount in ascending order.
      Bits s = (Bits{1} << n_up) - 1;
      const Bits limit = Bits{1} << n_sites;
      while (s < limit) {
        basis->states_.push_back(s);
        Bits c = s & -s;
        Bits r = s + c;
        if (r >= limit) break;
        s = (((r ^ s) >> 2) / c) | r;
      }
    }
    basis->choose_.assign(static_cast<std::size_t>(n_sites) * (n_up + 1), 0);
    for (int p = 0; p < n_sites; ++p)
      for (int k = 0; k <= n_up; ++k)
        basis->choose_[static_cast<std::size_t>(p) * (n_up + 1) + k] =
            binomial(p, k);
  } else {
    const std::size_t dim = std::size_t{1} << n_sites;
    basis->states_.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) basis->states_[i] = static_cast<Bits>(i);
  }
  return basis;
}

std::size_t SpinBasis::index_of(Bits s) const {
  if (s >> n_sites_) return npos;
  if (!sector_) return static_cast<std::size_t>(s);
  if (std::popcount(s) != n_up_) return npos;
  // Rank of s among equal-popcount bitstrings in ascending order: each set bit
  // at position p with k ones still unplaced admits C(p, k) smaller states.
  std::uint64_t rank = 0;
  int k = n_up_;
  for (int p = n_sites_ - 1; p >= 0 && k > 0; --p) {
    if ((s >> p) & 1u) {
      rank += choose_[static_cast<std::size_t>(p) * (n_up_ + 1) + k];
      --k;
    }
  }
  return static_cast<std::size_t>(rank);
}

}  // namespace spinsim
