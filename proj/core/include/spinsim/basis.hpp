#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace spinsim {

/// Basis states are bitstrings: bit value 1 = spin up, and site 0 occupies the
/// most significant bit, so an N-site state |s0 s1 ... s_{N-1}> reads
/// left-to-right in the binary expansion of the stored integer.
using Bits = std::uint32_t;

std::uint64_t binomial(int n, int k);

/// Computational basis of an open spin-1/2 chain, optionally restricted to a
/// total-Sz sector (sector value = n_up - n_down, i.e. total sigma^z).
/// Immutable after construction; freely shared across threads.
class SpinBasis {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  int n_sites() const { return n_sites_; }
  std::optional<int> sector() const { return sector_; }
  std::size_t dimension() const { return states_.size(); }

  /// States in strictly ascending bitstring order.
  const std::vector<Bits>& states() const { return states_; }
  Bits state(std::size_t i) const { return states_[i]; }

  /// Ordinal of a bitstring, or npos when it lies outside the basis.
  std::size_t index_of(Bits s) const;

  bool spin_up(Bits s, int site) const {
    return (s >> (n_sites_ - 1 - site)) & 1u;
  }
  Bits flipped(Bits s, int site) const {
    return s ^ (Bits{1} << (n_sites_ - 1 - site));
  }

  friend std::shared_ptr<const SpinBasis> build_basis(int, std::optional<int>);

 private:
  SpinBasis() = default;

  int n_sites_ = 0;
  std::optional<int> sector_;
  std::vector<Bits> states_;
  // binomial table for combinatorial ranking in sector bases:
  // choose_[p * (n_up+1) + k] = C(p, k)
  std::vector<std::uint64_t> choose_;
  int n_up_ = -1;
};

/// Enumerates the basis of an n_sites chain. Both protocols operate on even
/// chains, so odd n_sites is rejected. A sector value must satisfy
/// |sector| <= n_sites and sector == n_sites (mod 2).
std::shared_ptr<const SpinBasis> build_basis(
    int n_sites, std::optional<int> sector = std::nullopt);

}  // namespace spinsim
