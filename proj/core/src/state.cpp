#include "spinsim/state.hpp"

#include <cmath>
#include <stdexcept>

#include "spinsim/rng.hpp"

namespace spinsim {

namespace {

void require_same_basis(const StateVector& a, const StateVector& b,
                        const char* who) {
  if (!a.basis || !b.basis || a.basis->n_sites() != b.basis->n_sites() ||
      a.basis->sector() != b.basis->sector() ||
      a.basis->dimension() != b.basis->dimension()) {
    throw std::invalid_argument(std::string(who) + ": basis mismatch");
  }
}

}  // namespace

double StateVector::norm() const {
  double s = 0.0;
  for (const Complex& a : amp) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  if (n < 1e-300) {
    throw std::runtime_error("StateVector::normalize: zero vector");
  }
  const double inv = 1.0 / n;
  for (Complex& a : amp) a *= inv;
}

Complex inner(const StateVector& a, const StateVector& b) {
  require_same_basis(a, b, "inner");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.amp.size(); ++i) {
    s += std::conj(a.amp[i]) * b.amp[i];
  }
  return s;
}

StateVector tensor_embed(const StateVector& part_a, const StateVector& part_b,
                         std::shared_ptr<const SpinBasis> target) {
  const int m = part_a.basis->n_sites();
  const int n_rest = part_b.basis->n_sites();
  if (!target || target->n_sites() != m + n_rest) {
    throw std::invalid_argument(
        "tensor_embed: target basis does not cover the combined sites");
  }
  StateVector out(std::move(target));
  double dropped = 0.0;
  const int shift = n_rest;  // part_a occupies the high bits (site 0 = MSB)
  for (std::size_t ia = 0; ia < part_a.amp.size(); ++ia) {
    const Complex ca = part_a.amp[ia];
    if (ca == Complex{0.0, 0.0}) continue;
    const Bits sa = part_a.basis->state(ia);
    for (std::size_t ib = 0; ib < part_b.amp.size(); ++ib) {
      const Complex cb = part_b.amp[ib];
      if (cb == Complex{0.0, 0.0}) continue;
      const Bits s = (sa << shift) | part_b.basis->state(ib);
      const std::size_t k = out.basis->index_of(s);
      if (k == SpinBasis::npos) {
        dropped += std::norm(ca * cb);
      } else {
        out.amp[k] += ca * cb;
      }
    }
  }
  if (dropped > 1e-12) {
    throw std::invalid_argument(
        "tensor_embed: product state has weight outside the target sector");
  }
  out.normalize();
  return out;
}

StateVector reindex(const StateVector& v,
                    std::shared_ptr<const SpinBasis> target) {
  if (!target || target->n_sites() != v.basis->n_sites()) {
    throw std::invalid_argument("reindex: site count mismatch");
  }
  StateVector out(std::move(target));
  for (std::size_t i = 0; i < v.amp.size(); ++i) {
    if (v.amp[i] == Complex{0.0, 0.0}) continue;
    const std::size_t k = out.basis->index_of(v.basis->state(i));
    if (k == SpinBasis::npos) {
      throw std::invalid_argument(
          "reindex: state has weight outside the target basis");
    }
    out.amp[k] = v.amp[i];
  }
  return out;
}

StateVector random_state(std::shared_ptr<const SpinBasis> basis,
                         std::uint64_t seed) {
  StateVector v(std::move(basis));
  rng::SplitMix64 gen(rng::derive(seed, 0x5eed5eedULL));
  for (Complex& a : v.amp) {
    const double re = rng::gaussian(gen);
    const double im = rng::gaussian(gen);
    a = Complex{re, im};
  }
  v.normalize();
  return v;
}

}  // namespace spinsim
