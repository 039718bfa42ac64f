#include "spinsim/state.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "spinsim/protocols.hpp"

namespace {

using spinsim::build_basis;
using spinsim::Complex;
using spinsim::inner;
using spinsim::pair_state;
using spinsim::Payload;
using spinsim::random_state;
using spinsim::reindex;
using spinsim::StateVector;
using spinsim::tensor_embed;

constexpr double kInvSqrt2 = 0.70710678118654752440;

TEST(StateVector, NormAndNormalize) {
  auto basis = build_basis(2);
  StateVector v(basis);
  v.amp[0] = Complex{3.0, 0.0};
  v.amp[3] = Complex{0.0, 4.0};
  EXPECT_DOUBLE_EQ(v.norm(), 5.0);
  v.normalize();
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);

  StateVector zero(basis);
  EXPECT_THROW(zero.normalize(), std::runtime_error);
}

TEST(StateVector, InnerConjugatesFirstArgument) {
  auto basis = build_basis(2);
  StateVector a(basis), b(basis);
  a.amp[1] = Complex{0.0, 1.0};
  b.amp[1] = Complex{1.0, 0.0};
  const Complex ab = inner(a, b);
  EXPECT_DOUBLE_EQ(ab.real(), 0.0);
  EXPECT_DOUBLE_EQ(ab.imag(), -1.0);

  auto other = build_basis(4, 0);
  StateVector c(other);
  EXPECT_THROW(inner(a, c), std::invalid_argument);
}

TEST(PairStates, AmplitudesAndOrthogonality) {
  const StateVector t = pair_state(Payload::Triplet);
  const StateVector s = pair_state(Payload::Singlet);
  // Index 2 = |up,down>, index 1 = |down,up>.
  EXPECT_NEAR(t.amp[2].real(), kInvSqrt2, 1e-15);
  EXPECT_NEAR(t.amp[1].real(), kInvSqrt2, 1e-15);
  EXPECT_NEAR(s.amp[2].real(), kInvSqrt2, 1e-15);
  EXPECT_NEAR(s.amp[1].real(), -kInvSqrt2, 1e-15);
  EXPECT_NEAR(std::abs(inner(t, s)), 0.0, 1e-15);

  const StateVector sup = pair_state(Payload::Superposition);
  EXPECT_NEAR(std::abs(inner(sup, t)), kInvSqrt2, 1e-12);
  EXPECT_NEAR(std::abs(inner(sup, s)), kInvSqrt2, 1e-12);
}

TEST(TensorEmbed, SingletPairProductAmplitudes) {
  auto target = build_basis(4, 0);
  const StateVector s = pair_state(Payload::Singlet);
  const StateVector v = tensor_embed(s, s, target);

  const auto idx = [&](spinsim::Bits b) { return target->index_of(b); };
  // (|10> - |01>)/sqrt2 tensor (|10> - |01>)/sqrt2: four components +-1/2.
  EXPECT_NEAR(v.amp[idx(0b1010)].real(), 0.5, 1e-15);
  EXPECT_NEAR(v.amp[idx(0b1001)].real(), -0.5, 1e-15);
  EXPECT_NEAR(v.amp[idx(0b0110)].real(), -0.5, 1e-15);
  EXPECT_NEAR(v.amp[idx(0b0101)].real(), 0.5, 1e-15);
  EXPECT_NEAR(v.norm(), 1.0, 1e-14);
}

TEST(TensorEmbed, PlacementMatchesSiteOrder) {
  // Put |up,down> on the left pair and |down,up> on the right pair; the
  // combined bitstring must read left-to-right.
  auto target = build_basis(4);
  StateVector left(build_basis(2));
  left.amp[2] = 1.0;  // |10>
  StateVector right(build_basis(2));
  right.amp[1] = 1.0;  // |01>
  const StateVector v = tensor_embed(left, right, target);
  for (std::size_t i = 0; i < v.amp.size(); ++i) {
    EXPECT_NEAR(std::abs(v.amp[i]), i == 0b1001 ? 1.0 : 0.0, 1e-15) << i;
  }
}

TEST(TensorEmbed, RejectsWeightOutsideSector) {
  auto target = build_basis(4, 0);
  StateVector up_pair(build_basis(2));
  up_pair.amp[3] = 1.0;  // |11>, total magnetization +2
  const StateVector s = pair_state(Payload::Singlet);
  EXPECT_THROW(tensor_embed(up_pair, s, target), std::invalid_argument);
}

TEST(Reindex, SectorIntoFullIsLossless) {
  auto sector = build_basis(6, 0);
  auto full = build_basis(6);
  const StateVector v = random_state(sector, 42);
  const StateVector w = reindex(v, full);
  EXPECT_NEAR(w.norm(), 1.0, 1e-12);
  for (std::size_t i = 0; i < sector->dimension(); ++i) {
    const auto j = full->index_of(sector->state(i));
    EXPECT_EQ(w.amp[j], v.amp[i]);
  }
  // and back
  const StateVector v2 = reindex(w, sector);
  for (std::size_t i = 0; i < sector->dimension(); ++i) {
    EXPECT_EQ(v2.amp[i], v.amp[i]);
  }
}

TEST(Reindex, RejectsAmplitudeOutsideTarget) {
  auto full = build_basis(4);
  auto sector = build_basis(4, 0);
  StateVector v(full);
  v.amp[full->index_of(0b1110)] = 1.0;
  EXPECT_THROW(reindex(v, sector), std::invalid_argument);
}

TEST(RandomState, SeededAndNormalized) {
  auto basis = build_basis(6, 0);
  const StateVector a = random_state(basis, 7);
  const StateVector b = random_state(basis, 7);
  const StateVector c = random_state(basis, 8);
  EXPECT_NEAR(a.norm(), 1.0, 1e-12);
  for (std::size_t i = 0; i < a.amp.size(); ++i) EXPECT_EQ(a.amp[i], b.amp[i]);
  EXPECT_LT(std::abs(inner(a, c)), 0.9);
}

}  // namespace
