#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "support/random.hpp"
#include "tpskit/examples.hpp"
#include "tpskit/refactor.hpp"

namespace tpskit {
namespace {

using testing::Rng;

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidInput;
}

// Rank of the k x l coefficient grid, solved and decomposed independently of the library.
Index oracle_rank(const ComplexMatrix& w, const Tps& t) {
  const Eigen::VectorXcd c = t.basis().fullPivLu().solve(w.col(0));
  ComplexMatrix grid(t.k(), t.l());
  for (Index j = 0; j < t.k(); ++j)
    for (Index i = 0; i < t.l(); ++i) grid(j, i) = c[j * t.l() + i];
  Eigen::JacobiSVD<ComplexMatrix> svd(grid);
  const auto& s = svd.singularValues();
  Index rank = 0;
  for (Index a = 0; a < s.size(); ++a)
    if (s[a] > 1e-9 * s[0]) ++rank;
  return rank;
}

ComplexMatrix unit_state(Index n, Index p) {
  ComplexMatrix e = ComplexMatrix::Zero(n, 1);
  e(p, 0) = 1.0;
  return e;
}

std::pair<Index, Index> shape_for(Index n) {
  switch (n) {
    case 4: return {2, 2};
    case 6: return {2, 3};
    case 9: return {3, 3};
    case 12: return {3, 4};
    default: return {4, 4};
  }
}

TEST(BasisProduct, BellBasis) {
  const BellStates b = bell_states();
  ComplexMatrix basis(4, 4);
  basis << b.psi_plus, b.psi_minus, b.phi_plus, b.phi_minus;
  const Tps t = tps_making_basis_product(basis, 2, 2);
  for (Index c = 0; c < 4; ++c) EXPECT_TRUE(is_product(basis.col(c), t));
  EXPECT_TRUE(is_inner_product_compatible(t));
}

TEST(BasisProduct, StandardBasisIsGodGiven) {
  const Tps t = tps_making_basis_product(ComplexMatrix::Identity(4, 4), 2, 2);
  EXPECT_EQ(t.basis(), Tps::god_given(2, 2).basis());
}

TEST(BasisProduct, RandomInvertibleSix) {
  Rng rng(50);
  const ComplexMatrix basis = testing::random_invertible(6, rng);
  const Tps t = tps_making_basis_product(basis, 2, 3);
  for (Index c = 0; c < 6; ++c) {
    EXPECT_TRUE(is_product(basis.col(c), t));
    EXPECT_EQ(oracle_rank(basis.col(c), t), 1);
  }
  EXPECT_FALSE(is_inner_product_compatible(t));
}

TEST(BasisProduct, Errors) {
  EXPECT_EQ(kind_of([] { tps_making_basis_product(ComplexMatrix::Identity(5, 5), 2, 2); }),
            ErrorKind::NonCompositeDim);
  EXPECT_EQ(kind_of([] { tps_making_basis_product(ComplexMatrix::Identity(6, 6), 2, 2); }),
            ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] { tps_making_basis_product(ComplexMatrix::Identity(4, 3), 2, 2); }),
            ErrorKind::DimensionMismatch);
  ComplexMatrix singular = ComplexMatrix::Identity(4, 4);
  singular.col(3) = singular.col(2);
  EXPECT_EQ(kind_of([&] { tps_making_basis_product(singular, 2, 2); }),
            ErrorKind::SingularBasis);
  // one trivial factor is allowed even for a prime dimension
  EXPECT_TRUE(tps_making_basis_product(ComplexMatrix::Identity(5, 5), 1, 5).trivial());
}

TEST(StateProduct, Examples) {
  const BellStates b = bell_states();
  const Tps t = tps_making_state_product(b.psi_plus, 2, 2, true);
  EXPECT_EQ(schmidt(b.psi_plus, t).rank, 1u);
  EXPECT_TRUE(is_inner_product_compatible(t));

  const Tps e = tps_making_state_product(unit_state(4, 0), 2, 2, false);
  EXPECT_TRUE(is_product(unit_state(4, 0), e));
  EXPECT_EQ(e.basis(), Tps::god_given(2, 2).basis());
}

TEST(StateProduct, Errors) {
  EXPECT_EQ(kind_of([] { tps_making_state_product(ComplexMatrix::Zero(4, 1), 2, 2, false); }),
            ErrorKind::ZeroState);
  EXPECT_EQ(kind_of([] { tps_making_state_product(unit_state(7, 0), 2, 2, true); }),
            ErrorKind::NonCompositeDim);
  EXPECT_EQ(kind_of([] { tps_making_state_product(ComplexMatrix::Ones(4, 2), 2, 2, true); }),
            ErrorKind::DimensionMismatch);
}

TEST(StateEntangled, Examples) {
  const Tps t = tps_making_state_entangled(unit_state(4, 0), 2, 2, false);
  EXPECT_EQ(schmidt(unit_state(4, 0), t).rank, 2u);
  EXPECT_EQ(oracle_rank(unit_state(4, 0), t), 2);

  const BellStates b = bell_states();
  for (bool orthonormal : {false, true}) {
    const Tps u = tps_making_state_entangled(b.psi_plus, 2, 2, orthonormal);
    EXPECT_EQ(schmidt(b.psi_plus, u).rank, 2u);
    EXPECT_EQ(is_inner_product_compatible(u), orthonormal);
  }
  EXPECT_EQ(schmidt(b.psi_plus, Tps::god_given(2, 2)).rank, 2u);
}

TEST(StateEntangled, Errors) {
  EXPECT_EQ(kind_of([] { tps_making_state_entangled(unit_state(4, 0), 1, 4, false); }),
            ErrorKind::ShapeTooSmall);
  EXPECT_EQ(kind_of([] { tps_making_state_entangled(ComplexMatrix::Zero(4, 1), 2, 2, true); }),
            ErrorKind::ZeroState);
  EXPECT_EQ(kind_of([] { tps_making_state_entangled(unit_state(5, 1), 2, 2, false); }),
            ErrorKind::NonCompositeDim);
}

TEST(DualVerdict, Examples) {
  const BellStates b = bell_states();
  const DualVerdict v = dual_verdict(b.psi_plus, 2, 2, true);
  EXPECT_TRUE(is_product(b.psi_plus, v.product_tps));
  EXPECT_FALSE(is_product(b.psi_plus, v.entangled_tps));

  const DualVerdict e = dual_verdict(unit_state(4, 0), 2, 2);
  EXPECT_TRUE(tps_equivalent(e.product_tps, Tps::god_given(2, 2)).equivalent);
  EXPECT_FALSE(is_product(unit_state(4, 0), e.entangled_tps));
  EXPECT_EQ(kind_of([] { dual_verdict(unit_state(4, 0), 4, 1); }), ErrorKind::ShapeTooSmall);
}

TEST(IsPrime, Small) {
  const std::vector<Index> primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
  for (Index n = 0; n < 32; ++n)
    EXPECT_EQ(is_prime(n), std::find(primes.begin(), primes.end(), n) != primes.end()) << n;
}

TEST(RefactorProperties, RanksAcrossDimensions) {
  Rng rng(51);
  const std::vector<Index> dims = {4, 6, 9, 12, 16};
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = dims[trial % dims.size()];
    const auto [k, l] = shape_for(n);
    const bool orthonormal = trial % 2 == 1;
    ComplexMatrix w = testing::random_vector(n, rng);
    // sparse states exercise the non-parallel unit vector search
    if (trial % 5 == 4)
      for (Index a = 0; a + 1 < n; ++a) w(a, 0) = 0.0;
    const Tps p = tps_making_state_product(w, k, l, orthonormal);
    const Tps e = tps_making_state_entangled(w, k, l, orthonormal);
    EXPECT_EQ(schmidt(w, p).rank, 1u) << "trial " << trial;
    EXPECT_EQ(schmidt(w, e).rank, 2u) << "trial " << trial;
    EXPECT_EQ(oracle_rank(w, p), 1) << "trial " << trial;
    EXPECT_EQ(oracle_rank(w, e), 2) << "trial " << trial;
    if (orthonormal) {
      EXPECT_TRUE(is_inner_product_compatible(p));
      EXPECT_TRUE(is_inner_product_compatible(e));
    }
  }
}

TEST(RefactorProperties, BasisPreservedExactly) {
  Rng rng(52);
  for (const Index n : {4, 6, 9}) {
    const auto [k, l] = shape_for(n);
    const ComplexMatrix basis = testing::random_invertible(n, rng);
    const Tps t = tps_making_basis_product(basis, k, l);
    for (Index c = 0; c < n; ++c)
      for (Index r = 0; r < n; ++r) EXPECT_EQ(t.basis()(r, c), basis(r, c));
  }
}

TEST(RefactorProperties, DualStructuresNeverEquivalent) {
  Rng rng(53);
  const std::vector<Index> dims = {4, 6, 9, 12, 16};
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = dims[trial % dims.size()];
    const auto [k, l] = shape_for(n);
    const ComplexMatrix w = testing::random_vector(n, rng);
    const DualVerdict v = dual_verdict(w, k, l, trial % 2 == 0);
    EXPECT_TRUE(is_product(w, v.product_tps));
    EXPECT_FALSE(is_product(w, v.entangled_tps));
    EXPECT_FALSE(tps_equivalent(v.product_tps, v.entangled_tps).equivalent) << "trial " << trial;
  }
}

}  // namespace
}  // namespace tpskit
