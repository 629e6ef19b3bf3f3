#pragma once

#include <vector>

#include "tpskit/algebra.hpp"
#include "tpskit/core.hpp"
#include "tpskit/tps.hpp"

namespace tpskit {

/// An ordered commuting pair (r, t), the candidate standard complete set.
/// `hermitian` selects the observable path (both self-adjoint).
class ObservablePair {
 public:
  /// Detects self-adjointness of both operators.
  ObservablePair(ComplexMatrix r, ComplexMatrix t, const Tolerance& tol = {});
  /// Forces the path; hermitian = true with a non-Hermitian input throws NotHermitian.
  ObservablePair(ComplexMatrix r, ComplexMatrix t, bool hermitian, const Tolerance& tol = {});

  const ComplexMatrix& r() const { return r_; }
  const ComplexMatrix& t() const { return t_; }
  bool hermitian() const { return hermitian_; }
  Index dim() const { return r_.rows(); }

  /// (t, r): the same pair with the roles of the factors exchanged.
  ObservablePair transposed() const;

 private:
  ComplexMatrix r_;
  ComplexMatrix t_;
  bool hermitian_ = false;
};

/// Eigenspace data of a standard complete set. Column j*l+i of `grid` is
/// the joint eigenvector for (r_eigenvalues[j], t_eigenvalues[i]), unit norm
/// with the largest entry real positive.
struct CharacteristicSets {
  Index k = 0;
  Index l = 0;
  std::vector<Complex> r_eigenvalues;  // k distinct clusters
  std::vector<Complex> t_eigenvalues;  // l distinct clusters
  std::vector<ComplexMatrix> M;        // l orthonormal bundles n x k, eigenspaces of t
  std::vector<ComplexMatrix> N;        // k orthonormal bundles n x l, eigenspaces of r
  ComplexMatrix grid;                  // n x n
};

/// Condition-number ceiling for eigenvector matrices on the non-Hermitian path.
inline constexpr double kMaxEigenvectorCondition = 1e6;

/// Principal-angle residual used when comparing characteristic subspaces.
inline constexpr double kSubspaceTolerance = 1e-10;

CharacteristicSets verify_standard_complete(const ObservablePair& p, const Tolerance& tol = {});

/// TPS whose standard basis is the joint eigenvector grid.
Tps tps_from_observables(const ObservablePair& p, const Tolerance& tol = {});

/// (r~, t) with t~ = t, r~ x_{0i} = l_0 x_{0i} and
/// r~ (x_{ji} + x_{j+1,i}) = l_{j+1} (x_{ji} + x_{j+1,i}) on the grid of cs.
ObservablePair complementary_pair(const ObservablePair& p, const CharacteristicSets& cs);

enum class ComplementaryCondition { None, MSets, NSets };

/// Which complementarity condition holds (M-sets checked first).
ComplementaryCondition complementary_condition(const ObservablePair& p1,
                                               const ObservablePair& p2,
                                               const Tolerance& tol = {});

bool verify_complementary(const ObservablePair& p1, const ObservablePair& p2,
                          const Tolerance& tol = {});

struct ComplementaryTpp {
  OperatorAlgebra a1;
  OperatorAlgebra a2;
  Tps tps;
};

/// The unique TPP containing r1, r2 in a1 and t1, t2 in a2, with its
/// synchronic basis as a TPS. Throws NotComplementary.
ComplementaryTpp tpp_from_complementary(const ObservablePair& p1, const ObservablePair& p2,
                                        const Tolerance& tol = {});

}  // namespace tpskit
