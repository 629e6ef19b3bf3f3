#pragma once

#include <memory>
#include <vector>

#include "tpskit/core.hpp"

namespace tpskit {

class Tps;
Tps swap_factors(const Tps& t);

/// A tensor product structure W = C^k (x) C^l on an n = k*l dimensional
/// space, stored as the invertible bundle of its standard basis vectors.
///
/// Column ordering is fixed: column j*l + i holds x_{ji}, the image of
/// (e_j, e_i), with j indexing the first factor and i the second. A vector
/// w with coefficient matrix C (k x l) is w = sum_{j,i} C(j,i) x_{ji}.
class Tps {
 public:
  /// Validates shape and invertibility (smallest singular value above
  /// rank_rel times the largest). Throws DimensionMismatch or SingularBasis.
  static Tps create(Index k, Index l, ComplexMatrix basis, const Tolerance& tol = {});

  /// The computational-basis structure: basis = identity.
  static Tps god_given(Index k, Index l);

  Index dim() const { return basis_.rows(); }
  Index k() const { return k_; }
  Index l() const { return l_; }
  const ComplexMatrix& basis() const { return basis_; }
  Index cell(Index j, Index i) const { return j * l_ + i; }

  /// Column x_{ji}.
  Eigen::VectorXcd vector(Index j, Index i) const { return basis_.col(cell(j, i)); }

  /// k == 1 or l == 1: every vector is a product vector.
  bool trivial() const { return k_ == 1 || l_ == 1; }

  /// Solves basis * c = w for each column of w.
  ComplexMatrix solve(const ComplexMatrix& w) const;

 private:
  Tps(Index k, Index l, ComplexMatrix basis);
  friend Tps swap_factors(const Tps& t);

  Index k_ = 0;
  Index l_ = 0;
  ComplexMatrix basis_;
  std::shared_ptr<const Eigen::PartialPivLU<ComplexMatrix>> lu_;
};

inline Tps tps_new(Index k, Index l, ComplexMatrix basis, const Tolerance& tol = {}) {
  return Tps::create(k, l, std::move(basis), tol);
}

struct SchmidtReport {
  std::size_t rank = 0;
  std::vector<double> coefficients;  // descending, strictly positive
  ComplexMatrix left_vectors;        // k x rank, orthonormal columns
  ComplexMatrix right_vectors;       // l x rank, orthonormal columns
  // C = left_vectors * diag(coefficients) * right_vectors^T
};

struct EquivalenceVerdict {
  bool equivalent = false;
  bool swapped = false;  // equivalence exchanges the two factors
};

/// k x l matrix C with basis * vec(C) = w (vec in j*l+i order).
ComplexMatrix coefficient_matrix(const ComplexMatrix& w, const Tps& t);

/// Inverse of coefficient_matrix.
ComplexMatrix state_from_coefficients(const ComplexMatrix& c, const Tps& t);

SchmidtReport schmidt(const ComplexMatrix& w, const Tps& t, const Tolerance& tol = {});

bool is_product(const ComplexMatrix& w, const Tps& t, const Tolerance& tol = {});

/// Inner-product compatibility reduces to orthonormality of the standard basis.
bool is_inner_product_compatible(const Tps& t, const Tolerance& tol = {});

/// Decided on the induced algebra pairs: (A1, A2) of t1 against (A1, A2) of
/// t2, directly or crossed.
EquivalenceVerdict tps_equivalent(const Tps& t1, const Tps& t2, const Tolerance& tol = {});

/// Exchanges the factors: shape (l, k), new column i*k+j = old column j*l+i.
Tps swap_factors(const Tps& t);

}  // namespace tpskit
