#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tpskit/core.hpp"
#include "tpskit/tps.hpp"

namespace tpskit {

/// Relative tolerance for span membership and span equality of algebras:
/// projection residual <= kSpanTolerance * sqrt(dim).
inline constexpr double kSpanTolerance = 1e-8;

/// A subalgebra of the n x n matrices, held as a Frobenius-orthonormal
/// spanning set. Columns of span() are column-major vec'd elements.
class OperatorAlgebra {
 public:
  OperatorAlgebra() = default;

  /// Wraps an already orthonormal, multiplication-closed span. No closure
  /// check is made; use algebra_generate for arbitrary input.
  static OperatorAlgebra from_orthonormal_span(Index n, ComplexMatrix span);

  /// Orthonormalizes `elements` (no closure). Used for spans known to be
  /// algebras, e.g. conjugated matrix-unit sets.
  static OperatorAlgebra from_elements(Index n, std::span<const ComplexMatrix> elements);

  Index dim_space() const { return n_; }
  Index dim() const { return span_.cols(); }
  const ComplexMatrix& span() const { return span_; }
  ComplexMatrix element(Index m) const { return unvec(span_.col(m), n_); }
  std::vector<ComplexMatrix> span_basis() const;
  bool unital() const { return unital_; }

  /// ||x - P x||_F / max(1, ||x||_F) with P the orthogonal projector on the span.
  double projection_residual(const ComplexMatrix& x) const;
  bool contains(const ComplexMatrix& x) const;

 private:
  OperatorAlgebra(Index n, ComplexMatrix span);

  Index n_ = 0;
  ComplexMatrix span_;
  bool unital_ = false;
};

/// Mutual projection residual test with bound kSpanTolerance * sqrt(dim).
bool span_equal(const OperatorAlgebra& a, const OperatorAlgebra& b);

/// Smallest multiplication-closed span containing the generators (and the
/// identity if requested).
OperatorAlgebra algebra_generate(std::span<const ComplexMatrix> generators,
                                 bool include_identity, const Tolerance& tol = {});

/// All X with [g, X] = 0 for every span element g.
OperatorAlgebra commutant(const OperatorAlgebra& a, const Tolerance& tol = {});

OperatorAlgebra join(const OperatorAlgebra& a1, const OperatorAlgebra& a2,
                     const Tolerance& tol = {});

/// dim(a ∩ commutant(a)).
Index center_dim(const OperatorAlgebra& a, const Tolerance& tol = {});

/// Conjugate-transpose closure of the span.
bool star_closed(const OperatorAlgebra& a);

struct TppChecks {
  bool commute = false;
  bool join_full = false;
  bool mutual_commutant = false;
  bool trivial_center = false;
  bool star_closed = false;
  bool dims_square = false;
};

struct TppVerdict {
  bool is_tpp = false;
  Index k = 0;
  Index l = 0;
  bool trivial_shape = false;  // k == 1 or l == 1
  TppChecks checks;
};

/// Finite-dimensional certification of a tensor product partition. The
/// verdict is only true for star-closed pairs; other pairs get the
/// necessary conditions reported with is_tpp = false.
TppVerdict is_tpp(const OperatorAlgebra& a1, const OperatorAlgebra& a2,
                  const Tolerance& tol = {});

/// A1 = B (M_k (x) 1) B^-1, A2 = B (1 (x) M_l) B^-1 with B = t.basis().
std::pair<OperatorAlgebra, OperatorAlgebra> tps_to_tpp(const Tps& t);

/// Builds a standard basis for a star-closed TPP: a seeded generic Hermitian
/// pair fixes the characteristic sets, an eigenbasis of the first observable
/// on M_0 is carried to every M_i by elements of a2.
Tps tpp_to_tps(const OperatorAlgebra& a1, const OperatorAlgebra& a2, std::uint64_t seed,
               const Tolerance& tol = {});

}  // namespace tpskit
