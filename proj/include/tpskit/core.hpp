#pragma once

// Dense complex scalars/matrices and the numerical kernels shared by every
// other part of the library: Hermitian eigendecomposition with eigenvalue
// clustering, SVD, numerical rank and orthonormal completion.

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tpskit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorKind {
  NotHermitian,
  ConvergenceFailure,
  NotOrthonormal,
  DimensionMismatch,
  SingularBasis,
  ZeroState,
  NonUnital,
  NotATpp,
  GenericElementFailure,
  NotDiagonalizable,
  MultiplicityViolation,
  JointDegeneracy,
  NotComplementary,
  NonCompositeDim,
  ShapeTooSmall,
  GridOverflow,
  ZeroAlpha,
  NonFinite,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `what()` starts with the kind name,
/// e.g. "ZeroState: state norm 0 is below tolerance".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct Tolerance {
  double eig_cluster = 1e-8;  // relative, eigenvalue grouping
  double rank_rel = 1e-10;    // relative, singular-value cutoff
  double residual = 1e-10;    // absolute, verification residuals

  /// Throws InvalidInput unless all fields are positive and rank_rel < 1.
  void validate() const;
};

void require_finite(const ComplexMatrix& m, std::string_view what);

/// Contiguous run [begin, begin + size) of sorted eigenvalues.
struct Cluster {
  Index begin = 0;
  Index size = 0;
  double center = 0.0;
};

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors; // unitary, column c belongs to values[c]
  std::vector<Cluster> clusters;
};

HermitianEigen hermitian_eigendecompose(const ComplexMatrix& m, const Tolerance& tol = {});

/// Single-linkage grouping of ascending values; consecutive values join a
/// cluster when their gap is at most eig_cluster * (max - min + 1).
std::vector<Cluster> cluster_sorted(std::span<const double> ascending, const Tolerance& tol);

/// Single-linkage grouping of complex values with the same gap rule (spread
/// measured as the largest pairwise distance). Returns index groups ordered
/// by (real, imag) of their mean.
std::vector<std::vector<Index>> cluster_complex(std::span<const Complex> values,
                                                const Tolerance& tol);

struct Svd {
  ComplexMatrix u;   // rows x rows unitary
  RealVector sigma;  // min(rows, cols), descending
  ComplexMatrix v;   // cols x cols unitary
};

Svd svd(const ComplexMatrix& m);

std::size_t numeric_rank(const ComplexMatrix& m, const Tolerance& tol = {});
std::size_t numeric_rank(const RealVector& descending_sigma, const Tolerance& tol);

/// Extends the orthonormal columns of `vs` to an n x n unitary whose leading
/// columns are exactly `vs`.
ComplexMatrix complete_orthonormal(const ComplexMatrix& vs, Index n, const Tolerance& tol = {});

/// Scales a vector to unit norm and rotates its phase so that the entry of
/// largest magnitude (lowest index on ties) is real positive.
Eigen::VectorXcd normalize_with_phase(const Eigen::VectorXcd& v);

/// Phase factor (unit modulus) that makes the largest-magnitude entry of v
/// real positive when multiplied in.
Complex phase_fix(const Eigen::VectorXcd& v);

double max_abs(const ComplexMatrix& m);

/// Orthonormal basis of the column span, built with column pivoting.
/// Columns whose residual falls below rel_cutoff times the largest column
/// norm are discarded.
ComplexMatrix orthonormal_span(const ComplexMatrix& columns, double rel_cutoff);

/// Smallest principal-angle style residual: max over unit columns q of b of
/// the distance from q to span(a); both inputs orthonormal.
double subspace_residual(const ComplexMatrix& a, const ComplexMatrix& b);

/// True when the orthonormal bundles span the same subspace within `bound`.
bool same_subspace(const ComplexMatrix& a, const ComplexMatrix& b, double bound);

/// vec(x) with column-major stacking, and its inverse.
Eigen::VectorXcd vec(const ComplexMatrix& x);
ComplexMatrix unvec(const Eigen::VectorXcd& v, Index n);

}  // namespace tpskit
