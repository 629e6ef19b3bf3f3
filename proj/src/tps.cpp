#include "tpskit/tps.hpp"

#include <cmath>
#include <string>

#include "tpskit/algebra.hpp"

namespace tpskit {

Tps::Tps(Index k, Index l, ComplexMatrix basis)
    : k_(k),
      l_(l),
      basis_(std::move(basis)),
      lu_(std::make_shared<const Eigen::PartialPivLU<ComplexMatrix>>(basis_)) {}

Tps Tps::create(Index k, Index l, ComplexMatrix basis, const Tolerance& tol) {
  if (k < 1 || l < 1) {
    throw Error(ErrorKind::DimensionMismatch, "factor dimensions must be at least 1");
  }
  if (basis.rows() != basis.cols() || basis.rows() != k * l) {
    throw Error(ErrorKind::DimensionMismatch,
                "basis is " + std::to_string(basis.rows()) + "x" + std::to_string(basis.cols()) +
                    ", expected " + std::to_string(k * l) + "x" + std::to_string(k * l));
  }
  require_finite(basis, "basis");
  Eigen::BDCSVD<ComplexMatrix> solver(basis);
  const RealVector& sigma = solver.singularValues();
  if (!(sigma[sigma.size() - 1] > tol.rank_rel * sigma[0])) {
    throw Error(ErrorKind::SingularBasis, "basis is numerically singular");
  }
  return Tps(k, l, std::move(basis));
}

Tps Tps::god_given(Index k, Index l) {
  if (k < 1 || l < 1) {
    throw Error(ErrorKind::DimensionMismatch, "factor dimensions must be at least 1");
  }
  return Tps(k, l, ComplexMatrix::Identity(k * l, k * l));
}

ComplexMatrix Tps::solve(const ComplexMatrix& w) const { return lu_->solve(w); }

namespace {

void require_state(const ComplexMatrix& w, const Tps& t) {
  if (w.cols() != 1 || w.rows() != t.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "state must be " + std::to_string(t.dim()) + "x1, got " +
                    std::to_string(w.rows()) + "x" + std::to_string(w.cols()));
  }
  require_finite(w, "state");
}

}  // namespace

ComplexMatrix coefficient_matrix(const ComplexMatrix& w, const Tps& t) {
  require_state(w, t);
  const Eigen::VectorXcd c = t.solve(w);
  ComplexMatrix out(t.k(), t.l());
  for (Index j = 0; j < t.k(); ++j)
    for (Index i = 0; i < t.l(); ++i) out(j, i) = c[t.cell(j, i)];
  return out;
}

ComplexMatrix state_from_coefficients(const ComplexMatrix& c, const Tps& t) {
  if (c.rows() != t.k() || c.cols() != t.l()) {
    throw Error(ErrorKind::DimensionMismatch, "coefficient matrix shape differs from the TPS");
  }
  Eigen::VectorXcd flat(t.dim());
  for (Index j = 0; j < t.k(); ++j)
    for (Index i = 0; i < t.l(); ++i) flat[t.cell(j, i)] = c(j, i);
  return t.basis() * flat;
}

SchmidtReport schmidt(const ComplexMatrix& w, const Tps& t, const Tolerance& tol) {
  require_state(w, t);
  const double norm = w.norm();
  if (!(norm > tol.residual)) {
    throw Error(ErrorKind::ZeroState, "state norm " + std::to_string(norm) +
                                          " is below tolerance");
  }
  const Svd dec = svd(coefficient_matrix(w, t));
  SchmidtReport out;
  out.rank = numeric_rank(dec.sigma, tol);
  const auto r = static_cast<Index>(out.rank);
  out.coefficients.assign(dec.sigma.data(), dec.sigma.data() + r);
  out.left_vectors = dec.u.leftCols(r);
  out.right_vectors = dec.v.leftCols(r).conjugate();
  return out;
}

bool is_product(const ComplexMatrix& w, const Tps& t, const Tolerance& tol) {
  return schmidt(w, t, tol).rank == 1;
}

bool is_inner_product_compatible(const Tps& t, const Tolerance& tol) {
  const Index n = t.dim();
  const ComplexMatrix gram = t.basis().adjoint() * t.basis();
  return max_abs(gram - ComplexMatrix::Identity(n, n)) <= tol.residual;
}

EquivalenceVerdict tps_equivalent(const Tps& t1, const Tps& t2, const Tolerance&) {
  if (t1.dim() != t2.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "TPS dimensions differ");
  }
  if (t1.trivial() && t2.trivial()) {
    // the product vector set is all of W for both
    if (t1.k() == t2.k() && t1.l() == t2.l()) return {true, false};
    if (t1.k() == t2.l() && t1.l() == t2.k()) return {true, true};
    return {false, false};
  }
  const auto [a1, a2] = tps_to_tpp(t1);
  const auto [b1, b2] = tps_to_tpp(t2);
  if (span_equal(a1, b1) && span_equal(a2, b2)) return {true, false};
  if (span_equal(a1, b2) && span_equal(a2, b1)) return {true, true};
  return {false, false};
}

Tps swap_factors(const Tps& t) {
  const Index k = t.k(), l = t.l();
  ComplexMatrix basis(t.dim(), t.dim());
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < l; ++i) basis.col(i * k + j) = t.basis().col(j * l + i);
  return Tps(l, k, std::move(basis));
}

}  // namespace tpskit
