#include "tpskit/refactor.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace tpskit {

bool is_prime(Index n) {
  if (n < 2) return false;
  for (Index d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

void check_shape(Index n, Index k, Index l) {
  if (k < 1 || l < 1) {
    throw Error(ErrorKind::DimensionMismatch, "factor dimensions must be at least 1");
  }
  if (k >= 2 && l >= 2 && is_prime(n)) {
    throw Error(ErrorKind::NonCompositeDim,
                "dimension " + std::to_string(n) + " is prime; no nontrivial factorization");
  }
  if (k * l != n) {
    throw Error(ErrorKind::DimensionMismatch, std::to_string(k) + "x" + std::to_string(l) +
                                                  " does not factor dimension " +
                                                  std::to_string(n));
  }
}

Eigen::VectorXcd require_nonzero_state(const ComplexMatrix& w, const Tolerance& tol) {
  if (w.cols() != 1) {
    throw Error(ErrorKind::DimensionMismatch, "state must be a column vector");
  }
  require_finite(w, "state");
  if (!(w.norm() > tol.residual)) {
    throw Error(ErrorKind::ZeroState, "state norm " + std::to_string(w.norm()) +
                                          " is below tolerance");
  }
  return w.col(0);
}

// Lexicographic cell order with two cells reserved up front.
std::vector<Index> remaining_cells(Index n, Index first, Index second) {
  std::vector<Index> cells;
  for (Index c = 0; c < n; ++c)
    if (c != first && c != second) cells.push_back(c);
  return cells;
}

}  // namespace

Tps tps_making_basis_product(const ComplexMatrix& basis, Index k, Index l,
                             const Tolerance& tol) {
  if (basis.rows() != basis.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "basis must be square");
  }
  check_shape(basis.rows(), k, l);
  return Tps::create(k, l, basis, tol);
}

Tps tps_making_state_product(const ComplexMatrix& w, Index k, Index l, bool orthonormal,
                             const Tolerance& tol) {
  const Eigen::VectorXcd v = require_nonzero_state(w, tol);
  const Index n = v.size();
  check_shape(n, k, l);
  if (orthonormal) {
    return tps_making_basis_product(complete_orthonormal(v / v.norm(), n, tol), k, l, tol);
  }
  // w replaces the standard vector on its largest coordinate
  Index pivot = 0;
  for (Index c = 1; c < n; ++c)
    if (std::abs(v[c]) > std::abs(v[pivot])) pivot = c;
  ComplexMatrix basis(n, n);
  basis.col(0) = v;
  Index col = 1;
  for (Index c = 0; c < n; ++c) {
    if (c == pivot) continue;
    basis.col(col++) = Eigen::VectorXcd::Unit(n, c);
  }
  return tps_making_basis_product(basis, k, l, tol);
}

Tps tps_making_state_entangled(const ComplexMatrix& w, Index k, Index l, bool orthonormal,
                               const Tolerance& tol) {
  if (k == 1 || l == 1) {
    throw Error(ErrorKind::ShapeTooSmall, "entangling needs both factors of dimension >= 2");
  }
  const Eigen::VectorXcd v = require_nonzero_state(w, tol);
  const Index n = v.size();
  check_shape(n, k, l);
  const double norm = v.norm();

  // smallest-index standard vector not parallel to w
  Index p = 0;
  for (; p < n; ++p) {
    Eigen::VectorXcd rest = v;
    rest[p] = 0.0;
    if (rest.norm() > tol.residual * norm) break;
  }
  const Eigen::VectorXcd u = Eigen::VectorXcd::Unit(n, p);

  const Index cell_a = 1;  // grid cell (0, 1)
  const Index cell_b = l;  // grid cell (1, 0)
  ComplexMatrix basis(n, n);
  if (orthonormal) {
    // o1, o2 span {w, u} and w = |w| (o1 + o2) / sqrt(2)
    const Eigen::VectorXcd wh = v / norm;
    Eigen::VectorXcd perp = u - wh * (wh.adjoint() * u);
    perp /= perp.norm();
    ComplexMatrix pair(n, 2);
    pair.col(0) = (wh + perp) / std::sqrt(2.0);
    pair.col(1) = (wh - perp) / std::sqrt(2.0);
    const ComplexMatrix full = complete_orthonormal(pair, n, tol);
    basis.col(cell_a) = full.col(0);
    basis.col(cell_b) = full.col(1);
    Index src = 2;
    for (Index c : remaining_cells(n, cell_a, cell_b)) basis.col(c) = full.col(src++);
  } else {
    const Eigen::VectorXcd w1 = u * (norm / std::sqrt(2.0));
    const Eigen::VectorXcd w2 = v - w1;
    basis.col(cell_a) = w1;
    basis.col(cell_b) = w2;
    // complete with the standard vectors picked by column pivoting
    ComplexMatrix pair(n, 2);
    pair << w1, w2;
    const ComplexMatrix q = orthonormal_span(pair, 0.0);
    ComplexMatrix rest = ComplexMatrix::Identity(n, n) - q * q.adjoint();
    std::vector<Index> picked;
    for (Index step = 0; step + 2 < n; ++step) {
      Index best = 0;
      double best_norm = -1.0;
      for (Index c = 0; c < n; ++c) {
        const double r = rest.col(c).norm();
        if (r > best_norm * (1.0 + 1e-12)) {
          best_norm = r;
          best = c;
        }
      }
      picked.push_back(best);
      const Eigen::VectorXcd dir = rest.col(best) / best_norm;
      rest -= dir * (dir.adjoint() * rest);
    }
    std::sort(picked.begin(), picked.end());
    const auto cells = remaining_cells(n, cell_a, cell_b);
    for (std::size_t c = 0; c < cells.size(); ++c)
      basis.col(cells[c]) = Eigen::VectorXcd::Unit(n, picked[c]);
  }
  return Tps::create(k, l, std::move(basis), tol);
}

DualVerdict dual_verdict(const ComplexMatrix& w, Index k, Index l, bool orthonormal,
                         const Tolerance& tol) {
  return {tps_making_state_product(w, k, l, orthonormal, tol),
          tps_making_state_entangled(w, k, l, orthonormal, tol)};
}

}  // namespace tpskit
