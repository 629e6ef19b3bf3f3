#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "tpskit/core.hpp"

namespace tpskit::testing {

using Rng = std::mt19937_64;

inline Eigen::VectorXcd random_vector(Index n, Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (Index a = 0; a < n; ++a) v[a] = Complex(g(rng), g(rng));
  return v;
}

inline ComplexMatrix random_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

inline ComplexMatrix random_hermitian(Index n, Rng& rng) {
  const ComplexMatrix m = random_matrix(n, n, rng);
  return 0.5 * (m + m.adjoint());
}

inline ComplexMatrix random_unitary(Index n, Rng& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(n, n, rng));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

/// Well-conditioned invertible matrix: identity plus a small random part.
inline ComplexMatrix random_invertible(Index n, Rng& rng) {
  return ComplexMatrix::Identity(n, n) + 0.3 / std::sqrt(static_cast<double>(n)) *
                                             random_matrix(n, n, rng);
}

/// Diagonal matrix with the given real spectrum conjugated by a unitary.
inline ComplexMatrix with_spectrum(const Eigen::VectorXd& values, const ComplexMatrix& u) {
  return u * values.cast<Complex>().asDiagonal() * u.adjoint();
}

}  // namespace tpskit::testing
