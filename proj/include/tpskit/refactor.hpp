#pragma once

#include <utility>

#include "tpskit/core.hpp"
#include "tpskit/tps.hpp"

namespace tpskit {

// Man-made tensor product structures: any basis can be declared a product
// basis, so any state can be made separable or entangled by choosing the
// factorization.

/// TPS whose standard basis is `basis` itself, assigned lexicographically:
/// cell (j, i) <- column j*l + i. Every column is then a product vector.
Tps tps_making_basis_product(const ComplexMatrix& basis, Index k, Index l,
                             const Tolerance& tol = {});

/// TPS in which w is the product vector x_{00} (normalized when orthonormal).
Tps tps_making_state_product(const ComplexMatrix& w, Index k, Index l, bool orthonormal,
                             const Tolerance& tol = {});

/// TPS in which w has Schmidt rank exactly 2. Requires k, l >= 2.
Tps tps_making_state_entangled(const ComplexMatrix& w, Index k, Index l, bool orthonormal,
                               const Tolerance& tol = {});

struct DualVerdict {
  Tps product_tps;
  Tps entangled_tps;
};

DualVerdict dual_verdict(const ComplexMatrix& w, Index k, Index l, bool orthonormal = false,
                         const Tolerance& tol = {});

bool is_prime(Index n);

}  // namespace tpskit
