#pragma once

#include <string>
#include <utility>

#include "tpskit/core.hpp"
#include "tpskit/tps.hpp"

namespace tpskit {

/// Two-variable polynomial truncated to exponents 0..d-1 per variable.
/// coeffs(j, i) is the coefficient of var1^j * var2^i, so a PolyState read
/// as a state on the d*d monomial space has coefficient matrix coeffs under
/// poly_tps.
struct PolyState {
  std::pair<std::string, std::string> variables{"x1", "x2"};
  Index max_degree = 1;
  ComplexMatrix coeffs;
};

/// Validates d >= 1, a d x d coefficient matrix and finite entries.
PolyState make_poly(std::pair<std::string, std::string> variables, ComplexMatrix coeffs);

/// coeffs flattened in j*d+i order: the state vector on the monomial grid.
Eigen::VectorXcd poly_vector(const PolyState& p);

/// Substitutes x1 = X + x/2, x2 = X - x/2 and expands exactly. Throws
/// GridOverflow naming every monomial X^a x^b outside the target grid
/// that keeps a nonzero coefficient.
PolyState change_of_variables(const PolyState& p, Index target_degree);

/// Substitutes X = (x1 + x2)/2, x = x1 - x2.
PolyState inverse_change_of_variables(const PolyState& p, Index target_degree);

/// The monomial-grid structure: cell (j, i) is var1^j var2^i. The variable
/// names only label the grid; the structure is the God-given (d, d) one.
Tps poly_tps(const std::pair<std::string, std::string>& variables, Index d);

/// Cell (j, i) is alpha(j, i) * var1^j var2^i. Coefficients transform as
/// C'(j, i) = C(j, i) / alpha(j, i). Throws ZeroAlpha.
Tps deformed_poly_tps(const ComplexMatrix& alpha, Index d, const Tolerance& tol = {});

}  // namespace tpskit
