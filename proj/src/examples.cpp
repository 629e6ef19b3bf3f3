#include "tpskit/examples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tpskit/algebra.hpp"
#include "tpskit/observables.hpp"
#include "tpskit/poly.hpp"

namespace tpskit {

namespace {

constexpr double kExampleResidual = 1e-12;

const std::vector<std::string> kBellNames = {"psi+", "psi-", "phi+", "phi-"};

std::vector<Eigen::VectorXcd> bell_list(const BellStates& b) {
  return {b.psi_plus, b.psi_minus, b.phi_plus, b.phi_minus};
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index r = 0; r < a.rows(); ++r)
    for (Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

// Largest subspace_residual over bundles of `a` against their best match in `b`.
double bundle_match(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b) {
  double worst = 0.0;
  for (const auto& x : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : b)
      if (x.cols() == y.cols()) best = std::min(best, subspace_residual(y, x));
    worst = std::max(worst, best);
  }
  return worst;
}

bool all_rank(const ExampleBundle& bundle, const std::string& prefix, std::size_t rank) {
  for (const auto& name : kBellNames)
    if (bundle.reports.at(prefix + "/" + name).schmidt.rank != rank) return false;
  return true;
}

// Euler operator var * d/dvar on the degree-d monomial grid; which = 0 acts
// on the first variable.
ComplexMatrix euler_operator(Index d, int which) {
  const Index n = d * d;
  ComplexMatrix op = ComplexMatrix::Zero(n, n);
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      const Index e = which == 0 ? a : b;
      if (e == 0) continue;
      // derivative lowers the exponent, multiplication restores it
      op(a * d + b, a * d + b) += static_cast<double>(e);
    }
  }
  return op;
}

}  // namespace

AnalysisReport analyze(const ComplexMatrix& w, const Tps& t, const Tolerance& tol) {
  AnalysisReport r;
  r.schmidt = schmidt(w, t, tol);
  r.product = r.schmidt.rank == 1;
  r.k = t.k();
  r.l = t.l();
  r.compatibility = is_inner_product_compatible(t, tol);

  RealVector s(r.schmidt.coefficients.size());
  for (std::size_t m = 0; m < r.schmidt.coefficients.size(); ++m) s[m] = r.schmidt.coefficients[m];
  const ComplexMatrix c =
      r.schmidt.left_vectors * s.cast<Complex>().asDiagonal() * r.schmidt.right_vectors.transpose();
  r.residuals["reconstruction"] = (w - state_from_coefficients(c, t)).norm() / w.norm();
  const ComplexMatrix& b = t.basis();
  r.residuals["basis_orthonormality"] =
      max_abs(b.adjoint() * b - ComplexMatrix::Identity(b.cols(), b.cols()));
  return r;
}

bool ExampleBundle::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return kv.second; });
}

BellStates bell_states() {
  const double h = 1.0 / std::sqrt(2.0);
  BellStates b;
  b.psi_plus = Eigen::VectorXcd::Zero(4);
  b.psi_minus = Eigen::VectorXcd::Zero(4);
  b.phi_plus = Eigen::VectorXcd::Zero(4);
  b.phi_minus = Eigen::VectorXcd::Zero(4);
  b.psi_plus << 0.0, h, h, 0.0;
  b.psi_minus << 0.0, h, -h, 0.0;
  b.phi_plus << h, 0.0, 0.0, h;
  b.phi_minus << h, 0.0, 0.0, -h;
  return b;
}

ComplexMatrix rotation_x_pi() {
  const ComplexMatrix half = Complex(0.0, 1.0) * pauli_x();
  return kron(half, half);
}

ComplexMatrix total_sz_squared() {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix sz = 0.5 * (kron(pauli_z(), id) + kron(id, pauli_z()));
  return sz * sz;
}

ComplexMatrix sigma_x_sigma_x() { return kron(pauli_x(), pauli_x()); }

ComplexMatrix sigma_z_sigma_z() { return kron(pauli_z(), pauli_z()); }

Tps bell_tps() {
  const BellStates b = bell_states();
  ComplexMatrix basis(4, 4);
  basis << b.psi_plus, b.phi_plus, b.psi_minus, b.phi_minus;
  return Tps::create(2, 2, basis);
}

ExampleBundle example_bell(std::uint64_t seed, const Tolerance& tol) {
  ExampleBundle out;
  out.name = "bell";
  const BellStates bs = bell_states();
  const auto states = bell_list(bs);
  const ComplexMatrix rx = rotation_x_pi();
  const ComplexMatrix sz2 = total_sz_squared();

  out.residuals["rx_psi+"] = (rx * bs.psi_plus + bs.psi_plus).norm();
  out.residuals["rx_psi-"] = (rx * bs.psi_minus - bs.psi_minus).norm();
  out.residuals["rx_phi+"] = (rx * bs.phi_plus + bs.phi_plus).norm();
  out.residuals["rx_phi-"] = (rx * bs.phi_minus - bs.phi_minus).norm();
  out.residuals["sz2_psi+"] = (sz2 * bs.psi_plus).norm();
  out.residuals["sz2_psi-"] = (sz2 * bs.psi_minus).norm();
  out.residuals["sz2_phi+"] = (sz2 * bs.phi_plus - bs.phi_plus).norm();
  out.residuals["sz2_phi-"] = (sz2 * bs.phi_minus - bs.phi_minus).norm();
  bool eig_ok = true;
  for (const auto& [name, value] : out.residuals) eig_ok = eig_ok && value <= kExampleResidual;
  out.checks["eigenrelations"] = eig_ok;

  const ObservablePair pair(rx, sz2, tol);
  const CharacteristicSets cs = verify_standard_complete(pair, tol);
  const Tps observed = tps_from_observables(pair, tol);
  const Tps god = Tps::god_given(2, 2);
  const Tps bell = bell_tps();
  out.checks["observable_tps_unitary"] = is_inner_product_compatible(observed, tol);

  for (std::size_t s = 0; s < states.size(); ++s) {
    out.reports["god_given/" + kBellNames[s]] = analyze(states[s], god, tol);
    out.reports["observables/" + kBellNames[s]] = analyze(states[s], observed, tol);
    out.reports["bell/" + kBellNames[s]] = analyze(states[s], bell, tol);
  }
  out.checks["god_given_entangled"] = all_rank(out, "god_given", 2);
  out.checks["observables_product"] = all_rank(out, "observables", 1);
  out.checks["bell_product"] = all_rank(out, "bell", 1);
  out.checks["observables_equivalent_to_bell"] = tps_equivalent(observed, bell, tol).equivalent;

  // algebras acting on the first, resp. second, grid index of the Bell basis
  std::vector<ComplexMatrix> units1;
  std::vector<ComplexMatrix> units2;
  for (Index a = 0; a < 2; ++a) {
    for (Index b = 0; b < 2; ++b) {
      ComplexMatrix u1 = ComplexMatrix::Zero(4, 4);
      ComplexMatrix u2 = ComplexMatrix::Zero(4, 4);
      for (Index c = 0; c < 2; ++c) {
        u1 += bell.vector(a, c) * bell.vector(b, c).adjoint();
        u2 += bell.vector(c, a) * bell.vector(c, b).adjoint();
      }
      units1.push_back(u1);
      units2.push_back(u2);
    }
  }
  const auto explicit1 = OperatorAlgebra::from_elements(4, units1);
  const auto explicit2 = OperatorAlgebra::from_elements(4, units2);
  const auto [a1, a2] = tps_to_tpp(bell);
  out.checks["tpp_a1_matches"] = span_equal(a1, explicit1);
  out.checks["tpp_a2_matches"] = span_equal(a2, explicit2);
  out.checks["tpp_certified"] = is_tpp(a1, a2, tol).is_tpp;
  out.checks["tpp_round_trip"] = tps_equivalent(tpp_to_tps(a1, a2, seed, tol), bell, tol).equivalent;

  // characteristic subspaces are product subspaces of the Bell TPS
  bool memberships = true;
  double membership_residual = 0.0;
  for (Index i = 0; i < 2; ++i) {
    ComplexMatrix m(4, 2);
    m << bell.vector(0, i), bell.vector(1, i);
    ComplexMatrix nb(4, 2);
    nb << bell.vector(i, 0), bell.vector(i, 1);
    membership_residual = std::max(membership_residual, subspace_residual(m, cs.M[i]));
    membership_residual = std::max(membership_residual, subspace_residual(nb, cs.N[i]));
    const Eigen::VectorXcd mix_m = cs.M[i].col(0) + Complex(0.5, -1.0) * cs.M[i].col(1);
    const Eigen::VectorXcd mix_n = cs.N[i].col(0) + Complex(-2.0, 0.25) * cs.N[i].col(1);
    memberships = memberships && is_product(mix_m, bell, tol) && is_product(mix_n, bell, tol);
  }
  out.residuals["characteristic_membership"] = membership_residual;
  out.checks["characteristic_sets_product"] =
      memberships && membership_residual <= kSubspaceTolerance;

  const ObservablePair sigma(sigma_x_sigma_x(), sigma_z_sigma_z(), tol);
  const CharacteristicSets cs2 = verify_standard_complete(sigma, tol);
  const double match = std::max({bundle_match(cs2.M, cs.M), bundle_match(cs.M, cs2.M),
                                 bundle_match(cs2.N, cs.N), bundle_match(cs.N, cs2.N)});
  out.residuals["sigma_pair_subspaces"] = match;
  out.checks["sigma_pair_subspaces"] = match <= kSubspaceTolerance;
  out.checks["sigma_pair_equivalent"] =
      tps_equivalent(tps_from_observables(sigma, tol), observed, tol).equivalent;
  return out;
}

ExampleBundle example_bargmann(Index d, const Tolerance& tol) {
  if (d < 3) throw Error(ErrorKind::InvalidInput, "bargmann example needs d >= 3");
  ExampleBundle out;
  out.name = "bargmann";
  ComplexMatrix coeffs = ComplexMatrix::Zero(d, d);
  coeffs.block(1, 1, 2, 2).setOnes();
  const PolyState p = make_poly({"x1", "x2"}, coeffs);
  const Eigen::VectorXcd w = poly_vector(p);

  ComplexMatrix alpha = ComplexMatrix::Ones(d, d);
  alpha(2, 2) = 2.0;
  const Tps plain = poly_tps(p.variables, d);
  const Tps deformed = deformed_poly_tps(alpha, d, tol);
  out.reports["undeformed"] = analyze(w, plain, tol);
  out.reports["deformed"] = analyze(w, deformed, tol);

  ComplexMatrix expected = ComplexMatrix::Zero(d, d);
  expected.block(1, 1, 2, 2) << 1.0, 1.0, 1.0, 0.5;
  out.residuals["deformed_coefficients"] = max_abs(coefficient_matrix(w, deformed) - expected);
  out.checks["undeformed_product"] = out.reports["undeformed"].schmidt.rank == 1;
  out.checks["deformed_entangled"] = out.reports["deformed"].schmidt.rank == 2;
  out.checks["deformed_coefficients"] = out.residuals["deformed_coefficients"] <= kExampleResidual;
  out.verdicts["deformed_equivalent_to_undeformed"] =
      tps_equivalent(plain, deformed, tol).equivalent;
  return out;
}

ExampleBundle example_center_of_mass(Index d, const Tolerance& tol) {
  if (d < 3) throw Error(ErrorKind::InvalidInput, "center-of-mass example needs d >= 3");
  ExampleBundle out;
  out.name = "center_of_mass";
  ComplexMatrix coeffs = ComplexMatrix::Zero(d, d);
  coeffs(1, 1) = 1.0;
  const PolyState p = make_poly({"x1", "x2"}, coeffs);
  const PolyState q = change_of_variables(p, d);

  const Tps particles = poly_tps(p.variables, d);
  const Tps relative = poly_tps(q.variables, d);
  out.reports["x1x2/particles"] = analyze(poly_vector(p), particles, tol);
  out.reports["x1x2/relative"] = analyze(poly_vector(q), relative, tol);
  out.checks["particles_product"] = out.reports["x1x2/particles"].schmidt.rank == 1;
  out.checks["relative_entangled"] = out.reports["x1x2/relative"].schmidt.rank == 2;

  ComplexMatrix expected = ComplexMatrix::Zero(d, d);
  expected(2, 0) = 1.0;
  expected(0, 2) = -0.25;
  out.residuals["relative_coefficients"] = max_abs(q.coeffs - expected);
  const Index nonzero = (q.coeffs.array().abs() > 0.0).count();
  out.checks["relative_coefficients"] =
      nonzero == 2 && out.residuals["relative_coefficients"] <= kExampleResidual;

  // the Schmidt factors live on span{1, X^2} (x) span{1, x^2}
  const SchmidtReport& s = out.reports["x1x2/relative"].schmidt;
  ComplexMatrix factor_span = ComplexMatrix::Zero(d, 2);
  factor_span(0, 0) = 1.0;
  factor_span(2, 1) = 1.0;
  out.residuals["schmidt_factor_span"] = std::max(subspace_residual(factor_span, s.left_vectors),
                                                  subspace_residual(factor_span, s.right_vectors));
  out.checks["schmidt_factor_span"] = out.residuals["schmidt_factor_span"] <= kSubspaceTolerance;

  out.residuals["inverse_round_trip"] = max_abs(inverse_change_of_variables(q, d).coeffs - coeffs);
  out.checks["inverse_round_trip"] = out.residuals["inverse_round_trip"] <= kExampleResidual;

  const ComplexMatrix big = euler_operator(d, 0);
  const ComplexMatrix small = euler_operator(d, 1);
  double action = 0.0;
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      const Eigen::VectorXcd e = Eigen::VectorXcd::Unit(d * d, j * d + i);
      action = std::max(action, (big * e - static_cast<double>(j) * e).norm());
      action = std::max(action, (small * e - static_cast<double>(i) * e).norm());
    }
  }
  out.residuals["euler_action"] = action;
  out.checks["euler_action"] = action <= kExampleResidual;

  const ObservablePair euler(big, small, tol);
  const CharacteristicSets cs = verify_standard_complete(euler, tol);
  out.residuals["euler_grid"] = max_abs(cs.grid - ComplexMatrix::Identity(d * d, d * d));
  out.checks["euler_standard_complete"] = out.residuals["euler_grid"] <= kExampleResidual;
  return out;
}

}  // namespace tpskit
