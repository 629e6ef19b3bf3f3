#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "tpskit/core.hpp"
#include "tpskit/tps.hpp"

namespace tpskit {

struct AnalysisReport {
  SchmidtReport schmidt;
  bool product = false;
  Index k = 0;
  Index l = 0;
  bool compatibility = false;
  std::map<std::string, double> residuals;
};

/// Schmidt data of w relative to t plus two residuals:
/// "reconstruction" (|w - sum s_m x(u_m, v_m)| / |w|) and
/// "basis_orthonormality" (max |B^H B - I|).
AnalysisReport analyze(const ComplexMatrix& w, const Tps& t, const Tolerance& tol = {});

struct ExampleBundle {
  std::string name;
  std::map<std::string, AnalysisReport> reports;
  std::map<std::string, double> residuals;
  std::map<std::string, bool> checks;    // asserted; ok() requires all
  std::map<std::string, bool> verdicts;  // reported only

  bool ok() const;
};

// Two spin-1/2 particles, computational basis |uu>, |ud>, |du>, |dd>.
struct BellStates {
  Eigen::VectorXcd psi_plus;
  Eigen::VectorXcd psi_minus;
  Eigen::VectorXcd phi_plus;
  Eigen::VectorXcd phi_minus;
};

BellStates bell_states();

/// Rotation of both spins through pi about x: (i sigma_x) (x) (i sigma_x).
ComplexMatrix rotation_x_pi();

/// Square of the total z spin, hbar = 1.
ComplexMatrix total_sz_squared();

ComplexMatrix sigma_x_sigma_x();
ComplexMatrix sigma_z_sigma_z();

/// The Bell-state TPS: cells (0,0), (0,1), (1,0), (1,1) hold
/// psi+, phi+, psi-, phi-.
Tps bell_tps();

ExampleBundle example_bell(std::uint64_t seed, const Tolerance& tol = {});

/// Exponents 1..2 of both variables with alpha(2, 2) = 2 and every other
/// alpha equal to 1, on the degree-d grid (d >= 3).
ExampleBundle example_bargmann(Index d, const Tolerance& tol = {});

ExampleBundle example_center_of_mass(Index d, const Tolerance& tol = {});

}  // namespace tpskit
