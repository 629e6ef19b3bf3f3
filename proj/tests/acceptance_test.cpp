// Acceptance criteria AC1-AC9. One PASS/FAIL line per criterion; exit status
// is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "support/random.hpp"
#include "support/rational_rank.hpp"
#include "tpskit/algebra.hpp"
#include "tpskit/examples.hpp"
#include "tpskit/observables.hpp"
#include "tpskit/poly.hpp"
#include "tpskit/refactor.hpp"
#include "tpskit/tps.hpp"

namespace tpskit {
namespace {

using testing::Rng;

constexpr double kCoefficientTol = 1e-10;   // AC1
constexpr double kEigenrelationTol = 1e-12; // AC2
constexpr double kRuntimeLimit = 1.0;       // AC3, seconds
constexpr double kSubspaceTol = 1e-10;      // AC4
constexpr double kExactEntryTol = 1e-12;    // AC5, AC6
constexpr int kPropertyInstances = 100;     // AC7
constexpr int kComplementaryPairs = 25;     // AC8
constexpr double kMembershipTol = 1e-8;     // AC8
constexpr int kRationalStates = 200;        // AC9, per shape

struct Outcome {
  bool pass = true;
  std::string detail;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index r = 0; r < a.rows(); ++r)
    for (Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome ac1() {
  const BellStates b = bell_states();
  const Tps god = Tps::god_given(2, 2);
  double worst = 0.0;
  bool ranks = true;
  for (const auto& w : {b.psi_plus, b.psi_minus, b.phi_plus, b.phi_minus}) {
    const SchmidtReport s = schmidt(w, god);
    ranks = ranks && s.rank == 2 && s.coefficients.size() == 2;
    for (Index m = 0; m < s.coefficients.size(); ++m)
      worst = std::max(worst, std::abs(s.coefficients[m] - 1.0 / std::sqrt(2.0)));
  }
  return {ranks && worst <= kCoefficientTol,
          "rank 2 for all four: " + std::string(ranks ? "yes" : "no") +
              ", max coefficient error " + fmt(worst)};
}

Outcome ac2() {
  const BellStates b = bell_states();
  const ComplexMatrix rx = rotation_x_pi();
  const ComplexMatrix sz2 = total_sz_squared();
  const std::vector<double> residuals = {
      (rx * b.psi_plus + b.psi_plus).norm(), (rx * b.psi_minus - b.psi_minus).norm(),
      (sz2 * b.psi_plus).norm(),             (sz2 * b.psi_minus).norm(),
      (sz2 * b.phi_plus - b.phi_plus).norm(), (sz2 * b.phi_minus - b.phi_minus).norm()};
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, r);
  return {worst <= kEigenrelationTol, "max residual " + fmt(worst)};
}

Outcome ac3() {
  const auto start = std::chrono::steady_clock::now();
  const Tps t = tps_from_observables(ObservablePair(rotation_x_pi(), total_sz_squared()));
  const bool unitary = is_inner_product_compatible(t);
  const BellStates b = bell_states();
  bool ranks = true;
  for (const auto& w : {b.psi_plus, b.psi_minus, b.phi_plus, b.phi_minus})
    ranks = ranks && schmidt(w, t).rank == 1;
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {unitary && ranks && seconds < kRuntimeLimit,
          std::string("unitary basis ") + (unitary ? "yes" : "no") + ", rank 1 for all four " +
              (ranks ? "yes" : "no") + ", " + fmt(seconds) + " s"};
}

// Worst match of each subspace in `a` against its closest partner in `b`.
double family_distance(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (const auto& s : a) {
    double best = INFINITY;
    for (const auto& q : b)
      if (q.cols() == s.cols()) best = std::min(best, std::max(subspace_residual(s, q),
                                                               subspace_residual(q, s)));
    worst = std::max(worst, best);
  }
  return worst;
}

Outcome ac4() {
  const ObservablePair bell(rotation_x_pi(), total_sz_squared());
  const ObservablePair sigma(sigma_x_sigma_x(), sigma_z_sigma_z());
  const CharacteristicSets a = verify_standard_complete(bell);
  const CharacteristicSets b = verify_standard_complete(sigma);
  const double dist = std::max(family_distance(a.M, b.M), family_distance(a.N, b.N));
  const bool equivalent =
      tps_equivalent(tps_from_observables(bell), tps_from_observables(sigma)).equivalent;
  return {b.k == 2 && b.l == 2 && dist <= kSubspaceTol && equivalent,
          "subspace residual " + fmt(dist) + ", equivalent " + (equivalent ? "yes" : "no")};
}

Outcome ac5() {
  const Index d = 4;
  ComplexMatrix c = ComplexMatrix::Zero(d, d);
  c(1, 1) = 1.0;
  const PolyState p = make_poly({"x1", "x2"}, c);
  const PolyState q = change_of_variables(p, d);
  const auto r1 = schmidt(poly_vector(p), poly_tps(p.variables, d)).rank;
  const auto r2 = schmidt(poly_vector(q), poly_tps(q.variables, d)).rank;
  Index nonzero = 0;
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i)
      if (q.coeffs(j, i) != Complex(0.0)) ++nonzero;
  const double e20 = std::abs(q.coeffs(2, 0) - 1.0);
  const double e02 = std::abs(q.coeffs(0, 2) + 0.25);
  return {r1 == 1 && r2 == 2 && nonzero == 2 && e20 <= kExactEntryTol && e02 <= kExactEntryTol,
          "ranks " + std::to_string(r1) + "/" + std::to_string(r2) + ", nonzero entries " +
              std::to_string(nonzero) + ", entry errors " + fmt(e20) + " " + fmt(e02)};
}

Outcome ac6() {
  const Index d = 4;
  ComplexMatrix alpha = ComplexMatrix::Ones(d, d);
  alpha(2, 2) = 2.0;
  ComplexMatrix c = ComplexMatrix::Zero(d, d);
  c.block(1, 1, 2, 2).setOnes();
  const Eigen::VectorXcd w = poly_vector(make_poly({"x1", "x2"}, c));
  const Tps plain = poly_tps({"x1", "x2"}, d);
  const Tps deformed = deformed_poly_tps(alpha, d);
  const auto r1 = schmidt(w, plain).rank;
  const auto r2 = schmidt(w, deformed).rank;
  ComplexMatrix expected = ComplexMatrix::Zero(d, d);
  expected.block(1, 1, 2, 2) << 1.0, 1.0, 1.0, 0.5;
  const double err = max_abs(coefficient_matrix(w, deformed) - expected);
  return {r1 == 1 && r2 == 2 && err <= kExactEntryTol,
          "ranks " + std::to_string(r1) + "/" + std::to_string(r2) + ", coefficient error " +
              fmt(err)};
}

std::pair<Index, Index> shape_for(Index n) {
  switch (n) {
    case 4: return {2, 2};
    case 6: return {2, 3};
    case 9: return {3, 3};
    case 12: return {3, 4};
    default: return {4, 4};
  }
}

Outcome ac7() {
  const std::vector<Index> dims = {4, 6, 9, 12, 16};
  int fail_a = 0, fail_b = 0, fail_c = 0, fail_d = 0;
  Rng rng(7000);
  for (int trial = 0; trial < kPropertyInstances; ++trial) {
    const Index n = dims[static_cast<std::size_t>(trial) % dims.size()];
    const auto [k, l] = shape_for(n);
    const bool orthonormal = trial % 2 == 1;

    // (a)
    const ComplexMatrix w = testing::random_vector(n, rng);
    const Tps p = tps_making_state_product(w, k, l, orthonormal);
    const Tps e = tps_making_state_entangled(w, k, l, orthonormal);
    if (schmidt(w, p).rank != 1 || schmidt(w, e).rank != 2) ++fail_a;

    // (b)
    const Tps t = Tps::create(k, l, testing::random_unitary(n, rng));
    const auto [a1, a2] = tps_to_tpp(t);
    if (!span_equal(commutant(a1), a2) || !span_equal(commutant(a2), a1) ||
        a1.dim() * a2.dim() != n * n || center_dim(a1) != 1 || center_dim(a2) != 1)
      ++fail_b;

    // (c)
    if (!tps_equivalent(tpp_to_tps(a1, a2, static_cast<std::uint64_t>(trial)), t).equivalent)
      ++fail_c;

    // (d)
    const ComplexMatrix v = testing::random_vector(n, rng);
    const DualVerdict dual = dual_verdict(v, k, l, orthonormal);
    if (!is_product(v, dual.product_tps) || is_product(v, dual.entangled_tps)) ++fail_d;
  }
  return {fail_a + fail_b + fail_c + fail_d == 0,
          std::to_string(kPropertyInstances) + " instances, failures a=" +
              std::to_string(fail_a) + " b=" + std::to_string(fail_b) +
              " c=" + std::to_string(fail_c) + " d=" + std::to_string(fail_d)};
}

ObservablePair planted_pair(Index k, Index l, const ComplexMatrix& s, Rng& rng) {
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  auto spectrum = [&](Index m) {
    Eigen::VectorXcd v(m);
    for (Index a = 0; a < m; ++a) v[a] = static_cast<double>(a) - 0.5 * static_cast<double>(m) + jitter(rng);
    return ComplexMatrix(v.asDiagonal());
  };
  const ComplexMatrix inv = s.inverse();
  const ComplexMatrix d1 = spectrum(k);
  const ComplexMatrix d2 = spectrum(l);
  return ObservablePair(s * kron(d1, ComplexMatrix::Identity(l, l)) * inv,
                        s * kron(ComplexMatrix::Identity(k, k), d2) * inv);
}

Outcome ac8() {
  const std::vector<std::pair<Index, Index>> shapes = {{2, 2}, {2, 3}, {3, 3}};
  Rng rng(8000);
  int rejected = 0;
  double worst = 0.0;
  for (int trial = 0; trial < kComplementaryPairs; ++trial) {
    const auto [k, l] = shapes[static_cast<std::size_t>(trial) % shapes.size()];
    const Index n = k * l;
    const ComplexMatrix s =
        trial % 2 == 0 ? testing::random_unitary(n, rng) : testing::random_invertible(n, rng);
    const ObservablePair p = planted_pair(k, l, s, rng);
    const ObservablePair q = complementary_pair(p, verify_standard_complete(p));
    if (!verify_complementary(p, q)) {
      ++rejected;
      continue;
    }
    const ComplementaryTpp c = tpp_from_complementary(p, q);
    worst = std::max({worst, c.a1.projection_residual(p.r()), c.a1.projection_residual(q.r()),
                      c.a2.projection_residual(p.t()), c.a2.projection_residual(q.t())});
  }
  return {rejected == 0 && worst <= kMembershipTol,
          std::to_string(kComplementaryPairs) + " pairs, rejected " + std::to_string(rejected) +
              ", max membership residual " + fmt(worst)};
}

// Small Gaussian rationals a/b + i c/e.
testing::ExactComplex small_rational(Rng& rng) {
  std::uniform_int_distribution<int> num(-3, 3), den(1, 4);
  return {testing::Rational(num(rng), den(rng)), testing::Rational(num(rng), den(rng))};
}

Outcome ac9() {
  Rng rng(9000);
  int disagreements = 0;
  int total = 0;
  for (const auto& [k, l] : std::vector<std::pair<Index, Index>>{{2, 2}, {2, 3}}) {
    const Tps god = Tps::god_given(k, l);
    std::uniform_int_distribution<int> terms(1, static_cast<int>(std::min(k, l)));
    for (int s = 0; s < kRationalStates;) {
      testing::ExactMatrix c(static_cast<std::size_t>(k),
                             std::vector<testing::ExactComplex>(static_cast<std::size_t>(l)));
      const int r = terms(rng);
      for (int term = 0; term < r; ++term) {
        std::vector<testing::ExactComplex> u, v;
        for (Index j = 0; j < k; ++j) u.push_back(small_rational(rng));
        for (Index i = 0; i < l; ++i) v.push_back(small_rational(rng));
        for (Index j = 0; j < k; ++j)
          for (Index i = 0; i < l; ++i) {
            const testing::ExactComplex x = u[j] * v[i];
            c[j][i] = {c[j][i].re + x.re, c[j][i].im + x.im};
          }
      }
      const std::size_t exact = testing::exact_rank(c);
      if (exact == 0) continue;  // the zero state has no Schmidt decomposition
      ++s;
      ComplexMatrix w(k * l, 1);
      for (Index j = 0; j < k; ++j)
        for (Index i = 0; i < l; ++i)
          w(j * l + i, 0) = Complex(static_cast<double>(c[j][i].re), static_cast<double>(c[j][i].im));
      ++total;
      if (schmidt(w, god).rank != exact) ++disagreements;
    }
  }
  return {disagreements == 0, std::to_string(total) + " states, disagreements " +
                                  std::to_string(disagreements)};
}

}  // namespace
}  // namespace tpskit

int main() {
  using tpskit::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 Bell states entangled under the God-given structure", tpskit::ac1},
      {"AC2 Bell eigenrelations", tpskit::ac2},
      {"AC3 observable-induced separability", tpskit::ac3},
      {"AC4 equivalent complete sets", tpskit::ac4},
      {"AC5 center-of-mass relativity", tpskit::ac5},
      {"AC6 Bargmann deformation", tpskit::ac6},
      {"AC7 property suite", tpskit::ac7},
      {"AC8 complementary machinery", tpskit::ac8},
      {"AC9 exact rank oracle agreement", tpskit::ac9},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s (%s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
