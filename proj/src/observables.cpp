#include "tpskit/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace tpskit {

namespace {

bool is_hermitian(const ComplexMatrix& m, const Tolerance& tol) {
  return max_abs(m - m.adjoint()) <= tol.residual * std::max(1.0, max_abs(m));
}

void check_operators(const ComplexMatrix& r, const ComplexMatrix& t, const Tolerance& tol) {
  if (r.rows() != r.cols() || t.rows() != t.cols() || r.rows() != t.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "r and t must be square of the same size");
  }
  require_finite(r, "r");
  require_finite(t, "t");
  const double comm = max_abs(r * t - t * r);
  if (comm > tol.residual * std::max(1.0, max_abs(r) * max_abs(t))) {
    throw Error(ErrorKind::InvalidInput,
                "r and t do not commute (max |[r,t]| = " + std::to_string(comm) + ")");
  }
}

struct Eigenspace {
  Complex value;
  ComplexMatrix basis;  // orthonormal columns
};

double condition_number(const ComplexMatrix& m) {
  Eigen::BDCSVD<ComplexMatrix> solver(m);
  const RealVector& s = solver.singularValues();
  if (s.size() == 0) return 1.0;
  const double low = s[s.size() - 1];
  return low > 0.0 ? s[0] / low : std::numeric_limits<double>::infinity();
}

std::vector<Eigenspace> eigenspaces(const ComplexMatrix& op, bool hermitian,
                                    const Tolerance& tol) {
  std::vector<Eigenspace> out;
  const Index n = op.rows();
  if (hermitian) {
    const HermitianEigen eig = hermitian_eigendecompose(op, tol);
    for (const Cluster& c : eig.clusters)
      out.push_back({Complex(c.center, 0.0), eig.vectors.middleCols(c.begin, c.size)});
    return out;
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(op, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "eigensolver did not converge");
  }
  std::vector<Complex> values(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + solver.eigenvalues().size());
  const double scale = std::max(1.0, max_abs(op) * static_cast<double>(n));
  for (const auto& group : cluster_complex(values, tol)) {
    Complex center = 0.0;
    for (Index g : group) center += values[g];
    center /= static_cast<double>(group.size());
    const auto m = static_cast<Index>(group.size());
    const Svd dec = svd(op - center * ComplexMatrix::Identity(n, n));
    // geometric multiplicity must match the cluster size
    if (dec.sigma[n - m] > 10.0 * tol.eig_cluster * scale) {
      throw Error(ErrorKind::NotDiagonalizable,
                  "eigenvalue cluster of size " + std::to_string(m) +
                      " has a smaller eigenspace");
    }
    out.push_back({center, dec.v.rightCols(m)});
  }
  ComplexMatrix all(n, n);
  Index c = 0;
  for (const auto& e : out) {
    all.middleCols(c, e.basis.cols()) = e.basis;
    c += e.basis.cols();
  }
  if (condition_number(all) >= kMaxEigenvectorCondition) {
    throw Error(ErrorKind::NotDiagonalizable, "eigenvector matrix is ill-conditioned");
  }
  return out;
}

}  // namespace

ObservablePair::ObservablePair(ComplexMatrix r, ComplexMatrix t, const Tolerance& tol)
    : r_(std::move(r)), t_(std::move(t)) {
  check_operators(r_, t_, tol);
  hermitian_ = is_hermitian(r_, tol) && is_hermitian(t_, tol);
}

ObservablePair::ObservablePair(ComplexMatrix r, ComplexMatrix t, bool hermitian,
                               const Tolerance& tol)
    : r_(std::move(r)), t_(std::move(t)), hermitian_(hermitian) {
  check_operators(r_, t_, tol);
  if (hermitian_ && !(is_hermitian(r_, tol) && is_hermitian(t_, tol))) {
    throw Error(ErrorKind::NotHermitian, "observable pair flagged hermitian is not self-adjoint");
  }
}

ObservablePair ObservablePair::transposed() const {
  ObservablePair out = *this;
  std::swap(out.r_, out.t_);
  return out;
}

CharacteristicSets verify_standard_complete(const ObservablePair& p, const Tolerance& tol) {
  const Index n = p.dim();
  const auto rspaces = eigenspaces(p.r(), p.hermitian(), tol);
  const auto tspaces = eigenspaces(p.t(), p.hermitian(), tol);
  const auto k = static_cast<Index>(rspaces.size());
  const auto l = static_cast<Index>(tspaces.size());
  for (std::size_t j = 0; j < rspaces.size(); ++j) {
    if (rspaces[j].basis.cols() != l) {
      throw Error(ErrorKind::MultiplicityViolation,
                  "eigenvalue " + std::to_string(j) + " of r has multiplicity " +
                      std::to_string(rspaces[j].basis.cols()) + ", expected " +
                      std::to_string(l));
    }
  }
  for (std::size_t i = 0; i < tspaces.size(); ++i) {
    if (tspaces[i].basis.cols() != k) {
      throw Error(ErrorKind::MultiplicityViolation,
                  "eigenvalue " + std::to_string(i) + " of t has multiplicity " +
                      std::to_string(tspaces[i].basis.cols()) + ", expected " +
                      std::to_string(k));
    }
  }

  double spread = 0.0;
  for (const auto& a : tspaces)
    for (const auto& b : tspaces) spread = std::max(spread, std::abs(a.value - b.value));
  const double match_bound = std::sqrt(tol.eig_cluster) * (spread + 1.0);

  CharacteristicSets cs;
  cs.k = k;
  cs.l = l;
  cs.grid.resize(n, n);
  for (Index j = 0; j < k; ++j) {
    const ComplexMatrix& e = rspaces[j].basis;
    const ComplexMatrix restricted = e.adjoint() * p.t() * e;
    ComplexMatrix local_vectors;
    std::vector<Complex> local_values;
    if (p.hermitian()) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (restricted + restricted.adjoint()));
      if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "restricted eigensolver did not converge");
      }
      local_vectors = solver.eigenvectors();
      for (Index c = 0; c < l; ++c) local_values.emplace_back(solver.eigenvalues()[c], 0.0);
    } else {
      Eigen::ComplexEigenSolver<ComplexMatrix> solver(restricted);
      if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "restricted eigensolver did not converge");
      }
      local_vectors = solver.eigenvectors();
      for (Index c = 0; c < l; ++c) local_values.push_back(solver.eigenvalues()[c]);
    }
    std::vector<bool> taken(static_cast<std::size_t>(l), false);
    for (Index c = 0; c < l; ++c) {
      Index best = 0;
      double dist = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < l; ++i) {
        const double d = std::abs(local_values[c] - tspaces[i].value);
        if (d < dist) {
          dist = d;
          best = i;
        }
      }
      if (taken[best] || dist > match_bound) {
        throw Error(ErrorKind::JointDegeneracy,
                    "joint eigenspace (" + std::to_string(j) + ", " + std::to_string(best) +
                        ") is not one-dimensional");
      }
      taken[best] = true;
      cs.grid.col(j * l + best) = normalize_with_phase(e * local_vectors.col(c));
    }
  }
  if (!p.hermitian() && condition_number(cs.grid) >= kMaxEigenvectorCondition) {
    throw Error(ErrorKind::NotDiagonalizable, "joint eigenvector grid is ill-conditioned");
  }

  for (const auto& s : rspaces) cs.r_eigenvalues.push_back(s.value);
  for (const auto& s : tspaces) cs.t_eigenvalues.push_back(s.value);
  for (Index i = 0; i < l; ++i) {
    ComplexMatrix cols(n, k);
    for (Index j = 0; j < k; ++j) cols.col(j) = cs.grid.col(j * l + i);
    if (!p.hermitian()) {
      Eigen::HouseholderQR<ComplexMatrix> qr(cols);
      cols = qr.householderQ() * ComplexMatrix::Identity(n, k);
    }
    cs.M.push_back(std::move(cols));
  }
  for (Index j = 0; j < k; ++j) {
    ComplexMatrix cols = cs.grid.middleCols(j * l, l);
    if (!p.hermitian()) {
      Eigen::HouseholderQR<ComplexMatrix> qr(cols);
      cols = qr.householderQ() * ComplexMatrix::Identity(n, l);
    }
    cs.N.push_back(std::move(cols));
  }
  return cs;
}

Tps tps_from_observables(const ObservablePair& p, const Tolerance& tol) {
  CharacteristicSets cs = verify_standard_complete(p, tol);
  return Tps::create(cs.k, cs.l, std::move(cs.grid), tol);
}

ObservablePair complementary_pair(const ObservablePair& p, const CharacteristicSets& cs) {
  const Index k = cs.k, l = cs.l, n = k * l;
  // eigenvectors of the k x k block: e_0, e_0 + e_1, e_1 + e_2, ...
  ComplexMatrix s = ComplexMatrix::Zero(k, k);
  s(0, 0) = 1.0;
  for (Index j = 1; j < k; ++j) {
    s(j - 1, j) = 1.0;
    s(j, j) = 1.0;
  }
  Eigen::VectorXcd lambda(k);
  for (Index j = 0; j < k; ++j) lambda[j] = cs.r_eigenvalues[static_cast<std::size_t>(j)];
  const ComplexMatrix block = s * lambda.asDiagonal() * s.inverse();

  ComplexMatrix lifted = ComplexMatrix::Zero(n, n);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b)
      for (Index i = 0; i < l; ++i) lifted(a * l + i, b * l + i) = block(a, b);
  Eigen::PartialPivLU<ComplexMatrix> lu(cs.grid);
  const ComplexMatrix inv = lu.inverse();
  ComplexMatrix rt = cs.grid * lifted * inv;
  return ObservablePair(std::move(rt), p.t());
}

namespace {

// Null space of a stacked system via SVD, numeric rank by rank_rel.
ComplexMatrix null_space(const ComplexMatrix& system, const Tolerance& tol) {
  const Svd dec = svd(system);
  const auto rank = static_cast<Index>(numeric_rank(dec.sigma, tol));
  return dec.v.rightCols(system.cols() - rank);
}

// (I (x) left - right^T (x) I) vec(X) = vec(left X - X right)
ComplexMatrix sylvester_operator(const ComplexMatrix& left, const ComplexMatrix& right) {
  const Index m = left.rows();
  const Index q = right.rows();
  ComplexMatrix out = ComplexMatrix::Zero(m * q, m * q);
  for (Index c = 0; c < q; ++c) out.block(c * m, c * m, m, m) += left;
  for (Index a = 0; a < q; ++a)
    for (Index c = 0; c < q; ++c) {
      const Complex coef = right(c, a);  // (right^T)(a, c)
      if (coef != Complex(0.0)) out.block(a * m, c * m, m, m).diagonal().array() -= coef;
    }
  return out;
}

// Checks that every subspace is a normal module for {a, b} (commutant = scalars)
// and that all are isomorphic to the first one. Returns the intertwiners
// X_i with a|_i X_i = X_i a|_0 and b|_i X_i = X_i b|_0 in the coordinates of
// the orthonormal bundles of `first`.
std::optional<std::vector<ComplexMatrix>> module_condition(
    const ComplexMatrix& a, const ComplexMatrix& b, const std::vector<ComplexMatrix>& first,
    const std::vector<ComplexMatrix>& second, const Tolerance& tol) {
  if (first.size() != second.size() || first.empty()) return std::nullopt;
  std::vector<bool> matched(second.size(), false);
  for (const auto& s : first) {
    bool found = false;
    for (std::size_t c = 0; c < second.size() && !found; ++c) {
      if (!matched[c] && same_subspace(s, second[c], kSubspaceTolerance)) {
        matched[c] = true;
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }

  std::vector<ComplexMatrix> ra, rb;
  for (const auto& q : first) {
    ra.push_back(q.adjoint() * a * q);
    rb.push_back(q.adjoint() * b * q);
  }
  const Index m = first.front().cols();
  std::vector<ComplexMatrix> intertwiners;
  for (std::size_t i = 0; i < first.size(); ++i) {
    ComplexMatrix self(2 * m * m, m * m);
    self << sylvester_operator(ra[i], ra[i]), sylvester_operator(rb[i], rb[i]);
    if (null_space(self, tol).cols() != 1) return std::nullopt;

    if (i == 0) {
      intertwiners.push_back(ComplexMatrix::Identity(m, m));
      continue;
    }
    ComplexMatrix cross(2 * m * m, m * m);
    cross << sylvester_operator(ra[i], ra[0]), sylvester_operator(rb[i], rb[0]);
    const ComplexMatrix sol = null_space(cross, tol);
    if (sol.cols() != 1) return std::nullopt;
    const ComplexMatrix x = unvec(sol.col(0), m);
    if (numeric_rank(x, tol) != static_cast<std::size_t>(m)) return std::nullopt;
    intertwiners.push_back(x);
  }
  return intertwiners;
}

// Synchronic basis: r-eigenbasis of M_0 from the grid, carried to each M_i.
ComplexMatrix synchronic_basis(const CharacteristicSets& cs,
                               const std::vector<ComplexMatrix>& intertwiners) {
  const Index k = cs.k, l = cs.l, n = k * l;
  ComplexMatrix basis(n, n);
  const ComplexMatrix& q0 = cs.M[0];
  for (Index j = 0; j < k; ++j) basis.col(j * l) = cs.grid.col(j * l);
  for (Index i = 1; i < l; ++i) {
    const ComplexMatrix& qi = cs.M[static_cast<std::size_t>(i)];
    const ComplexMatrix map = qi * intertwiners[static_cast<std::size_t>(i)] * q0.adjoint();
    const ComplexMatrix column0 = basis(Eigen::all, Eigen::seq(0, n - 1, l));
    ComplexMatrix images = map * column0;
    const Eigen::VectorXcd lead = images.col(0);
    const Complex scale = phase_fix(lead) / lead.norm();
    for (Index j = 0; j < k; ++j) basis.col(j * l + i) = scale * images.col(j);
  }
  return basis;
}

}  // namespace

ComplementaryCondition complementary_condition(const ObservablePair& p1,
                                               const ObservablePair& p2,
                                               const Tolerance& tol) {
  if (p1.dim() != p2.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "pairs act on different spaces");
  }
  const CharacteristicSets c1 = verify_standard_complete(p1, tol);
  const CharacteristicSets c2 = verify_standard_complete(p2, tol);
  if (module_condition(p1.r(), p2.r(), c1.M, c2.M, tol)) return ComplementaryCondition::MSets;
  if (module_condition(p1.t(), p2.t(), c1.N, c2.N, tol)) return ComplementaryCondition::NSets;
  return ComplementaryCondition::None;
}

bool verify_complementary(const ObservablePair& p1, const ObservablePair& p2,
                          const Tolerance& tol) {
  return complementary_condition(p1, p2, tol) != ComplementaryCondition::None;
}

ComplementaryTpp tpp_from_complementary(const ObservablePair& p1, const ObservablePair& p2,
                                        const Tolerance& tol) {
  if (p1.dim() != p2.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "pairs act on different spaces");
  }
  const CharacteristicSets c1 = verify_standard_complete(p1, tol);
  const CharacteristicSets c2 = verify_standard_complete(p2, tol);

  std::optional<Tps> tps;
  if (auto xs = module_condition(p1.r(), p2.r(), c1.M, c2.M, tol)) {
    tps = Tps::create(c1.k, c1.l, synchronic_basis(c1, *xs), tol);
  } else if (module_condition(p1.t(), p2.t(), c1.N, c2.N, tol)) {
    // same construction with the factors exchanged
    const ObservablePair q1 = p1.transposed();
    const ObservablePair q2 = p2.transposed();
    const CharacteristicSets d1 = verify_standard_complete(q1, tol);
    const CharacteristicSets d2 = verify_standard_complete(q2, tol);
    auto ys = module_condition(q1.r(), q2.r(), d1.M, d2.M, tol);
    if (!ys) throw Error(ErrorKind::NotComplementary, "N-set condition is unstable");
    tps = swap_factors(Tps::create(d1.k, d1.l, synchronic_basis(d1, *ys), tol));
  } else {
    throw Error(ErrorKind::NotComplementary, "neither the M-set nor the N-set condition holds");
  }

  auto [a1, a2] = tps_to_tpp(*tps);
  for (const ComplexMatrix* op : {&p1.r(), &p2.r()}) {
    if (!a1.contains(*op)) {
      throw Error(ErrorKind::NotComplementary, "an r operator is not in the first algebra");
    }
  }
  for (const ComplexMatrix* op : {&p1.t(), &p2.t()}) {
    if (!a2.contains(*op)) {
      throw Error(ErrorKind::NotComplementary, "a t operator is not in the second algebra");
    }
  }
  return {std::move(a1), std::move(a2), std::move(*tps)};
}

}  // namespace tpskit
