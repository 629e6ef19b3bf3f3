#include "tpskit/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tpskit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularBasis: return "SingularBasis";
    case ErrorKind::ZeroState: return "ZeroState";
    case ErrorKind::NonUnital: return "NonUnital";
    case ErrorKind::NotATpp: return "NotATpp";
    case ErrorKind::GenericElementFailure: return "GenericElementFailure";
    case ErrorKind::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorKind::MultiplicityViolation: return "MultiplicityViolation";
    case ErrorKind::JointDegeneracy: return "JointDegeneracy";
    case ErrorKind::NotComplementary: return "NotComplementary";
    case ErrorKind::NonCompositeDim: return "NonCompositeDim";
    case ErrorKind::ShapeTooSmall: return "ShapeTooSmall";
    case ErrorKind::GridOverflow: return "GridOverflow";
    case ErrorKind::ZeroAlpha: return "ZeroAlpha";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

void Tolerance::validate() const {
  if (!(eig_cluster > 0.0) || !(rank_rel > 0.0) || !(residual > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "tolerances must be strictly positive");
  }
  if (!(rank_rel < 1.0)) {
    throw Error(ErrorKind::InvalidInput, "rank_rel must be below 1");
  }
}

void require_finite(const ComplexMatrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::NonFinite, std::string(what) + " contains NaN or Inf");
  }
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

std::vector<Cluster> cluster_sorted(std::span<const double> ascending, const Tolerance& tol) {
  std::vector<Cluster> out;
  if (ascending.empty()) return out;
  const double gap = tol.eig_cluster * (ascending.back() - ascending.front() + 1.0);
  Index begin = 0;
  const auto n = static_cast<Index>(ascending.size());
  for (Index c = 1; c <= n; ++c) {
    if (c == n || ascending[c] - ascending[c - 1] > gap) {
      double sum = 0.0;
      for (Index i = begin; i < c; ++i) sum += ascending[i];
      out.push_back({begin, c - begin, sum / static_cast<double>(c - begin)});
      begin = c;
    }
  }
  return out;
}

std::vector<std::vector<Index>> cluster_complex(std::span<const Complex> values,
                                                const Tolerance& tol) {
  const auto n = static_cast<Index>(values.size());
  double spread = 0.0;
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b) spread = std::max(spread, std::abs(values[a] - values[b]));
  const double gap = tol.eig_cluster * (spread + 1.0);

  // union-find over the "within gap" graph
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      if (std::abs(values[a] - values[b]) <= gap) parent[find(a)] = find(b);

  std::vector<std::vector<Index>> groups;
  std::vector<Index> slot(static_cast<std::size_t>(n), -1);
  for (Index a = 0; a < n; ++a) {
    const Index root = find(a);
    if (slot[root] < 0) {
      slot[root] = static_cast<Index>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(a);
  }
  auto mean = [&](const std::vector<Index>& g) {
    Complex s = 0.0;
    for (Index i : g) s += values[i];
    return s / static_cast<double>(g.size());
  };
  std::sort(groups.begin(), groups.end(), [&](const auto& x, const auto& y) {
    const Complex mx = mean(x), my = mean(y);
    if (mx.real() != my.real()) return mx.real() < my.real();
    return mx.imag() < my.imag();
  });
  return groups;
}

HermitianEigen hermitian_eigendecompose(const ComplexMatrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "eigendecomposition needs a square matrix");
  }
  require_finite(m, "matrix");
  const double asym = max_abs(m - m.adjoint());
  if (asym > tol.residual * std::max(1.0, max_abs(m))) {
    throw Error(ErrorKind::NotHermitian,
                "max |m - m^H| = " + std::to_string(asym) + " exceeds tolerance");
  }
  HermitianEigen out;
  if (m.rows() == 0) return out;
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "Hermitian eigensolver did not converge");
  }
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  out.clusters = cluster_sorted({out.values.data(), static_cast<std::size_t>(out.values.size())},
                                tol);
  return out;
}

Svd svd(const ComplexMatrix& m) {
  require_finite(m, "matrix");
  Svd out;
  if (m.size() == 0) {
    out.u = ComplexMatrix::Identity(m.rows(), m.rows());
    out.v = ComplexMatrix::Identity(m.cols(), m.cols());
    out.sigma = RealVector::Zero(0);
    return out;
  }
  Eigen::BDCSVD<ComplexMatrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "SVD did not converge");
  }
  out.u = solver.matrixU();
  out.sigma = solver.singularValues();
  out.v = solver.matrixV();
  return out;
}

std::size_t numeric_rank(const RealVector& sigma, const Tolerance& tol) {
  if (sigma.size() == 0 || !(sigma[0] > 0.0)) return 0;
  const double cut = tol.rank_rel * sigma[0];
  std::size_t r = 0;
  for (Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > cut) ++r;
  return r;
}

std::size_t numeric_rank(const ComplexMatrix& m, const Tolerance& tol) {
  if (m.size() == 0) return 0;
  require_finite(m, "matrix");
  Eigen::BDCSVD<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "SVD did not converge");
  }
  return numeric_rank(RealVector(solver.singularValues()), tol);
}

ComplexMatrix complete_orthonormal(const ComplexMatrix& vs, Index n, const Tolerance& tol) {
  if (vs.cols() > 0 && vs.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, "columns must have length n");
  }
  if (vs.cols() > n) {
    throw Error(ErrorKind::NotOrthonormal, "more than n columns cannot be orthonormal");
  }
  require_finite(vs, "columns");
  const Index c = vs.cols();
  if (c == 0) return ComplexMatrix::Identity(n, n);
  const double gram = max_abs(vs.adjoint() * vs - ComplexMatrix::Identity(c, c));
  if (gram > tol.residual) {
    throw Error(ErrorKind::NotOrthonormal, "Gram residual " + std::to_string(gram));
  }
  // The trailing Householder columns span the orthogonal complement of vs.
  Eigen::HouseholderQR<ComplexMatrix> qr(vs);
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  ComplexMatrix out(n, n);
  out.leftCols(c) = vs;
  out.rightCols(n - c) = q.rightCols(n - c);
  return out;
}

Complex phase_fix(const Eigen::VectorXcd& v) {
  Index best = 0;
  double mag = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    // strict comparison keeps the lowest index on ties
    if (std::abs(v[i]) > mag * (1.0 + 1e-12)) {
      mag = std::abs(v[i]);
      best = i;
    }
  }
  if (!(mag > 0.0)) return 1.0;
  return std::conj(v[best]) / mag;
}

Eigen::VectorXcd normalize_with_phase(const Eigen::VectorXcd& v) {
  const double norm = v.norm();
  if (!(norm > 0.0)) return v;
  const Eigen::VectorXcd unit = v / norm;
  return unit * phase_fix(unit);
}

ComplexMatrix orthonormal_span(const ComplexMatrix& columns, double rel_cutoff) {
  const Index rows = columns.rows();
  ComplexMatrix work = columns;
  double scale = 0.0;
  for (Index c = 0; c < work.cols(); ++c) scale = std::max(scale, work.col(c).norm());
  ComplexMatrix q(rows, std::min(rows, work.cols()));
  Index found = 0;
  if (!(scale > 0.0)) return q.leftCols(0);
  std::vector<bool> used(static_cast<std::size_t>(work.cols()), false);
  while (found < q.cols()) {
    Index pivot = -1;
    double best = rel_cutoff * scale;
    for (Index c = 0; c < work.cols(); ++c) {
      if (used[c]) continue;
      const double norm = work.col(c).norm();
      if (norm > best) {
        best = norm;
        pivot = c;
      }
    }
    if (pivot < 0) break;
    used[pivot] = true;
    Eigen::VectorXcd v = work.col(pivot);
    if (found > 0) v -= q.leftCols(found) * (q.leftCols(found).adjoint() * v);
    const double norm = v.norm();
    if (!(norm > rel_cutoff * scale)) continue;
    v /= norm;
    q.col(found++) = v;
    for (Index c = 0; c < work.cols(); ++c) {
      if (!used[c]) work.col(c) -= v * (v.adjoint() * work.col(c));
    }
  }
  return q.leftCols(found);
}

double subspace_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (b.cols() == 0) return 0.0;
  if (a.cols() == 0) return 1.0;
  const ComplexMatrix diff = b - a * (a.adjoint() * b);
  return diff.colwise().norm().maxCoeff();
}

bool same_subspace(const ComplexMatrix& a, const ComplexMatrix& b, double bound) {
  return a.rows() == b.rows() && a.cols() == b.cols() && subspace_residual(a, b) <= bound &&
         subspace_residual(b, a) <= bound;
}

Eigen::VectorXcd vec(const ComplexMatrix& x) {
  return Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
}

ComplexMatrix unvec(const Eigen::VectorXcd& v, Index n) {
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

}  // namespace tpskit
