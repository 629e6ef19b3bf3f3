#include "tpskit/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "tpskit/observables.hpp"

namespace tpskit {

namespace {

double span_bound(Index dim) {
  return kSpanTolerance * std::sqrt(static_cast<double>(std::max<Index>(dim, 1)));
}

// G = sum_g L_g^H L_g with L_g vec(X) = vec(gX - Xg), over the span basis.
// Its null space is the commutant; x^H G x = sum_g ||[g, X]||_F^2.
ComplexMatrix commutation_gram(const OperatorAlgebra& a) {
  const Index n = a.dim_space();
  const Index big = n * n;
  ComplexMatrix s1 = ComplexMatrix::Zero(n, n);
  ComplexMatrix s2 = ComplexMatrix::Zero(n, n);
  ComplexMatrix kron = ComplexMatrix::Zero(big, big);
  for (Index m = 0; m < a.dim(); ++m) {
    const ComplexMatrix g = a.element(m);
    s1.noalias() += g.adjoint() * g;
    s2.noalias() += g * g.adjoint();
    const ComplexMatrix gc = g.conjugate();
    for (Index p = 0; p < n; ++p)
      for (Index r = 0; r < n; ++r) {
        const Complex coef = gc(p, r);
        if (coef == Complex(0.0)) continue;
        kron.block(p * n, r * n, n, n) += coef * g;
      }
  }
  s2 = s2.conjugate().eval();
  ComplexMatrix gram = -kron - kron.adjoint();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (Index p = 0; p < n; ++p) {
    gram.block(p * n, p * n, n, n) += s1;
    for (Index r = 0; r < n; ++r) gram.block(p * n, r * n, n, n) += s2(p, r) * id;
  }
  return gram;
}

// Extends the first `used` orthonormal columns of q with the parts of
// `cand` outside their span. Residuals are measured relative to
// max(1, |candidate|) and taken in descending order; returns the indices of
// the columns added.
std::vector<Index> extend_span(ComplexMatrix& q, Index& used, const ComplexMatrix& cand) {
  std::vector<Index> added;
  if (cand.cols() == 0 || used >= q.cols()) return added;
  const RealVector norms0 = cand.colwise().norm().transpose();
  ComplexMatrix res = cand;
  if (used > 0) {
    const ComplexMatrix basis = q.leftCols(used);
    res.noalias() -= basis * (basis.adjoint() * cand);
    const ComplexMatrix again = basis.adjoint() * res;
    res.noalias() -= basis * again;
  }
  std::vector<Index> order(static_cast<std::size_t>(cand.cols()));
  std::iota(order.begin(), order.end(), Index{0});
  RealVector ratio(cand.cols());
  for (Index c = 0; c < cand.cols(); ++c)
    ratio[c] = res.col(c).norm() / std::max(norms0[c], 1.0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return ratio[x] > ratio[y]; });
  const Index start = used;
  for (Index c : order) {
    if (!(ratio[c] > kSpanTolerance) || used >= q.cols()) break;
    Eigen::VectorXcd v = res.col(c);
    if (used > start) {
      const ComplexMatrix fresh = q.middleCols(start, used - start);
      v -= fresh * (fresh.adjoint() * v);
    }
    // one more full pass keeps the basis orthonormal to working precision
    const ComplexMatrix all = q.leftCols(used);
    v -= all * (all.adjoint() * v);
    const double norm = v.norm();
    if (!(norm > kSpanTolerance * std::max(norms0[c], 1.0))) continue;
    q.col(used) = v / norm;
    added.push_back(used);
    ++used;
  }
  return added;
}

ComplexMatrix vec_columns(std::span<const ComplexMatrix> elements, Index n) {
  ComplexMatrix out(n * n, static_cast<Index>(elements.size()));
  for (std::size_t m = 0; m < elements.size(); ++m) out.col(static_cast<Index>(m)) = vec(elements[m]);
  return out;
}

// Eigenvectors of the PSD Gram matrix with eigenvalue <= rank_rel * reference
// (reference < 0: the largest eigenvalue floored at 1, reported through
// top_out). Span elements have unit norm, so 1 is the natural scale.
ComplexMatrix gram_null_space(const ComplexMatrix& gram, const Tolerance& tol,
                              double reference = -1.0, double* top_out = nullptr) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "Gram eigensolver did not converge");
  }
  const RealVector& vals = solver.eigenvalues();
  const double top = reference >= 0.0 ? reference : std::max(vals[vals.size() - 1], 1.0);
  if (top_out) *top_out = top;
  const double cut = tol.rank_rel * top;
  Index null = 0;
  while (null < vals.size() && vals[null] <= cut) ++null;
  return solver.eigenvectors().leftCols(null);
}

}  // namespace

OperatorAlgebra::OperatorAlgebra(Index n, ComplexMatrix span) : n_(n), span_(std::move(span)) {
  unital_ = n_ > 0 && contains(ComplexMatrix::Identity(n_, n_));
}

OperatorAlgebra OperatorAlgebra::from_orthonormal_span(Index n, ComplexMatrix span) {
  if (span.rows() != n * n) {
    throw Error(ErrorKind::DimensionMismatch, "span rows must equal n^2");
  }
  return OperatorAlgebra(n, std::move(span));
}

OperatorAlgebra OperatorAlgebra::from_elements(Index n, std::span<const ComplexMatrix> elements) {
  for (const auto& e : elements) {
    if (e.rows() != n || e.cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "algebra elements must be n x n");
    }
    require_finite(e, "algebra element");
  }
  return OperatorAlgebra(n, orthonormal_span(vec_columns(elements, n), 1e-12));
}

std::vector<ComplexMatrix> OperatorAlgebra::span_basis() const {
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(dim()));
  for (Index m = 0; m < dim(); ++m) out.push_back(element(m));
  return out;
}

double OperatorAlgebra::projection_residual(const ComplexMatrix& x) const {
  const Eigen::VectorXcd v = vec(x);
  const double scale = std::max(1.0, v.norm());
  if (dim() == 0) return v.norm() / scale;
  const Eigen::VectorXcd r = v - span_ * (span_.adjoint() * v);
  return r.norm() / scale;
}

bool OperatorAlgebra::contains(const ComplexMatrix& x) const {
  return x.rows() == n_ && x.cols() == n_ && projection_residual(x) <= span_bound(dim());
}

bool span_equal(const OperatorAlgebra& a, const OperatorAlgebra& b) {
  if (a.dim_space() != b.dim_space() || a.dim() != b.dim()) return false;
  if (a.dim() == 0) return true;
  const double bound = span_bound(a.dim());
  const ComplexMatrix& pa = a.span();
  const ComplexMatrix& pb = b.span();
  const double ab = (pb - pa * (pa.adjoint() * pb)).norm();
  const double ba = (pa - pb * (pb.adjoint() * pa)).norm();
  return ab <= bound && ba <= bound;
}

OperatorAlgebra algebra_generate(std::span<const ComplexMatrix> generators,
                                 bool include_identity, const Tolerance&) {
  if (generators.empty()) {
    throw Error(ErrorKind::InvalidInput, "at least one generator is required");
  }
  const Index n = generators.front().rows();
  for (const auto& g : generators) {
    if (g.rows() != n || g.cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "generators must share one square shape");
    }
    require_finite(g, "generator");
  }
  const Index big = n * n;
  ComplexMatrix q(big, big);
  Index used = 0;

  // Words in the generators are reached by closing the span under left
  // multiplication by the generator span.
  const ComplexMatrix gens = orthonormal_span(vec_columns(generators, n), kSpanTolerance);
  std::vector<Index> frontier;
  if (include_identity) {
    auto added = extend_span(q, used, vec(ComplexMatrix::Identity(n, n)));
    frontier.insert(frontier.end(), added.begin(), added.end());
  }
  {
    auto added = extend_span(q, used, gens);
    frontier.insert(frontier.end(), added.begin(), added.end());
  }
  while (!frontier.empty() && used < big) {
    std::vector<Index> next;
    ComplexMatrix cand(big, static_cast<Index>(frontier.size()));
    for (Index g = 0; g < gens.cols() && used < big; ++g) {
      const ComplexMatrix gm = unvec(gens.col(g), n);
      for (std::size_t f = 0; f < frontier.size(); ++f) {
        const ComplexMatrix s = unvec(q.col(frontier[f]), n);
        cand.col(static_cast<Index>(f)) = vec(gm * s);
      }
      auto added = extend_span(q, used, cand);
      next.insert(next.end(), added.begin(), added.end());
    }
    frontier = std::move(next);
  }
  return OperatorAlgebra::from_orthonormal_span(n, q.leftCols(used));
}

OperatorAlgebra commutant(const OperatorAlgebra& a, const Tolerance& tol) {
  const Index n = a.dim_space();
  if (a.dim() == 0) {
    return OperatorAlgebra::from_orthonormal_span(n, ComplexMatrix::Identity(n * n, n * n));
  }
  return OperatorAlgebra::from_orthonormal_span(n, gram_null_space(commutation_gram(a), tol));
}

namespace {

// max ||[g, h]||_F over span elements g of a, h of b.
double commutator_residual(const OperatorAlgebra& a, const OperatorAlgebra& b) {
  const auto ga = a.span_basis();
  const auto gb = b.span_basis();
  double worst = 0.0;
  for (const auto& g : ga)
    for (const auto& h : gb) worst = std::max(worst, (g * h - h * g).norm());
  return worst;
}

OperatorAlgebra commuting_join(const OperatorAlgebra& a1, const OperatorAlgebra& a2) {
  // span{a1, a2, a1 a2} is closed when the factors commute
  const Index n = a1.dim_space();
  ComplexMatrix cand(n * n, a1.dim() + a2.dim() + a1.dim() * a2.dim());
  cand.leftCols(a1.dim()) = a1.span();
  cand.middleCols(a1.dim(), a2.dim()) = a2.span();
  Index c = a1.dim() + a2.dim();
  for (Index x = 0; x < a1.dim(); ++x) {
    const ComplexMatrix g = a1.element(x);
    for (Index y = 0; y < a2.dim(); ++y) cand.col(c++) = vec(g * a2.element(y));
  }
  ComplexMatrix q(n * n, n * n);
  Index used = 0;
  extend_span(q, used, cand);
  return OperatorAlgebra::from_orthonormal_span(n, q.leftCols(used));
}

}  // namespace

OperatorAlgebra join(const OperatorAlgebra& a1, const OperatorAlgebra& a2, const Tolerance& tol) {
  if (a1.dim_space() != a2.dim_space()) {
    throw Error(ErrorKind::DimensionMismatch, "algebras act on different spaces");
  }
  if (a1.dim() > 0 && a2.dim() > 0 &&
      commutator_residual(a1, a2) <= tol.residual) {
    return commuting_join(a1, a2);
  }
  std::vector<ComplexMatrix> gens = a1.span_basis();
  for (auto& g : a2.span_basis()) gens.push_back(std::move(g));
  if (gens.empty()) {
    return OperatorAlgebra::from_orthonormal_span(a1.dim_space(),
                                                  ComplexMatrix(a1.dim_space() * a1.dim_space(), 0));
  }
  return algebra_generate(gens, false, tol);
}

namespace {

Index center_dim_from(const OperatorAlgebra& a, const ComplexMatrix& gram, double top,
                      const Tolerance& tol) {
  const ComplexMatrix restricted = a.span().adjoint() * gram * a.span();
  return gram_null_space(restricted, tol, top).cols();
}

}  // namespace

Index center_dim(const OperatorAlgebra& a, const Tolerance& tol) {
  if (a.dim() == 0) return 0;
  const ComplexMatrix gram = commutation_gram(a);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> full(gram, Eigen::EigenvaluesOnly);
  const double top = std::max(full.eigenvalues()[gram.rows() - 1], 1.0);
  return center_dim_from(a, gram, top, tol);
}

bool star_closed(const OperatorAlgebra& a) {
  for (Index m = 0; m < a.dim(); ++m)
    if (!a.contains(a.element(m).adjoint())) return false;
  return true;
}

TppVerdict is_tpp(const OperatorAlgebra& a1, const OperatorAlgebra& a2, const Tolerance& tol) {
  if (a1.dim_space() != a2.dim_space()) {
    throw Error(ErrorKind::DimensionMismatch, "algebras act on different spaces");
  }
  if (!a1.unital() || !a2.unital()) {
    throw Error(ErrorKind::NonUnital, "both algebras must contain the identity");
  }
  const Index n = a1.dim_space();
  TppVerdict v;
  v.checks.commute = commutator_residual(a1, a2) <= tol.residual;
  const OperatorAlgebra joined = v.checks.commute ? commuting_join(a1, a2) : join(a1, a2, tol);
  v.checks.join_full = joined.dim() == n * n;

  const ComplexMatrix g1 = commutation_gram(a1);
  const ComplexMatrix g2 = commutation_gram(a2);
  double top1 = 0.0;
  double top2 = 0.0;
  const OperatorAlgebra c1 =
      OperatorAlgebra::from_orthonormal_span(n, gram_null_space(g1, tol, -1.0, &top1));
  const OperatorAlgebra c2 =
      OperatorAlgebra::from_orthonormal_span(n, gram_null_space(g2, tol, -1.0, &top2));
  v.checks.mutual_commutant = span_equal(c1, a2) && span_equal(c2, a1);
  v.checks.trivial_center =
      center_dim_from(a1, g1, top1, tol) == 1 && center_dim_from(a2, g2, top2, tol) == 1;
  v.checks.star_closed = star_closed(a1) && star_closed(a2);

  const auto k = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(a1.dim()))));
  const auto l = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(a2.dim()))));
  v.checks.dims_square = k * k == a1.dim() && l * l == a2.dim() && k * l == n;
  if (v.checks.dims_square) {
    v.k = k;
    v.l = l;
    v.trivial_shape = k == 1 || l == 1;
  }
  const auto& c = v.checks;
  v.is_tpp = c.commute && c.join_full && c.mutual_commutant && c.trivial_center &&
             c.star_closed && c.dims_square;
  return v;
}

std::pair<OperatorAlgebra, OperatorAlgebra> tps_to_tpp(const Tps& t) {
  const Index n = t.dim(), k = t.k(), l = t.l();
  const ComplexMatrix& b = t.basis();
  const ComplexMatrix binv = t.solve(ComplexMatrix::Identity(n, n));

  // B (E_ab (x) 1_l) B^-1 sends x_{b,i} to x_{a,i}
  std::vector<ComplexMatrix> first;
  first.reserve(static_cast<std::size_t>(k * k));
  for (Index a = 0; a < k; ++a)
    for (Index c = 0; c < k; ++c) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      for (Index i = 0; i < l; ++i) e.noalias() += b.col(a * l + i) * binv.row(c * l + i);
      first.push_back(std::move(e));
    }
  std::vector<ComplexMatrix> second;
  second.reserve(static_cast<std::size_t>(l * l));
  for (Index c = 0; c < l; ++c)
    for (Index d = 0; d < l; ++d) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      for (Index j = 0; j < k; ++j) e.noalias() += b.col(j * l + c) * binv.row(j * l + d);
      second.push_back(std::move(e));
    }
  return {OperatorAlgebra::from_elements(n, first), OperatorAlgebra::from_elements(n, second)};
}

namespace {

std::string failed_checks(const TppChecks& c) {
  std::string out;
  auto add = [&](bool ok, const char* name) {
    if (ok) return;
    if (!out.empty()) out += ", ";
    out += name;
  };
  add(c.commute, "commute");
  add(c.join_full, "join_full");
  add(c.mutual_commutant, "mutual_commutant");
  add(c.trivial_center, "trivial_center");
  add(c.star_closed, "star_closed");
  add(c.dims_square, "dims_square");
  return out;
}

std::vector<ComplexMatrix> hermitian_parts(const OperatorAlgebra& a) {
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(a.dim()));
  for (Index m = 0; m < a.dim(); ++m) {
    const ComplexMatrix e = a.element(m);
    out.push_back(0.5 * (e + e.adjoint()));
  }
  return out;
}

ComplexMatrix random_combination(const std::vector<ComplexMatrix>& parts, Index n,
                                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& p : parts) out += coef(rng) * p;
  return out;
}

}  // namespace

Tps tpp_to_tps(const OperatorAlgebra& a1, const OperatorAlgebra& a2, std::uint64_t seed,
               const Tolerance& tol) {
  const TppVerdict verdict = is_tpp(a1, a2, tol);
  if (!verdict.is_tpp) {
    throw Error(ErrorKind::NotATpp, "failed checks: " + failed_checks(verdict.checks));
  }
  const Index n = a1.dim_space(), k = verdict.k, l = verdict.l;
  const auto parts1 = hermitian_parts(a1);
  const auto parts2 = hermitian_parts(a2);

  std::mt19937_64 rng(seed);
  constexpr int kMaxDraws = 16;
  std::optional<CharacteristicSets> sets;
  for (int draw = 0; draw < kMaxDraws && !sets; ++draw) {
    ComplexMatrix r = random_combination(parts1, n, rng);
    ComplexMatrix t = random_combination(parts2, n, rng);
    try {
      CharacteristicSets cs =
          verify_standard_complete(ObservablePair(std::move(r), std::move(t), true, tol), tol);
      if (cs.k == k && cs.l == l) sets = std::move(cs);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MultiplicityViolation && e.kind() != ErrorKind::JointDegeneracy)
        throw;
    }
  }
  if (!sets) {
    throw Error(ErrorKind::GenericElementFailure,
                "no generic observable pair after " + std::to_string(kMaxDraws) + " draws");
  }

  ComplexMatrix basis(n, n);
  const ComplexMatrix& m0 = sets->M[0];
  for (Index j = 0; j < k; ++j) basis.col(j * l) = sets->grid.col(j * l);
  const auto elements = a2.span_basis();
  for (Index i = 1; i < l; ++i) {
    const ComplexMatrix& mi = sets->M[static_cast<std::size_t>(i)];
    // element of a2 with the strongest M_0 -> M_i block
    Index best = 0;
    double best_norm = -1.0;
    for (Index m = 0; m < a2.dim(); ++m) {
      const double norm = (mi.adjoint() * elements[m] * m0).norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = m;
      }
    }
    const ComplexMatrix transfer = mi * (mi.adjoint() * elements[best]);
    ComplexMatrix images(n, k);
    for (Index j = 0; j < k; ++j) images.col(j) = transfer * basis.col(j * l);
    const Eigen::VectorXcd lead = images.col(0);
    const Complex scale = phase_fix(lead) / lead.norm();
    for (Index j = 0; j < k; ++j) basis.col(j * l + i) = scale * images.col(j);
  }
  return Tps::create(k, l, std::move(basis), tol);
}

}  // namespace tpskit
