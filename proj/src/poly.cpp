#include "tpskit/poly.hpp"

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tpskit {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct ExactComplex {
  Rational re;
  Rational im;
};

struct Term {
  Index a = 0;
  Index b = 0;
  Rational weight;
};

BigInt binomial(Index n, Index k) {
  BigInt r = 1;
  for (Index i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

Rational power_of_two(Index e) { return Rational(BigInt(1) << static_cast<unsigned>(e)); }

// x1^a x2^b with x1 = X + x/2, x2 = X - x/2
std::vector<Term> forward_terms(Index a, Index b) {
  std::vector<Term> out;
  for (Index p = 0; p <= a; ++p) {
    for (Index q = 0; q <= b; ++q) {
      const Index down = (a - p) + (b - q);
      Rational w(binomial(a, p) * binomial(b, q));
      if ((b - q) % 2 == 1) w = -w;
      out.push_back({p + q, down, w / power_of_two(down)});
    }
  }
  return out;
}

// X^a x^b with X = (x1 + x2)/2, x = x1 - x2
std::vector<Term> inverse_terms(Index a, Index b) {
  std::vector<Term> out;
  for (Index p = 0; p <= a; ++p) {
    for (Index q = 0; q <= b; ++q) {
      Rational w(binomial(a, p) * binomial(b, q));
      if ((b - q) % 2 == 1) w = -w;
      out.push_back({p + q, (a - p) + (b - q), w / power_of_two(a)});
    }
  }
  return out;
}

std::string monomial(const std::pair<std::string, std::string>& vars, Index a, Index b) {
  return vars.first + "^" + std::to_string(a) + " " + vars.second + "^" + std::to_string(b);
}

template <class Terms>
PolyState substitute(const PolyState& p, Index target_degree,
                     const std::pair<std::string, std::string>& from,
                     const std::pair<std::string, std::string>& to, Terms terms) {
  if (p.variables != from) {
    throw Error(ErrorKind::InvalidInput, "expected variables (" + from.first + ", " +
                                             from.second + "), got (" + p.variables.first +
                                             ", " + p.variables.second + ")");
  }
  if (target_degree < 1) {
    throw Error(ErrorKind::InvalidInput, "target degree must be at least 1");
  }
  require_finite(p.coeffs, "polynomial coefficients");

  std::map<std::pair<Index, Index>, ExactComplex> acc;
  for (Index j = 0; j < p.coeffs.rows(); ++j) {
    for (Index i = 0; i < p.coeffs.cols(); ++i) {
      const Complex c = p.coeffs(j, i);
      if (c == Complex(0.0)) continue;
      const Rational re(c.real());
      const Rational im(c.imag());
      for (const Term& t : terms(j, i)) {
        auto& slot = acc[{t.a, t.b}];
        slot.re += t.weight * re;
        slot.im += t.weight * im;
      }
    }
  }

  PolyState out{to, target_degree, ComplexMatrix::Zero(target_degree, target_degree)};
  std::string outside;
  for (const auto& [key, value] : acc) {
    if (value.re == 0 && value.im == 0) continue;
    const auto [a, b] = key;
    if (a >= target_degree || b >= target_degree) {
      outside += (outside.empty() ? "" : ", ") + monomial(to, a, b);
      continue;
    }
    out.coeffs(a, b) = Complex(static_cast<double>(value.re), static_cast<double>(value.im));
  }
  if (!outside.empty()) {
    throw Error(ErrorKind::GridOverflow, "monomials " + outside + " lie outside the degree " +
                                             std::to_string(target_degree) + " grid");
  }
  return out;
}

}  // namespace

PolyState make_poly(std::pair<std::string, std::string> variables, ComplexMatrix coeffs) {
  if (coeffs.rows() < 1 || coeffs.rows() != coeffs.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "polynomial coefficients must be d x d, d >= 1");
  }
  require_finite(coeffs, "polynomial coefficients");
  const Index d = coeffs.rows();
  return {std::move(variables), d, std::move(coeffs)};
}

Eigen::VectorXcd poly_vector(const PolyState& p) {
  const Index d = p.max_degree;
  Eigen::VectorXcd v(d * d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) v[j * d + i] = p.coeffs(j, i);
  return v;
}

PolyState change_of_variables(const PolyState& p, Index target_degree) {
  return substitute(p, target_degree, {"x1", "x2"}, {"X", "x"}, forward_terms);
}

PolyState inverse_change_of_variables(const PolyState& p, Index target_degree) {
  return substitute(p, target_degree, {"X", "x"}, {"x1", "x2"}, inverse_terms);
}

Tps poly_tps(const std::pair<std::string, std::string>&, Index d) {
  if (d < 2) throw Error(ErrorKind::InvalidInput, "poly_tps needs d >= 2");
  return Tps::god_given(d, d);
}

Tps deformed_poly_tps(const ComplexMatrix& alpha, Index d, const Tolerance& tol) {
  if (d < 2) throw Error(ErrorKind::InvalidInput, "deformed_poly_tps needs d >= 2");
  if (alpha.rows() != d || alpha.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "alpha must be d x d");
  }
  require_finite(alpha, "alpha");
  Eigen::VectorXcd diag(d * d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      if (alpha(j, i) == Complex(0.0)) {
        throw Error(ErrorKind::ZeroAlpha, "alpha(" + std::to_string(j) + ", " +
                                              std::to_string(i) + ") is zero");
      }
      diag[j * d + i] = alpha(j, i);
    }
  }
  return Tps::create(d, d, diag.asDiagonal().toDenseMatrix(), tol);
}

}  // namespace tpskit
