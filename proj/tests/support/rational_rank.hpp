#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tpskit::testing {

using Rational = boost::multiprecision::cpp_rational;

/// Exact Gaussian-field element a + b i with rational parts.
struct ExactComplex {
  Rational re;
  Rational im;

  bool is_zero() const { return re == 0 && im == 0; }
};

inline ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
  return {a.re - b.re, a.im - b.im};
}

inline ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
  const Rational d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

using ExactMatrix = std::vector<std::vector<ExactComplex>>;

/// Rank by fraction-exact row reduction.
inline std::size_t exact_rank(ExactMatrix m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size();
  const std::size_t cols = m.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot][c].is_zero()) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][c].is_zero()) continue;
      const ExactComplex f = m[r][c] / m[rank][c];
      for (std::size_t cc = c; cc < cols; ++cc) m[r][cc] = m[r][cc] - f * m[rank][cc];
    }
    ++rank;
  }
  return rank;
}

}  // namespace tpskit::testing
