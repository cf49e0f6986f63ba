#pragma once

#include "cens/cens.hpp"

#include <gtest/gtest.h>

namespace th {

using namespace cens;

inline Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Mat pauli_y() {
  Mat m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// Test-side generators use std::normal_distribution on purpose, independent of the
// library's samplers.
inline Mat random_matrix(long r, long c, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n;
  Mat m(r, c);
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j) m(i, j) = cplx(n(g), n(g));
  return m;
}

inline Mat random_hermitian(long d, std::uint64_t seed) {
  Mat a = random_matrix(d, d, seed);
  return 0.5 * (a + a.adjoint());
}

inline Mat random_density(long d, std::uint64_t seed) {
  Mat a = random_matrix(d, d, seed);
  Mat r = a * a.adjoint();
  return r / r.trace().real();
}

inline Mat diag(const std::vector<double>& v) {
  Mat m = Mat::Zero(static_cast<long>(v.size()), static_cast<long>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
  return m;
}

inline double max_diff(const Mat& a, const Mat& b) { return max_abs(a - b); }

}  // namespace th
