#pragma once

// Shared helpers for the test suites: a reproducible generator for random
// matrices/states and small oracles kept independent of the library paths
// they check.

#include <complex>
#include <random>

#include "lz3/algebra.hpp"

namespace lz3::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed1234abcdef01ull);
  return gen;
}

inline double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng());
}

inline cplx random_cplx(double scale = 1.0) {
  return {scale * uniform(-1.0, 1.0), scale * uniform(-1.0, 1.0)};
}

template <std::size_t N>
CMatrix<N> random_matrix(double scale = 1.0) {
  CMatrix<N> m;
  for (auto& x : m.a) x = random_cplx(scale);
  return m;
}

template <std::size_t N>
CMatrix<N> random_hermitian(double scale = 1.0) {
  CMatrix<N> m = random_matrix<N>(scale);
  return 0.5 * (m + m.adjoint());
}

// Random unitary via the exponential of a random Hermitian generator.
template <std::size_t N>
CMatrix<N> random_unitary(double scale = 1.0) {
  const CMatrix<N> h = random_hermitian<N>(scale);
  return expm(cplx(0.0, 1.0) * h);
}

inline Vector3 random_state3() {
  Vector3 v{random_cplx(), random_cplx(), random_cplx()};
  const double n = vec_norm(v);
  for (auto& x : v) x /= n;
  return v;
}

}  // namespace lz3::test
