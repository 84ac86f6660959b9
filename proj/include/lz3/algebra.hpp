#pragma once

// Fixed-size complex linear algebra for the three-level sweep problem:
// spin-1 and Gell-Mann generators, Hamiltonian assembly, Hermitian
// eigensolving and the symmetric-square representation map.

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "lz3/errors.hpp"

namespace lz3 {

using cplx = std::complex<double>;

template <std::size_t N>
struct CMatrix {
  std::array<cplx, N * N> a{};

  static constexpr std::size_t dim = N;

  cplx& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

  static CMatrix zero() { return {}; }
  static CMatrix identity() {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  CMatrix adjoint() const {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
  }

  CMatrix transpose() const {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m(i, j) = (*this)(j, i);
    return m;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : a) s += std::norm(x);
    return std::sqrt(s);
  }

  bool all_finite() const {
    for (const auto& x : a)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
  }

  CMatrix& operator+=(const CMatrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) a[k] += o.a[k];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) a[k] -= o.a[k];
    return *this;
  }
  CMatrix& operator*=(cplx s) {
    for (auto& x : a) x *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix x, const CMatrix& y) { return x += y; }
  friend CMatrix operator-(CMatrix x, const CMatrix& y) { return x -= y; }
  friend CMatrix operator*(cplx s, CMatrix x) { return x *= s; }
  friend CMatrix operator*(CMatrix x, cplx s) { return x *= s; }

  friend CMatrix operator*(const CMatrix& x, const CMatrix& y) {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const cplx xik = x(i, k);
        if (xik == cplx{}) continue;
        for (std::size_t j = 0; j < N; ++j) m(i, j) += xik * y(k, j);
      }
    return m;
  }
};

template <std::size_t N>
using CVector = std::array<cplx, N>;

using Matrix2 = CMatrix<2>;
using Matrix3 = CMatrix<3>;
using Matrix9 = CMatrix<9>;
using Vector2 = CVector<2>;
using Vector3 = CVector<3>;
using Vector9 = CVector<9>;

template <std::size_t N>
CVector<N> matvec(const CMatrix<N>& m, const CVector<N>& v) {
  CVector<N> r{};
  for (std::size_t i = 0; i < N; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < N; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

template <std::size_t N>
double vec_norm(const CVector<N>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

// exp(M) by scaling and squaring with a Taylor kernel; accurate to near
// machine precision for the moderate norms used here.
template <std::size_t N>
CMatrix<N> expm(const CMatrix<N>& m) {
  double nrm = m.frobenius_norm();
  int squarings = 0;
  while (nrm > 0.25 && squarings < 60) {
    nrm *= 0.5;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  CMatrix<N> x = m;
  x *= scale;
  CMatrix<N> term = CMatrix<N>::identity();
  CMatrix<N> sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = term * x;
    term *= 1.0 / static_cast<double>(k);
    sum += term;
    if (term.frobenius_norm() < 1e-20 * sum.frobenius_norm()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Linear-sweep parameters: H(t) = [[a t, D(t), 0], [D(t), 0, W(t)], [0, W(t), -a t]]
// with D = delta and W = omega, optionally enveloped by exp(-(t/2
// sigma)^2).
struct LZParams {
  double a = 0.0;
  double delta = 0.0;
  double omega = 0.0;
  std::optional<double> pulse_sigma;

  void validate() const {
    if (!std::isfinite(a) || !std::isfinite(delta) || !std::isfinite(omega))
      throw DomainError("LZParams must be finite");
    if (pulse_sigma && !(*pulse_sigma > 0.0))
      throw DomainError("pulse_sigma must be positive");
  }

  double envelope(double t) const {
    if (!pulse_sigma) return 1.0;
    const double u = t / (2.0 * *pulse_sigma);
    return std::exp(-u * u);
  }
  double delta_at(double t) const { return delta * envelope(t); }
  double omega_at(double t) const { return omega * envelope(t); }
};

// Coefficients of the general traceless sweep Hamiltonian
// (a t)/2 (l3 + sqrt(3) l8) + sum_j delta_j l_j over j in {1,2,4,5,6,7}.
struct SU3Params {
  double a = 0.0;
  // Ordered {d1, d2, d4, d5, d6, d7}.
  std::array<double, 6> coeffs{};

  void validate() const {
    if (!std::isfinite(a)) throw DomainError("SU3Params sweep rate must be finite");
    for (double c : coeffs)
      if (!std::isfinite(c)) throw DomainError("SU3Params coefficients must be finite");
  }
};

enum class SymmetryClass { SU2, SU3 };

namespace algebra {

// (S_x, S_y, S_z) in the basis where S_z = diag(1, 0, -1).
std::array<Matrix3, 3> spin1_matrices();

// The eight Gell-Mann matrices in the standard convention, Tr(l_i l_j) = 2 d_ij.
std::array<Matrix3, 8> gellmann_matrices();

Matrix3 build_hamiltonian(const LZParams& p, double t);
Matrix3 build_su3_hamiltonian(const SU3Params& p, double t);

// SU2 iff |delta - omega| <= 1e-12 max(1, |delta|, |omega|).
SymmetryClass classify(const LZParams& p);

// Ascending eigenvalues of a Hermitian 3x3 matrix via the trigonometric
// solution of the characteristic cubic, with a Jacobi fallback near
// degenerate discriminants.  Throws NonHermitianInput.
std::array<double, 3> eigenvalues_hermitian3(const Matrix3& h);

// Full eigensystem (cyclic complex Jacobi), ascending eigenvalues, columns of
// `vectors` are the corresponding eigenvectors.
struct EigenSystem3 {
  std::array<double, 3> values{};
  Matrix3 vectors;
};
EigenSystem3 eigensystem_hermitian3(const Matrix3& h);

// Spin-1 matrix of a 2x2 unitary acting on the symmetric square of the
// spin-1/2 space.  Throws NonUnitaryInput.
Matrix3 symmetric_square(const Matrix2& u);

struct GapMinimum {
  double t = 0.0;
  double gap = 0.0;
  int pair = 0;  // 0: lower adjacent pair, 1: upper adjacent pair
};

// Local minima of adjacent-eigenvalue gaps over a uniformly sampled window,
// refined by three-point parabolic interpolation, sorted by time.
std::vector<GapMinimum> gap_minima(const LZParams& p, double t0, double t1,
                                   double dt);

}  // namespace algebra
}  // namespace lz3
