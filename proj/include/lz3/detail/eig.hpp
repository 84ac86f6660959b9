#pragma once

// Dense complex eigensolver for small matrices: Householder reduction to
// Hessenberg form, explicit Wilkinson-shifted QR with deflation, Schur-vector
// accumulation, and triangular back-substitution for eigenvectors.

#include <algorithm>
#include <array>
#include <cmath>

#include "lz3/algebra.hpp"
#include "lz3/errors.hpp"

namespace lz3::detail {

template <std::size_t N>
struct ComplexEig {
  std::array<cplx, N> values{};
  CMatrix<N> vectors;  // columns; empty columns never occur for finite input
};

template <std::size_t N>
void solve_linear(CMatrix<N> m, CVector<N>& rhs) {
  std::array<std::size_t, N> piv{};
  for (std::size_t i = 0; i < N; ++i) piv[i] = i;
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t best = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(m(piv[r], col)) > std::abs(m(piv[best], col))) best = r;
    std::swap(piv[col], piv[best]);
    const cplx d = m(piv[col], col);
    if (std::abs(d) == 0.0) throw IllConditioned("singular linear system");
    for (std::size_t r = col + 1; r < N; ++r) {
      const cplx f = m(piv[r], col) / d;
      if (f == cplx{}) continue;
      for (std::size_t c = col; c < N; ++c) m(piv[r], c) -= f * m(piv[col], c);
      rhs[piv[r]] -= f * rhs[piv[col]];
    }
  }
  CVector<N> x{};
  for (std::size_t row = N; row-- > 0;) {
    cplx s = rhs[piv[row]];
    for (std::size_t c = row + 1; c < N; ++c) s -= m(piv[row], c) * x[c];
    x[row] = s / m(piv[row], row);
  }
  rhs = x;
}

namespace eig_impl {

// Complex Givens rotation [c, s; -conj(s), c] (c real) zeroing g against f.
inline void make_givens(cplx f, cplx g, double& c, cplx& s) {
  const double d = std::sqrt(std::norm(f) + std::norm(g));
  if (d == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (f == cplx{}) {
    c = 0.0;
    s = g == cplx{} ? cplx(1.0) : std::conj(g) / std::abs(g);
    return;
  }
  const cplx ph = f / std::abs(f);
  c = std::abs(f) / d;
  s = ph * std::conj(g) / d;
}

}  // namespace eig_impl

template <std::size_t N>
ComplexEig<N> complex_eigensystem(CMatrix<N> a) {
  using eig_impl::make_givens;
  CMatrix<N> q = CMatrix<N>::identity();
  const double anorm = std::max(a.frobenius_norm(), 1e-300);

  // Householder reduction to upper Hessenberg, accumulating q.
  for (std::size_t k = 0; k + 2 < N; ++k) {
    double xnorm2 = 0.0;
    for (std::size_t i = k + 1; i < N; ++i) xnorm2 += std::norm(a(i, k));
    if (std::sqrt(xnorm2) <= 1e-300) continue;
    CVector<N> v{};
    const cplx x0 = a(k + 1, k);
    const cplx phase = x0 == cplx{} ? cplx(1.0) : x0 / std::abs(x0);
    for (std::size_t i = k + 1; i < N; ++i) v[i] = a(i, k);
    v[k + 1] += phase * std::sqrt(xnorm2);
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < N; ++i) vnorm2 += std::norm(v[i]);
    if (vnorm2 <= 1e-300) continue;
    const double inv = 2.0 / vnorm2;
    // a <- (I - 2 v v^dag) a
    for (std::size_t col = 0; col < N; ++col) {
      cplx dot = 0.0;
      for (std::size_t i = k + 1; i < N; ++i) dot += std::conj(v[i]) * a(i, col);
      dot *= inv;
      for (std::size_t i = k + 1; i < N; ++i) a(i, col) -= dot * v[i];
    }
    // a <- a (I - 2 v v^dag), q likewise
    for (std::size_t row = 0; row < N; ++row) {
      cplx dot = 0.0;
      for (std::size_t i = k + 1; i < N; ++i) dot += a(row, i) * v[i];
      dot *= inv;
      for (std::size_t i = k + 1; i < N; ++i) a(row, i) -= dot * std::conj(v[i]);
    }
    for (std::size_t row = 0; row < N; ++row) {
      cplx dot = 0.0;
      for (std::size_t i = k + 1; i < N; ++i) dot += q(row, i) * v[i];
      dot *= inv;
      for (std::size_t i = k + 1; i < N; ++i) q(row, i) -= dot * std::conj(v[i]);
    }
    for (std::size_t i = k + 2; i < N; ++i) a(i, k) = 0.0;
  }

  // Shifted QR with deflation from the bottom.
  std::size_t hi = N;  // active block is [lo, hi)
  std::size_t iters_here = 0, total_iters = 0;
  const std::size_t max_total = 30 * N * 10;
  while (hi > 1) {
    // Zero negligible subdiagonals, then find the active block.
    for (std::size_t m = 1; m < hi; ++m) {
      const double thr =
          1e-16 * (std::abs(a(m - 1, m - 1)) + std::abs(a(m, m))) + 1e-300;
      if (std::abs(a(m, m - 1)) <= thr) a(m, m - 1) = 0.0;
    }
    if (a(hi - 1, hi - 2) == cplx{}) {
      --hi;
      iters_here = 0;
      continue;
    }
    std::size_t lo = hi - 1;
    while (lo > 0 && a(lo, lo - 1) != cplx{}) --lo;

    if (++total_iters > max_total || ++iters_here > 30 * N)
      throw QRNoConvergence("complex QR did not deflate within the sweep budget");

    // Wilkinson shift from the trailing 2x2 of the block.
    const cplx t11 = a(hi - 2, hi - 2), t12 = a(hi - 2, hi - 1);
    const cplx t21 = a(hi - 1, hi - 2), t22 = a(hi - 1, hi - 1);
    const cplx tr = t11 + t22;
    const cplx det = t11 * t22 - t12 * t21;
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    cplx mu1 = 0.5 * (tr + disc), mu2 = 0.5 * (tr - disc);
    cplx shift = std::abs(mu1 - t22) < std::abs(mu2 - t22) ? mu1 : mu2;
    if (iters_here % 10 == 0 && iters_here > 0)
      shift += std::abs(a(hi - 1, hi - 2)) * 0.5;  // exceptional nudge

    for (std::size_t i = lo; i < hi; ++i) a(i, i) -= shift;
    // R = G_{hi-2} ... G_lo A restricted to the block.
    std::array<double, N> cs{};
    std::array<cplx, N> sn{};
    for (std::size_t i = lo; i + 1 < hi; ++i) {
      double c;
      cplx s;
      make_givens(a(i, i), a(i + 1, i), c, s);
      cs[i] = c;
      sn[i] = s;
      for (std::size_t col = i; col < N; ++col) {
        const cplx x = a(i, col), y = a(i + 1, col);
        a(i, col) = c * x + s * y;
        a(i + 1, col) = -std::conj(s) * x + c * y;
      }
    }
    // A <- R G_lo^dag ... G_{hi-2}^dag, q accumulates the same rotations.
    for (std::size_t i = lo; i + 1 < hi; ++i) {
      const double c = cs[i];
      const cplx s = sn[i];
      const std::size_t top = std::min(i + 2, hi);
      for (std::size_t row = 0; row < top; ++row) {
        const cplx x = a(row, i), y = a(row, i + 1);
        a(row, i) = c * x + std::conj(s) * y;
        a(row, i + 1) = -s * x + c * y;
      }
      for (std::size_t row = 0; row < N; ++row) {
        const cplx x = q(row, i), y = q(row, i + 1);
        q(row, i) = c * x + std::conj(s) * y;
        q(row, i + 1) = -s * x + c * y;
      }
    }
    for (std::size_t i = lo; i < hi; ++i) a(i, i) += shift;
  }

  // Eigenvectors of the triangular factor by back-substitution, with small
  // pivots perturbed (the customary safeguard for clustered eigenvalues).
  ComplexEig<N> out;
  for (std::size_t i = 0; i < N; ++i) out.values[i] = a(i, i);
  CMatrix<N> xs;
  for (std::size_t i = 0; i < N; ++i) {
    CVector<N> x{};
    x[i] = 1.0;
    for (std::size_t j = i; j-- > 0;) {
      cplx s = 0.0;
      for (std::size_t k = j + 1; k <= i; ++k) s += a(j, k) * x[k];
      cplx d = a(j, j) - a(i, i);
      const double dmin = 1e-14 * anorm;
      if (std::abs(d) < dmin) d = cplx(dmin, 0.0);
      x[j] = -s / d;
    }
    double nrm = 0.0;
    for (std::size_t j = 0; j <= i; ++j) nrm += std::norm(x[j]);
    nrm = std::sqrt(nrm);
    for (std::size_t j = 0; j <= i; ++j) xs(j, i) = x[j] / nrm;
  }
  out.vectors = q * xs;
  return out;
}

}  // namespace lz3::detail
