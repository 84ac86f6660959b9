#include "lz3/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace lz3::algebra {

namespace {
constexpr cplx kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

std::array<Matrix3, 3> spin1_matrices() {
  Matrix3 sx, sy, sz;
  sx(0, 1) = sx(1, 0) = sx(1, 2) = sx(2, 1) = kInvSqrt2;
  sy(0, 1) = sy(1, 2) = -kI * kInvSqrt2;
  sy(1, 0) = sy(2, 1) = kI * kInvSqrt2;
  sz(0, 0) = 1.0;
  sz(2, 2) = -1.0;
  return {sx, sy, sz};
}

std::array<Matrix3, 8> gellmann_matrices() {
  std::array<Matrix3, 8> l;
  l[0](0, 1) = l[0](1, 0) = 1.0;
  l[1](0, 1) = -kI;
  l[1](1, 0) = kI;
  l[2](0, 0) = 1.0;
  l[2](1, 1) = -1.0;
  l[3](0, 2) = l[3](2, 0) = 1.0;
  l[4](0, 2) = -kI;
  l[4](2, 0) = kI;
  l[5](1, 2) = l[5](2, 1) = 1.0;
  l[6](1, 2) = -kI;
  l[6](2, 1) = kI;
  const double s3 = 1.0 / std::sqrt(3.0);
  l[7](0, 0) = s3;
  l[7](1, 1) = s3;
  l[7](2, 2) = -2.0 * s3;
  return l;
}

Matrix3 build_hamiltonian(const LZParams& p, double t) {
  p.validate();
  Matrix3 h;
  const double d = p.delta_at(t);
  const double w = p.omega_at(t);
  h(0, 0) = p.a * t;
  h(2, 2) = -p.a * t;
  h(0, 1) = h(1, 0) = d;
  h(1, 2) = h(2, 1) = w;
  return h;
}

Matrix3 build_su3_hamiltonian(const SU3Params& p, double t) {
  p.validate();
  const auto l = gellmann_matrices();
  Matrix3 h = l[2] + std::sqrt(3.0) * l[7];
  h *= 0.5 * p.a * t;
  // coeffs are ordered {d1, d2, d4, d5, d6, d7}; map to lambda indices.
  constexpr std::array<int, 6> idx{0, 1, 3, 4, 5, 6};
  for (std::size_t k = 0; k < 6; ++k) h += p.coeffs[k] * l[idx[k]];
  return h;
}

SymmetryClass classify(const LZParams& p) {
  p.validate();
  const double scale = std::max({1.0, std::abs(p.delta), std::abs(p.omega)});
  return std::abs(p.delta - p.omega) <= 1e-12 * scale ? SymmetryClass::SU2
                                                      : SymmetryClass::SU3;
}

namespace {

void require_hermitian(const Matrix3& h) {
  double dev = (h - h.adjoint()).frobenius_norm();
  if (dev > 1e-12 * std::max(1.0, h.frobenius_norm()))
    throw NonHermitianInput("matrix deviates from its adjoint by " +
                            std::to_string(dev));
}

// Cyclic complex Jacobi on an N x N Hermitian matrix; returns ascending
// eigenvalues, eigenvectors as columns of v.
template <std::size_t N>
void hermitian_jacobi(CMatrix<N> a, std::array<double, N>& vals, CMatrix<N>& v) {
  v = CMatrix<N>::identity();
  const double scale = std::max(a.frobenius_norm(), 1e-300);
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-15 * scale) break;
    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const cplx apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double phi = std::arg(apq);
        const double m = std::abs(apq);
        const double theta = 0.5 * std::atan2(2.0 * m, app - aqq);
        const double c = std::cos(theta);
        const cplx s = std::sin(theta) * std::exp(cplx(0.0, phi));
        // Update A = R^dag A R where R mixes columns p, q.
        for (std::size_t k = 0; k < N; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp + s * akq;
          a(k, q) = -std::conj(s) * akp + c * akq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + std::conj(s) * aqk;
          a(q, k) = -s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp + s * vkq;
          v(k, q) = -std::conj(s) * vkp + c * vkq;
        }
      }
    }
  }
  std::array<std::size_t, N> order{};
  for (std::size_t i = 0; i < N; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  CMatrix<N> vs;
  for (std::size_t j = 0; j < N; ++j) {
    vals[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < N; ++i) vs(i, j) = v(i, order[j]);
  }
  v = vs;
}

}  // namespace

std::array<double, 3> eigenvalues_hermitian3(const Matrix3& h) {
  require_hermitian(h);
  // Characteristic cubic of the trace-shifted matrix K = H - m I:
  // lambda^3 - (tr K^2 / 2) lambda - det K = 0, solved trigonometrically.
  const double m = h.trace().real() / 3.0;
  Matrix3 k = h;
  for (int i = 0; i < 3; ++i) k(i, i) -= m;
  const Matrix3 k2 = k * k;
  const double p2 = k2.trace().real() / 6.0;
  if (p2 <= 0.0) return {m, m, m};  // scalar matrix
  const double p = std::sqrt(p2);
  const double detk =
      (k(0, 0) * (k(1, 1) * k(2, 2) - k(1, 2) * k(2, 1)) -
       k(0, 1) * (k(1, 0) * k(2, 2) - k(1, 2) * k(2, 0)) +
       k(0, 2) * (k(1, 0) * k(2, 1) - k(1, 1) * k(2, 0)))
          .real();
  const double r = detk / (2.0 * p * p * p);
  // Near-degenerate discriminant: fall back to Jacobi iteration.
  if (std::abs(std::abs(r) - 1.0) < 1e-14) {
    std::array<double, 3> vals{};
    Matrix3 v;
    hermitian_jacobi<3>(h, vals, v);
    return vals;
  }
  const double phi = std::acos(std::clamp(r, -1.0, 1.0)) / 3.0;
  std::array<double, 3> w = {m + 2.0 * p * std::cos(phi),
                             m + 2.0 * p * std::cos(phi - 2.0 * M_PI / 3.0),
                             m + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0)};
  std::sort(w.begin(), w.end());
  return w;
}

EigenSystem3 eigensystem_hermitian3(const Matrix3& h) {
  require_hermitian(h);
  EigenSystem3 es;
  hermitian_jacobi<3>(h, es.values, es.vectors);
  return es;
}

Matrix3 symmetric_square(const Matrix2& u) {
  const Matrix2 gram = u.adjoint() * u;
  if ((gram - Matrix2::identity()).frobenius_norm() > 1e-10)
    throw NonUnitaryInput("input is not unitary to 1e-10");
  const cplx a = u(0, 0), b = u(0, 1), c = u(1, 0), d = u(1, 1);
  const double s2 = std::sqrt(2.0);
  Matrix3 m;
  m(0, 0) = a * a;
  m(0, 1) = s2 * a * b;
  m(0, 2) = b * b;
  m(1, 0) = s2 * a * c;
  m(1, 1) = a * d + b * c;
  m(1, 2) = s2 * b * d;
  m(2, 0) = c * c;
  m(2, 1) = s2 * c * d;
  m(2, 2) = d * d;
  return m;
}

std::vector<algebra::GapMinimum> gap_minima(const LZParams& p, double t0,
                                            double t1, double dt) {
  if (!(t1 > t0) || !(dt > 0.0)) throw DomainError("gap_minima needs t0 < t1, dt > 0");
  const std::size_t n = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 0.5));
  std::vector<double> times(n + 1);
  std::vector<std::array<double, 2>> gaps(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    times[i] = t;
    const auto ev = eigenvalues_hermitian3(build_hamiltonian(p, t));
    gaps[i] = {ev[1] - ev[0], ev[2] - ev[1]};
  }
  std::vector<GapMinimum> out;
  for (int pair = 0; pair < 2; ++pair) {
    for (std::size_t i = 1; i + 1 <= n; ++i) {
      const double gm = gaps[i - 1][pair], g0 = gaps[i][pair], gp = gaps[i + 1][pair];
      if (g0 <= gm && g0 < gp) {
        // Three-point parabolic refinement around the grid minimum.
        const double denom = gm - 2.0 * g0 + gp;
        double shift = 0.0, gmin = g0;
        if (denom > 0.0) {
          shift = 0.5 * (gm - gp) / denom;
          shift = std::clamp(shift, -0.5, 0.5);
          gmin = g0 - 0.25 * (gm - gp) * shift;
        }
        out.push_back({times[i] + shift * dt, gmin, pair});
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const GapMinimum& x, const GapMinimum& y) { return x.t < y.t; });
  return out;
}

}  // namespace lz3::algebra
