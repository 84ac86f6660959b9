#pragma once

// Complex special functions backing the closed-form sweep solution: Gamma,
// the Kummer confluent hypergeometric function M, and the parabolic cylinder
// function D with complex order and argument.

#include <complex>

#include "lz3/detail/ddouble.hpp"
#include "lz3/errors.hpp"

namespace lz3::specfun {

using cplx = std::complex<double>;

// Gamma(z), Lanczos approximation with reflection for Re z < 1/2.
// Throws PoleError within 1e-12 of a non-positive integer.
cplx gamma_complex(cplx z);

// 1/Gamma(z); entire, returns 0 at the poles of Gamma.
cplx rgamma(cplx z);

// Kummer M(a, b, z) = sum_k (a)_k z^k / ((b)_k k!).  Power series with
// compensated summation and double-double escalation under cancellation;
// large-|z| asymptotic combination of the two solutions for |z| > 40.
// Throws PoleError (b near non-positive integer) and NoConvergence.
cplx kummer_m(cplx a, cplx b, cplx z);

// Parabolic cylinder D_nu(z).  Kummer-based representation for
// |z| <= z_switch (default 10), Olver-type asymptotics with branch tracking
// beyond.  Throws NoConvergence / AccuracyLoss.
cplx pcf_d(cplx nu, cplx z);

// d/dz D_nu(z) = (z/2) D_nu(z) - D_{nu+1}(z).
cplx pcf_d_deriv(cplx nu, cplx z);

double pcf_z_switch();

namespace detail {

using lz3::detail::DDComplex;

// Forced-branch evaluators (seam tests) and the double-double series path
// used by the high-precision residual checks.
cplx pcf_d_series(cplx nu, cplx z);
cplx pcf_d_asymptotic(cplx nu, cplx z);
DDComplex kummer_series_dd(cplx a, cplx b, DDComplex z);
DDComplex pcf_d_dd(cplx nu, DDComplex z);

}  // namespace detail

}  // namespace lz3::specfun
