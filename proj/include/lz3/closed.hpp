#pragma once

// Unitary three-level dynamics: the coupled Schroedinger system, the
// closed-form solution for the symmetric (su(2)) coupling with constants
// fitted from initial conditions, scalar third-order ODE residual checks,
// and the two-level reference system.

#include <functional>
#include <optional>

#include "lz3/algebra.hpp"
#include "lz3/detail/ddouble.hpp"
#include "lz3/propagate.hpp"
#include "lz3/trajectory.hpp"

namespace lz3::closed {

using lz3::detail::DDComplex;
using lz3::detail::DDouble;

// Right-hand side d(psi)/dt = -i H(t) psi for the three-level sweep.
propagate::Rhs schrodinger_rhs(const LZParams& p);
propagate::Rhs schrodinger_rhs(const SU3Params& p);

Trajectory evolve_state(const LZParams& p, const Vector3& psi0,
                        const TimeGrid& grid, const propagate::IntegratorConfig& cfg);
Trajectory evolve_state(const SU3Params& p, const Vector3& psi0,
                        const TimeGrid& grid, const propagate::IntegratorConfig& cfg);

// Coefficients of psi1 = C1 u^2 + C2 u v + C3 v^2 in the two parabolic
// cylinder basis functions, fitted to the sweep initial conditions at t0.
struct AnalyticConstants {
  cplx c1, c2, c3;
  double fit_residual = 0.0;
  double condition = 0.0;
};

// Solves the 3x3 linear system matching psi1 and its first two derivatives
// at t0 (psi1 = 1, psi2 = psi3 = 0 there).  Requires the symmetric coupling
// and a != 0.  Throws IllConditioned above condition 1e12.
AnalyticConstants fit_constants(const LZParams& p, double t0);

// Closed-form state at time t; psi2 and psi3 are recovered from analytic
// derivatives of psi1.  Throws DomainError outside the su(2) class.
Vector3 analytic_state(const LZParams& p, const AnalyticConstants& c, double t);

// Third-order scalar residual psi1''' + [2ia + (at)^2 + (D^2+W^2)] psi1'
// + [a^2 + ia(W^2-D^2)] t psi1, with derivatives from 5-point stencils at
// step h.  The double-callback form floors near |psi| eps / h^3; the
// double-double variants below evaluate the same stencil without that floor.
cplx ode3_residual(const LZParams& p, const std::function<cplx(double)>& psi1,
                   double t, double h = 1e-4);

cplx ode3_residual(const LZParams& p,
                   const std::function<DDComplex(DDouble)>& psi1, double t,
                   double h = 1e-4);

// psi1(t) of the fitted closed-form solution as a double-double callback.
std::function<DDComplex(DDouble)> analytic_psi1_dd(const LZParams& p,
                                                   const AnalyticConstants& c);

// Residual of a numerically evolved psi1: integrates from (t_start, psi0) to
// the stencil base in double precision, then takes the five stencil values
// with fixed-step double-double Runge-Kutta refinement.
cplx ode3_residual_numeric(const LZParams& p, const Vector3& psi0,
                           double t_start, double t,
                           const propagate::IntegratorConfig& cfg,
                           double h = 1e-4);

// Two-level reference: i psi' = [[a t, D(t)], [D(t), -a t]] psi with the
// optional Gaussian envelope D(t) = delta exp(-(t/2 sigma)^2).
Trajectory two_level_evolve(double a, double delta,
                            std::optional<double> pulse_sigma,
                            const Vector2& psi0, const TimeGrid& grid,
                            const propagate::IntegratorConfig& cfg);

}  // namespace lz3::closed
