#include "lz3/closed.hpp"

#include <cmath>

#include "lz3/specfun.hpp"

namespace lz3::closed {

namespace {

constexpr cplx kI{0.0, 1.0};

// Basis data for the closed-form solution: psi1 solves the symmetric-square
// of y'' + q(t) y = 0 with q = (a t)^2/4 + delta^2/2 + i a/2, whose
// independent solutions are D_nu(alpha t) and D_{-nu-1}(beta t).
struct AnalyticBasis {
  cplx nu, mu;       // orders
  cplx alpha, beta;  // argument slopes, z = alpha t resp. beta t
  double a = 0.0, delta = 0.0;

  explicit AnalyticBasis(const LZParams& p) : a(p.a), delta(p.delta) {
    if (algebra::classify(p) != SymmetryClass::SU2)
      throw DomainError("analytic solution requires the symmetric coupling");
    if (p.pulse_sigma)
      throw DomainError("analytic solution is undefined for pulsed couplings");
    if (p.a == 0.0) throw DomainError("analytic solution requires a != 0");
    if (std::abs(p.delta) < 1e-300)
      throw DomainError("analytic recovery of psi2, psi3 requires delta != 0");
    // Principal branch: sqrt(a) = i sqrt(|a|) for a < 0.
    const cplx sqrt_a = std::sqrt(cplx(p.a));
    alpha = std::polar(1.0, M_PI / 4.0) * sqrt_a;
    beta = std::polar(1.0, 3.0 * M_PI / 4.0) * sqrt_a;
    nu = -kI * p.delta * p.delta / (2.0 * p.a);
    mu = -1.0 - nu;
  }

  cplx q(double t) const {
    const double at = a * t;
    return cplx(0.25 * at * at + 0.5 * delta * delta, 0.5 * a);
  }

  // u, u', v, v' at time t (derivatives with respect to t).
  void eval(double t, cplx& u, cplx& du, cplx& v, cplx& dv) const {
    const cplx zu = alpha * t, zv = beta * t;
    u = specfun::pcf_d(nu, zu);
    du = alpha * specfun::pcf_d_deriv(nu, zu);
    v = specfun::pcf_d(mu, zv);
    dv = beta * specfun::pcf_d_deriv(mu, zv);
  }
};

void solve3(std::array<cplx, 9>& m, std::array<cplx, 3>& rhs) {
  // Gaussian elimination with partial pivoting on a 3x3 system (in place).
  std::array<int, 3> piv{0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int best = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[piv[r] * 3 + col]) > std::abs(m[piv[best] * 3 + col]))
        best = r;
    std::swap(piv[col], piv[best]);
    const cplx d = m[piv[col] * 3 + col];
    if (std::abs(d) == 0.0) throw IllConditioned("singular fitting matrix");
    for (int r = col + 1; r < 3; ++r) {
      const cplx f = m[piv[r] * 3 + col] / d;
      for (int c = col; c < 3; ++c) m[piv[r] * 3 + c] -= f * m[piv[col] * 3 + c];
      rhs[piv[r]] -= f * rhs[piv[col]];
    }
  }
  std::array<cplx, 3> x{};
  for (int row = 2; row >= 0; --row) {
    cplx s = rhs[piv[row]];
    for (int c = row + 1; c < 3; ++c) s -= m[piv[row] * 3 + c] * x[c];
    x[row] = s / m[piv[row] * 3 + row];
  }
  rhs = x;
}

double norm1(const std::array<cplx, 9>& m) {
  double best = 0.0;
  for (int c = 0; c < 3; ++c) {
    double s = 0.0;
    for (int r = 0; r < 3; ++r) s += std::abs(m[r * 3 + c]);
    best = std::max(best, s);
  }
  return best;
}

Trajectory samples_to_trajectory(const std::vector<propagate::Sample>& samples,
                                 bool keep_state) {
  Trajectory tr;
  tr.points.reserve(samples.size());
  for (const auto& s : samples) {
    TrajectoryPoint pt;
    pt.t = s.t;
    double nrm2 = 0.0;
    for (std::size_t i = 0; i < s.y.size() && i < 3; ++i) {
      pt.pops[i] = std::norm(s.y[i]);
      nrm2 += pt.pops[i];
    }
    pt.trace = nrm2;
    pt.purity = nrm2 * nrm2;
    if (keep_state && s.y.size() == 3) {
      Vector3 v{s.y[0], s.y[1], s.y[2]};
      pt.state = v;
    }
    tr.points.push_back(std::move(pt));
  }
  return tr;
}

}  // namespace

propagate::Rhs schrodinger_rhs(const LZParams& p) {
  p.validate();
  return [p](double t, const propagate::State& y, propagate::State& dy) {
    const double at = p.a * t;
    const double d = p.delta_at(t);
    const double w = p.omega_at(t);
    dy.resize(3);
    dy[0] = -kI * (at * y[0] + d * y[1]);
    dy[1] = -kI * (d * y[0] + w * y[2]);
    dy[2] = -kI * (-at * y[2] + w * y[1]);
  };
}

propagate::Rhs schrodinger_rhs(const SU3Params& p) {
  p.validate();
  return [p](double t, const propagate::State& y, propagate::State& dy) {
    const Matrix3 h = algebra::build_su3_hamiltonian(p, t);
    dy.resize(3);
    for (int i = 0; i < 3; ++i) {
      cplx s = 0.0;
      for (int j = 0; j < 3; ++j) s += h(i, j) * y[j];
      dy[i] = -kI * s;
    }
  };
}

namespace {

Trajectory evolve_state_impl(const propagate::Rhs& rhs, const Vector3& psi0,
                             const TimeGrid& grid,
                             const propagate::IntegratorConfig& cfg) {
  propagate::State y0{psi0[0], psi0[1], psi0[2]};
  return samples_to_trajectory(propagate::rk_adaptive(rhs, y0, grid, cfg), true);
}

}  // namespace

Trajectory evolve_state(const LZParams& p, const Vector3& psi0,
                        const TimeGrid& grid,
                        const propagate::IntegratorConfig& cfg) {
  return evolve_state_impl(schrodinger_rhs(p), psi0, grid, cfg);
}

Trajectory evolve_state(const SU3Params& p, const Vector3& psi0,
                        const TimeGrid& grid,
                        const propagate::IntegratorConfig& cfg) {
  return evolve_state_impl(schrodinger_rhs(p), psi0, grid, cfg);
}

AnalyticConstants fit_constants(const LZParams& p, double t0) {
  const AnalyticBasis basis(p);
  cplx u, du, v, dv;
  basis.eval(t0, u, du, v, dv);
  const cplx q0 = basis.q(t0);

  // Rows: value, d/dt, d^2/dt^2 of {u^2, u v, v^2}; second derivatives use
  // u'' = -q u, v'' = -q v.
  std::array<cplx, 9> m{u * u,
                        u * v,
                        v * v,
                        2.0 * u * du,
                        du * v + u * dv,
                        2.0 * v * dv,
                        2.0 * (du * du - q0 * u * u),
                        2.0 * (du * dv - q0 * u * v),
                        2.0 * (dv * dv - q0 * v * v)};
  const double at0 = p.a * t0;
  std::array<cplx, 3> rhs{1.0, -kI * at0,
                          -kI * p.a - (at0 * at0 + p.delta * p.delta)};

  const std::array<cplx, 9> m_saved = m;
  const std::array<cplx, 3> rhs_saved = rhs;
  std::array<cplx, 3> x = rhs;
  auto mm = m;
  solve3(mm, x);

  // Condition estimate from the explicit inverse.
  std::array<cplx, 9> inv{};
  for (int col = 0; col < 3; ++col) {
    std::array<cplx, 3> e{};
    e[col] = 1.0;
    auto mc = m_saved;
    solve3(mc, e);
    for (int r = 0; r < 3; ++r) inv[r * 3 + col] = e[r];
  }
  const double cond = norm1(m_saved) * norm1(inv);
  if (cond > 1e12)
    throw IllConditioned("fit condition estimate " + std::to_string(cond));

  double res2 = 0.0;
  for (int r = 0; r < 3; ++r) {
    cplx s = -rhs_saved[r];
    for (int c = 0; c < 3; ++c) s += m_saved[r * 3 + c] * x[c];
    res2 += std::norm(s);
  }
  AnalyticConstants out;
  out.c1 = x[0];
  out.c2 = x[1];
  out.c3 = x[2];
  out.fit_residual = std::sqrt(res2);
  out.condition = cond;
  return out;
}

Vector3 analytic_state(const LZParams& p, const AnalyticConstants& c, double t) {
  const AnalyticBasis basis(p);
  cplx u, du, v, dv;
  basis.eval(t, u, du, v, dv);
  const cplx q = basis.q(t);

  const cplx psi1 = c.c1 * u * u + c.c2 * u * v + c.c3 * v * v;
  const cplx dpsi1 =
      2.0 * c.c1 * u * du + c.c2 * (du * v + u * dv) + 2.0 * c.c3 * v * dv;
  const cplx ddpsi1 = 2.0 * c.c1 * (du * du - q * u * u) +
                      c.c2 * (2.0 * du * dv - 2.0 * q * u * v) +
                      2.0 * c.c3 * (dv * dv - q * v * v);

  const double at = p.a * t;
  const cplx psi2 = (kI * dpsi1 - at * psi1) / p.delta;
  const cplx psi3 =
      (-ddpsi1 - kI * p.a * psi1 - kI * at * dpsi1) / (p.delta * p.delta) - psi1;
  return {psi1, psi2, psi3};
}

namespace {

template <typename C, typename F, typename R>
C residual_from_stencil(const LZParams& p, const F& fn, R t, double h) {
  const C fm2 = fn(t - 2.0 * h);
  const C fm1 = fn(t - h);
  const C f0 = fn(t);
  const C fp1 = fn(t + h);
  const C fp2 = fn(t + 2.0 * h);

  const C d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) * (1.0 / (2.0 * h * h * h));
  const C d1 = (-1.0 * fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) * (1.0 / (12.0 * h));

  const double td = static_cast<double>(t);
  const double at = p.a * td;
  const double d2w2 = p.delta * p.delta + p.omega * p.omega;
  const C coef1(cplx(at * at + d2w2, 2.0 * p.a));
  const C coef0(cplx(p.a * p.a, p.a * (p.omega * p.omega - p.delta * p.delta)));
  return d3 + coef1 * d1 + coef0 * (td * f0);
}

}  // namespace

cplx ode3_residual(const LZParams& p, const std::function<cplx(double)>& psi1,
                   double t, double h) {
  p.validate();
  return residual_from_stencil<cplx>(p, psi1, t, h);
}

cplx ode3_residual(const LZParams& p,
                   const std::function<DDComplex(DDouble)>& psi1, double t,
                   double h) {
  p.validate();
  auto fn = [&psi1](DDouble x) { return psi1(x); };
  const DDComplex r = residual_from_stencil<DDComplex>(p, fn, DDouble(t), h);
  return r.value();
}

std::function<DDComplex(DDouble)> analytic_psi1_dd(const LZParams& p,
                                                   const AnalyticConstants& c) {
  const AnalyticBasis basis(p);
  return [basis, c](DDouble t) {
    const DDComplex zu = DDComplex(basis.alpha) * DDComplex(t, DDouble(0.0));
    const DDComplex zv = DDComplex(basis.beta) * DDComplex(t, DDouble(0.0));
    if (lz3::detail::dd_mag(zu) > specfun::pcf_z_switch())
      throw DomainError("double-double psi1 path is series-only (|z| too large)");
    const DDComplex u = specfun::detail::pcf_d_dd(basis.nu, zu);
    const DDComplex v = specfun::detail::pcf_d_dd(basis.mu, zv);
    return DDComplex(c.c1) * u * u + DDComplex(c.c2) * u * v +
           DDComplex(c.c3) * v * v;
  };
}

namespace {

// d(psi)/dt = -i H(t) psi in double-double arithmetic (unpulsed couplings).
void dd_rhs(const LZParams& p, DDouble t, const std::array<DDComplex, 3>& y,
            std::array<DDComplex, 3>& dy) {
  const DDouble at = t * p.a;
  const DDComplex mi(0.0, -1.0);
  dy[0] = mi * (DDComplex(at, DDouble(0.0)) * y[0] + p.delta * y[1]);
  dy[1] = mi * (p.delta * y[0] + p.omega * y[2]);
  dy[2] = mi * (p.omega * y[1] - DDComplex(at, DDouble(0.0)) * y[2]);
}

// Classic RK4 step of size h (double-double state and abscissa).
void dd_rk4_step(const LZParams& p, DDouble t, DDouble h,
                 std::array<DDComplex, 3>& y) {
  std::array<DDComplex, 3> k1, k2, k3, k4, tmp;
  dd_rhs(p, t, y, k1);
  for (int i = 0; i < 3; ++i) tmp[i] = y[i] + k1[i] * (h * 0.5);
  dd_rhs(p, t + h * 0.5, tmp, k2);
  for (int i = 0; i < 3; ++i) tmp[i] = y[i] + k2[i] * (h * 0.5);
  dd_rhs(p, t + h * 0.5, tmp, k3);
  for (int i = 0; i < 3; ++i) tmp[i] = y[i] + k3[i] * h;
  dd_rhs(p, t + h, tmp, k4);
  for (int i = 0; i < 3; ++i)
    y[i] = y[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
}

}  // namespace

cplx ode3_residual_numeric(const LZParams& p, const Vector3& psi0,
                           double t_start, double t,
                           const propagate::IntegratorConfig& cfg, double h) {
  p.validate();
  if (p.pulse_sigma)
    throw DomainError("numeric residual path supports unpulsed couplings only");
  const double base = t - 2.0 * h;
  propagate::State y0{psi0[0], psi0[1], psi0[2]};
  const propagate::State yb =
      t_start == base ? y0
                      : propagate::rk_endpoint(schrodinger_rhs(p), y0, t_start,
                                               base, cfg);

  // Refine across [t-2h, t+2h] with fixed double-double RK4 substeps; the
  // five stencil values then share a smooth error profile that the stencil
  // cancels.
  std::array<DDComplex, 3> y{DDComplex(yb[0]), DDComplex(yb[1]), DDComplex(yb[2])};
  constexpr int kSub = 8;
  std::array<DDComplex, 5> psi1;
  psi1[0] = y[0];
  DDouble tt(base);
  const DDouble hh(h);
  const DDouble hsub = hh / static_cast<double>(kSub);
  for (int seg = 1; seg <= 4; ++seg) {
    for (int s = 0; s < kSub; ++s) {
      dd_rk4_step(p, tt, hsub, y);
      tt = tt + hsub;
    }
    psi1[seg] = y[0];
  }
  const DDComplex d3 =
      (psi1[4] - 2.0 * psi1[3] + 2.0 * psi1[1] - psi1[0]) *
      (1.0 / (2.0 * h * h * h));
  const DDComplex d1 =
      (-1.0 * psi1[4] + 8.0 * psi1[3] - 8.0 * psi1[1] + psi1[0]) *
      (1.0 / (12.0 * h));
  const double at = p.a * t;
  const double d2w2 = p.delta * p.delta + p.omega * p.omega;
  const DDComplex coef1(cplx(at * at + d2w2, 2.0 * p.a));
  const DDComplex coef0(cplx(p.a * p.a, p.a * (p.omega * p.omega - p.delta * p.delta)));
  return (d3 + coef1 * d1 + coef0 * (t * psi1[2])).value();
}

Trajectory two_level_evolve(double a, double delta,
                            std::optional<double> pulse_sigma,
                            const Vector2& psi0, const TimeGrid& grid,
                            const propagate::IntegratorConfig& cfg) {
  LZParams env{a, delta, delta, pulse_sigma};
  env.validate();
  auto rhs = [env](double t, const propagate::State& y, propagate::State& dy) {
    const double at = env.a * t;
    const double d = env.delta_at(t);
    dy.resize(2);
    dy[0] = -kI * (at * y[0] + d * y[1]);
    dy[1] = -kI * (d * y[0] - at * y[1]);
  };
  propagate::State y0{psi0[0], psi0[1]};
  return samples_to_trajectory(propagate::rk_adaptive(rhs, y0, grid, cfg), false);
}

}  // namespace lz3::closed
