#include "lz3/open.hpp"

#include <algorithm>
#include <cmath>

#include "lz3/detail/eig.hpp"
#include "lz3/detail/parallel.hpp"
#include "lz3/detail/rng.hpp"

namespace lz3::open {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Spin1Cache {
  std::array<Matrix3, 3> s;
  std::array<Matrix3, 3> s2;
  Spin1Cache() : s(algebra::spin1_matrices()) {
    for (int j = 0; j < 3; ++j) s2[j] = s[j] * s[j];
  }
};

const Spin1Cache& spin1() {
  static const Spin1Cache cache;
  return cache;
}

Matrix3 damping_matrix(const NoiseSpec& n) {
  // K = 1/2 sum_j xi_j^2 S_j^2
  Matrix3 k;
  for (int j = 0; j < 3; ++j) k += (0.5 * n.xi[j] * n.xi[j]) * spin1().s2[j];
  return k;
}

Matrix3 lindblad_apply(const Matrix3& h, const NoiseSpec& n, const Matrix3& k,
                       const Matrix3& rho) {
  Matrix3 d = -kI * (h * rho - rho * h);
  d -= k * rho + rho * k;
  for (int j = 0; j < 3; ++j) {
    if (n.xi[j] == 0.0) continue;
    d += (n.xi[j] * n.xi[j]) * (spin1().s[j] * rho * spin1().s[j]);
  }
  return d;
}

using HamiltonianFn = std::function<Matrix3(double)>;

DensityRhs lindblad_rhs_impl(HamiltonianFn h, const NoiseSpec& n) {
  n.validate();
  const Matrix3 k = damping_matrix(n);
  return [h = std::move(h), n, k](double t, const Matrix3& rho, Matrix3& drho) {
    drho = lindblad_apply(h(t), n, k, rho);
  };
}

Trajectory evolve_density_impl(const HamiltonianFn& h, const NoiseSpec& n,
                               const Matrix3& rho0, const TimeGrid& grid,
                               const propagate::IntegratorConfig& cfg) {
  n.validate();
  if (!rho0.all_finite()) throw NonFiniteState("non-finite initial density matrix");
  if ((rho0 - rho0.adjoint()).frobenius_norm() > 1e-10)
    throw NonHermitianInput("initial density matrix is not Hermitian to 1e-10");
  const Matrix3 k = damping_matrix(n);

  propagate::Rhs rhs = [&h, &n, k](double t, const propagate::State& y,
                                   propagate::State& dy) {
    Matrix3 rho;
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) rho(i, j) = y[3 * j + i];
    const Matrix3 d = lindblad_apply(h(t), n, k, rho);
    dy.resize(9);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) dy[3 * j + i] = d(i, j);
  };

  propagate::State y0(9);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) y0[3 * j + i] = rho0(i, j);

  const auto samples = propagate::rk_adaptive(rhs, y0, grid, cfg);
  Trajectory tr;
  tr.points.reserve(samples.size());
  double min_eig_seen = 0.0;
  double min_eig_time = grid.t0;
  for (const auto& s : samples) {
    Matrix3 rho;
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) rho(i, j) = s.y[3 * j + i];
    TrajectoryPoint pt;
    pt.t = s.t;
    pt.pops = {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real()};
    pt.trace = rho.trace().real();
    pt.purity = (rho * rho).trace().real();
    const Matrix3 herm = 0.5 * (rho + rho.adjoint());
    const auto ev = algebra::eigenvalues_hermitian3(herm);
    if (ev[0] < min_eig_seen) {
      min_eig_seen = ev[0];
      min_eig_time = s.t;
    }
    pt.rho = rho;
    tr.points.push_back(std::move(pt));
  }
  if (min_eig_seen < -1e-6)
    tr.warnings.push_back("PositivityLoss: min eigenvalue " +
                          std::to_string(min_eig_seen) + " at t = " +
                          std::to_string(min_eig_time));
  return tr;
}

}  // namespace

DensityRhs lindblad_rhs(const LZParams& p, const NoiseSpec& n) {
  p.validate();
  return lindblad_rhs_impl([p](double t) { return algebra::build_hamiltonian(p, t); }, n);
}

DensityRhs lindblad_rhs(const SU3Params& p, const NoiseSpec& n) {
  p.validate();
  return lindblad_rhs_impl(
      [p](double t) { return algebra::build_su3_hamiltonian(p, t); }, n);
}

Trajectory evolve_density(const LZParams& p, const NoiseSpec& n,
                          const Matrix3& rho0, const TimeGrid& grid,
                          const propagate::IntegratorConfig& cfg) {
  p.validate();
  return evolve_density_impl(
      [p](double t) { return algebra::build_hamiltonian(p, t); }, n, rho0, grid, cfg);
}

Trajectory evolve_density(const SU3Params& p, const NoiseSpec& n,
                          const Matrix3& rho0, const TimeGrid& grid,
                          const propagate::IntegratorConfig& cfg) {
  p.validate();
  return evolve_density_impl(
      [p](double t) { return algebra::build_su3_hamiltonian(p, t); }, n, rho0,
      grid, cfg);
}

Vector9 vec_density(const Matrix3& rho) {
  Vector9 v{};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) v[3 * j + i] = rho(i, j);
  return v;
}

Matrix3 unvec_density(const Vector9& v) {
  Matrix3 rho;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) rho(i, j) = v[3 * j + i];
  return rho;
}

namespace {

// Column-major vec: row/column indices of the superoperator pair as
// (col-of-rho, row-of-rho); kron(P, Q)[3p+q, 3r+s] = P(p,r) Q(q,s).
Matrix9 kron(const Matrix3& p, const Matrix3& q) {
  Matrix9 k;
  for (int pp = 0; pp < 3; ++pp)
    for (int qq = 0; qq < 3; ++qq)
      for (int rr = 0; rr < 3; ++rr)
        for (int ss = 0; ss < 3; ++ss)
          k(3 * pp + qq, 3 * rr + ss) = p(pp, rr) * q(qq, ss);
  return k;
}

}  // namespace

Matrix9 liouvillian_matrix(const Matrix3& h, const NoiseSpec& n) {
  n.validate();
  if ((h - h.adjoint()).frobenius_norm() > 1e-12 * std::max(1.0, h.frobenius_norm()))
    throw NonHermitianInput("liouvillian_matrix expects a Hermitian H");
  const Matrix3 eye = Matrix3::identity();
  Matrix9 lv = kron(eye, h) - kron(h.transpose(), eye);
  lv *= -kI;
  for (int j = 0; j < 3; ++j) {
    const double g = n.xi[j] * n.xi[j];
    if (g == 0.0) continue;
    const Matrix3& s = spin1().s[j];
    const Matrix3& s2 = spin1().s2[j];
    Matrix9 d = kron(s.transpose(), s);
    d *= 2.0;
    d -= kron(eye, s2);
    d -= kron(s2.transpose(), eye);
    d *= 0.5 * g;
    lv += d;
  }
  return lv;
}

Matrix3 SpectralDecomposition::reconstruct(double t) const {
  if (!amplitudes)
    throw DomainError("spectral reconstruction requires amplitudes (rho0)");
  Matrix3 rho;
  for (int i = 0; i < 9; ++i)
    rho += std::exp(eigenvalues[i] * t) * (*amplitudes)[i];
  return rho;
}

SpectralDecomposition liouvillian_spectrum(const Matrix9& lv,
                                           const std::optional<Matrix3>& rho0) {
  if (!lv.all_finite()) throw NonFiniteState("liouvillian has non-finite entries");
  auto eig = lz3::detail::complex_eigensystem<9>(lv);

  std::array<int, 9> order{};
  for (int i = 0; i < 9; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    const cplx a = eig.values[x], b = eig.values[y];
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() < b.imag();
  });

  SpectralDecomposition out;
  Matrix9 vecs;
  for (int i = 0; i < 9; ++i) {
    out.eigenvalues[i] = eig.values[order[i]];
    for (int r = 0; r < 9; ++r) vecs(r, i) = eig.vectors(r, order[i]);
  }
  out.zero_index = 0;
  for (int i = 1; i < 9; ++i)
    if (std::abs(out.eigenvalues[i]) < std::abs(out.eigenvalues[out.zero_index]))
      out.zero_index = i;

  if (rho0) {
    CVector<9> c = vec_density(*rho0);
    lz3::detail::solve_linear<9>(vecs, c);
    std::array<Matrix3, 9> amps;
    for (int i = 0; i < 9; ++i) {
      Vector9 col{};
      for (int r = 0; r < 9; ++r) col[r] = vecs(r, i) * c[i];
      amps[i] = unvec_density(col);
    }
    out.amplitudes = amps;
  }
  return out;
}

Matrix3 steady_state(const Matrix9& lv) {
  // One-sided Jacobi SVD: orthogonalize columns, singular values are the
  // final column norms.  Small singular values come out at eps ||L||, well
  // below the 1e-8 ||L|| degeneracy threshold.
  Matrix9 w = lv;
  Matrix9 v = Matrix9::identity();
  for (int sweep = 0; sweep < 60; ++sweep) {
    double worst = 0.0;
    for (int p = 0; p < 9; ++p) {
      for (int q = p + 1; q < 9; ++q) {
        double gpp = 0.0, gqq = 0.0;
        cplx gpq = 0.0;
        for (int k = 0; k < 9; ++k) {
          gpp += std::norm(w(k, p));
          gqq += std::norm(w(k, q));
          gpq += std::conj(w(k, p)) * w(k, q);
        }
        const double offd = std::abs(gpq);
        if (gpp == 0.0 || gqq == 0.0 || offd == 0.0) continue;
        worst = std::max(worst, offd / std::sqrt(gpp * gqq));
        if (offd <= 1e-30 * std::sqrt(gpp * gqq)) continue;
        const double phi = std::arg(gpq);
        const double theta = 0.5 * std::atan2(2.0 * offd, gpp - gqq);
        const double c = std::cos(theta);
        const cplx s = std::sin(theta) * std::exp(cplx(0.0, phi));
        for (int k = 0; k < 9; ++k) {
          const cplx wp = w(k, p), wq = w(k, q);
          w(k, p) = c * wp + s * wq;
          w(k, q) = -std::conj(s) * wp + c * wq;
          const cplx vp = v(k, p), vq = v(k, q);
          v(k, p) = c * vp + s * vq;
          v(k, q) = -std::conj(s) * vp + c * vq;
        }
      }
    }
    if (worst < 1e-15) break;
  }
  std::array<double, 9> sigma{};
  for (int j = 0; j < 9; ++j) {
    double s = 0.0;
    for (int k = 0; k < 9; ++k) s += std::norm(w(k, j));
    sigma[j] = std::sqrt(s);
  }
  std::array<int, 9> order{};
  for (int i = 0; i < 9; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return sigma[x] < sigma[y]; });
  const double norm_l = sigma[order[8]];
  if (sigma[order[1]] < 1e-8 * norm_l)
    throw DegenerateKernel("second singular value " +
                           std::to_string(sigma[order[1]]) + " below 1e-8 ||L||");

  Vector9 null_vec{};
  for (int k = 0; k < 9; ++k) null_vec[k] = v(k, order[0]);
  Matrix3 rho = unvec_density(null_vec);
  // Rotate the arbitrary global phase so the trace is real and positive,
  // then Hermitize and normalize.
  const cplx tau = rho.trace();
  if (std::abs(tau) < 1e-6)
    throw DegenerateKernel("kernel direction is (numerically) traceless");
  rho *= std::conj(tau) / std::abs(tau);
  rho = 0.5 * (rho + rho.adjoint());
  rho *= 1.0 / rho.trace().real();
  return rho;
}

namespace {

Trajectory states_to_trajectory(const std::vector<double>& times,
                                const std::vector<Vector3>& states) {
  Trajectory tr;
  tr.points.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    TrajectoryPoint pt;
    pt.t = times[k];
    double nrm2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      pt.pops[i] = std::norm(states[k][i]);
      nrm2 += pt.pops[i];
    }
    pt.trace = nrm2;
    pt.purity = nrm2 * nrm2;
    pt.state = states[k];
    tr.points.push_back(std::move(pt));
  }
  return tr;
}

struct LangevinPlan {
  std::vector<double> out_times;
  std::size_t nsub = 1;
  double h = 0.0;
  double sqrt_h = 0.0;
  // Midpoint drift propagators for every substep (exponential scheme only).
  std::vector<Matrix3> props;
};

LangevinPlan make_langevin_plan(const LZParams& p, const NoiseSpec& n,
                                const TimeGrid& grid, double dt,
                                LangevinScheme scheme) {
  p.validate();
  n.validate();
  grid.validate();
  if (!(dt > 0.0) || dt > grid.dt_out + 1e-15 * grid.dt_out)
    throw DomainError("langevin requires 0 < dt <= dt_out");
  LangevinPlan plan;
  plan.out_times = grid.sample_times();
  plan.nsub = static_cast<std::size_t>(std::ceil(grid.dt_out / dt - 1e-9));
  plan.h = grid.dt_out / static_cast<double>(plan.nsub);
  plan.sqrt_h = std::sqrt(plan.h);
  if (scheme == LangevinScheme::ExponentialMidpoint) {
    const Matrix3 k = damping_matrix(n);
    const std::size_t total = (plan.out_times.size() - 1) * plan.nsub;
    plan.props.reserve(total);
    for (std::size_t seg = 1; seg < plan.out_times.size(); ++seg) {
      const double t0 = plan.out_times[seg - 1];
      for (std::size_t s = 0; s < plan.nsub; ++s) {
        const double tm = t0 + (static_cast<double>(s) + 0.5) * plan.h;
        Matrix3 gen = -kI * algebra::build_hamiltonian(p, tm) - k;
        gen *= plan.h;
        plan.props.push_back(algebra::expm(gen));
      }
    }
  }
  return plan;
}

std::vector<Vector3> langevin_path(const LangevinPlan& plan, const NoiseSpec& n,
                                   const Vector3& psi0, std::uint64_t seed) {
  std::vector<Vector3> states;
  states.reserve(plan.out_times.size());
  Vector3 psi = psi0;
  states.push_back(psi);
  std::uint64_t step = 0;
  for (std::size_t seg = 1; seg < plan.out_times.size(); ++seg) {
    for (std::size_t s = 0; s < plan.nsub; ++s, ++step) {
      Vector3 next = matvec(plan.props[step], psi);
      for (std::uint32_t j = 0; j < 3; ++j) {
        if (n.xi[j] == 0.0) continue;
        const double dw = plan.sqrt_h * lz3::detail::counter_normal(seed, j, step);
        const Vector3 g = matvec(spin1().s[j], psi);
        const cplx wgt = -kI * (n.xi[j] * dw);
        for (int i = 0; i < 3; ++i) next[i] += wgt * g[i];
      }
      psi = next;
    }
    for (int i = 0; i < 3; ++i)
      if (!std::isfinite(psi[i].real()) || !std::isfinite(psi[i].imag()))
        throw NonFiniteState("langevin path became non-finite");
    states.push_back(psi);
  }
  return states;
}

}  // namespace

Trajectory langevin_trajectory(const LZParams& p, const NoiseSpec& n,
                               const Vector3& psi0, const TimeGrid& grid,
                               double dt, std::uint64_t seed,
                               LangevinScheme scheme) {
  if (scheme == LangevinScheme::EulerMaruyama) {
    const Matrix3 k = damping_matrix(n);
    propagate::Rhs drift = [p, k](double t, const propagate::State& y,
                                  propagate::State& dy) {
      const Matrix3 h = algebra::build_hamiltonian(p, t);
      dy.resize(3);
      for (int i = 0; i < 3; ++i) {
        cplx s = 0.0;
        for (int j = 0; j < 3; ++j) s += (-kI * h(i, j) - k(i, j)) * y[j];
        dy[i] = s;
      }
    };
    std::vector<propagate::NoiseTerm> noise;
    for (int j = 0; j < 3; ++j) {
      const Matrix3& sj = spin1().s[j];
      noise.push_back({[sj](double, const propagate::State& y,
                            propagate::State& gy) {
                         gy.resize(3);
                         for (int i = 0; i < 3; ++i) {
                           cplx s = 0.0;
                           for (int c = 0; c < 3; ++c) s += sj(i, c) * y[c];
                           gy[i] = -kI * s;
                         }
                       },
                       n.xi[j]});
    }
    const auto samples = propagate::euler_maruyama(
        drift, noise, {psi0[0], psi0[1], psi0[2]}, grid, dt, seed);
    std::vector<double> times;
    std::vector<Vector3> states;
    for (const auto& s : samples) {
      times.push_back(s.t);
      states.push_back({s.y[0], s.y[1], s.y[2]});
    }
    return states_to_trajectory(times, states);
  }
  const LangevinPlan plan = make_langevin_plan(p, n, grid, dt, scheme);
  return states_to_trajectory(plan.out_times, langevin_path(plan, n, psi0, seed));
}

Trajectory ensemble_average(const std::vector<Trajectory>& paths) {
  if (paths.size() < 2) throw DomainError("ensemble_average needs >= 2 paths");
  const std::size_t npts = paths[0].size();
  for (const auto& p : paths) {
    if (p.size() != npts) throw GridMismatch("paths have different lengths");
    for (std::size_t k = 0; k < npts; ++k) {
      if (std::abs(p.points[k].t - paths[0].points[k].t) > 1e-12)
        throw GridMismatch("paths sampled on different time grids");
      if (!p.points[k].state) throw DomainError("ensemble paths must carry states");
    }
  }
  const double n = static_cast<double>(paths.size());
  Trajectory tr;
  tr.points.reserve(npts);
  for (std::size_t k = 0; k < npts; ++k) {
    Matrix3 rho;
    std::array<double, 3> sum_p{}, sum_p2{};
    for (const auto& path : paths) {
      const Vector3& psi = *path.points[k].state;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) rho(i, j) += psi[i] * std::conj(psi[j]);
        const double pop = std::norm(psi[i]);
        sum_p[i] += pop;
        sum_p2[i] += pop * pop;
      }
    }
    rho *= 1.0 / n;
    TrajectoryPoint pt;
    pt.t = paths[0].points[k].t;
    std::array<double, 3> se{};
    for (int i = 0; i < 3; ++i) {
      pt.pops[i] = sum_p[i] / n;
      const double var =
          std::max(0.0, (sum_p2[i] - n * pt.pops[i] * pt.pops[i]) / (n - 1.0));
      se[i] = std::sqrt(var / n);
    }
    pt.trace = rho.trace().real();
    pt.purity = (rho * rho).trace().real();
    pt.rho = rho;
    pt.std_error = se;
    tr.points.push_back(std::move(pt));
  }
  return tr;
}

Trajectory langevin_ensemble(const LZParams& p, const NoiseSpec& n,
                             const Vector3& psi0, const TimeGrid& grid,
                             double dt, std::uint64_t seed0, std::size_t n_traj,
                             LangevinScheme scheme, unsigned workers) {
  if (n_traj < 2) throw DomainError("langevin_ensemble needs >= 2 trajectories");
  const LangevinPlan plan = make_langevin_plan(p, n, grid, dt, scheme);

  const std::size_t npts = plan.out_times.size();
  constexpr std::size_t kChunk = 32;
  const std::size_t n_chunks = (n_traj + kChunk - 1) / kChunk;

  struct Partial {
    std::vector<Matrix3> rho;
    std::vector<std::array<double, 3>> sum_p, sum_p2;
  };
  std::vector<Partial> partials(n_chunks);

  lz3::detail::parallel_chunks(
      n_chunks,
      [&](std::size_t ci) {
        Partial part;
        part.rho.assign(npts, Matrix3{});
        part.sum_p.assign(npts, {});
        part.sum_p2.assign(npts, {});
        const std::size_t begin = ci * kChunk;
        const std::size_t end = std::min(begin + kChunk, n_traj);
        for (std::size_t tr = begin; tr < end; ++tr) {
          std::vector<Vector3> states;
          if (scheme == LangevinScheme::ExponentialMidpoint) {
            states = langevin_path(plan, n, psi0, seed0 + tr);
          } else {
            const Trajectory path =
                langevin_trajectory(p, n, psi0, grid, dt, seed0 + tr, scheme);
            states.reserve(path.size());
            for (const auto& pt : path.points) states.push_back(*pt.state);
          }
          for (std::size_t k = 0; k < npts; ++k) {
            const Vector3& psi = states[k];
            Matrix3& rho = part.rho[k];
            for (int i = 0; i < 3; ++i) {
              for (int j = 0; j < 3; ++j) rho(i, j) += psi[i] * std::conj(psi[j]);
              const double pop = std::norm(psi[i]);
              part.sum_p[k][i] += pop;
              part.sum_p2[k][i] += pop * pop;
            }
          }
        }
        partials[ci] = std::move(part);
      },
      workers);

  const double nn = static_cast<double>(n_traj);
  Trajectory out;
  out.points.reserve(npts);
  for (std::size_t k = 0; k < npts; ++k) {
    Matrix3 rho;
    std::array<double, 3> sp{}, sp2{};
    for (std::size_t ci = 0; ci < n_chunks; ++ci) {  // fixed merge order
      rho += partials[ci].rho[k];
      for (int i = 0; i < 3; ++i) {
        sp[i] += partials[ci].sum_p[k][i];
        sp2[i] += partials[ci].sum_p2[k][i];
      }
    }
    rho *= 1.0 / nn;
    TrajectoryPoint pt;
    pt.t = plan.out_times[k];
    std::array<double, 3> se{};
    for (int i = 0; i < 3; ++i) {
      pt.pops[i] = sp[i] / nn;
      const double var =
          std::max(0.0, (sp2[i] - nn * pt.pops[i] * pt.pops[i]) / (nn - 1.0));
      se[i] = std::sqrt(var / nn);
    }
    pt.trace = rho.trace().real();
    pt.purity = (rho * rho).trace().real();
    pt.rho = rho;
    pt.std_error = se;
    out.points.push_back(std::move(pt));
  }
  return out;
}

}  // namespace lz3::open
