#pragma once

// Open-system dynamics: the Markovian master equation with spin-1 jump
// operators, the vectorized Liouvillian and its spectrum, steady-state
// extraction, and stochastic state trajectories with ensemble statistics.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lz3/algebra.hpp"
#include "lz3/propagate.hpp"
#include "lz3/trajectory.hpp"

namespace lz3::open {

// Volatilities of the three spin-1 noise channels (x, y, z); xi^2 carries
// the dissipation rate.
struct NoiseSpec {
  std::array<double, 3> xi{};

  void validate() const {
    for (double x : xi)
      if (!(x >= 0.0) || !std::isfinite(x))
        throw DomainError("noise volatilities must be finite and >= 0");
  }
  bool is_zero() const { return xi[0] == 0.0 && xi[1] == 0.0 && xi[2] == 0.0; }
  static NoiseSpec isotropic(double x) { return {{x, x, x}}; }
};

using DensityRhs = std::function<void(double t, const Matrix3& rho, Matrix3& drho)>;

// drho = -i[H(t), rho] + 1/2 sum_j xi_j^2 (2 S_j rho S_j - S_j^2 rho - rho S_j^2).
DensityRhs lindblad_rhs(const LZParams& p, const NoiseSpec& n);
DensityRhs lindblad_rhs(const SU3Params& p, const NoiseSpec& n);

// Master-equation propagation; records populations, trace, purity and the
// full matrix per sample.  Appends a PositivityLoss warning (run continues)
// if the smallest eigenvalue dips below -1e-6.
Trajectory evolve_density(const LZParams& p, const NoiseSpec& n,
                          const Matrix3& rho0, const TimeGrid& grid,
                          const propagate::IntegratorConfig& cfg);
Trajectory evolve_density(const SU3Params& p, const NoiseSpec& n,
                          const Matrix3& rho0, const TimeGrid& grid,
                          const propagate::IntegratorConfig& cfg);

// Column-major vectorization helpers (vec(rho)[i + 3j] = rho_ij).
Vector9 vec_density(const Matrix3& rho);
Matrix3 unvec_density(const Vector9& v);

// 9x9 superoperator L with L vec(rho) = vec(drho/dt) for frozen H.
Matrix9 liouvillian_matrix(const Matrix3& h, const NoiseSpec& n);

struct SpectralDecomposition {
  std::array<cplx, 9> eigenvalues{};  // sorted by descending real part
  int zero_index = -1;                // position of the minimal-modulus eigenvalue
  // Expansion rho(t) = sum_i amplitudes[i] exp(lambda_i t) for the supplied
  // rho0; amplitudes[zero_index] is the steady-state component.
  std::optional<std::array<Matrix3, 9>> amplitudes;

  Matrix3 reconstruct(double t) const;
};

// Full complex spectrum (Hessenberg reduction + shifted QR); amplitudes are
// solved from the eigenvector expansion when rho0 is given.
SpectralDecomposition liouvillian_spectrum(const Matrix9& lv,
                                           const std::optional<Matrix3>& rho0 = {});

// Null direction of L (smallest singular value via one-sided Jacobi),
// Hermitized and trace-normalized.  Throws DegenerateKernel when the second
// singular value also falls below 1e-8 ||L||.
Matrix3 steady_state(const Matrix9& lv);

enum class LangevinScheme {
  // Drift advanced by the exact one-step propagator exp((-iH - K) dt) at the
  // interval midpoint, Gaussian kicks per Euler-Maruyama.  Stable for the
  // oscillatory sweeps here.
  ExponentialMidpoint,
  // Literal Euler-Maruyama update (drift added linearly).  Kept for
  // convergence studies; amplifies norm at practical step sizes.
  EulerMaruyama,
};

// One stochastic pure-state path of
//   d psi = [-iH(t) - 1/2 sum_j xi_j^2 S_j^2] psi dt + sum_j xi_j (-i S_j) psi dW_j,
// deterministic for a fixed seed.
Trajectory langevin_trajectory(const LZParams& p, const NoiseSpec& n,
                               const Vector3& psi0, const TimeGrid& grid,
                               double dt, std::uint64_t seed,
                               LangevinScheme scheme = LangevinScheme::ExponentialMidpoint);

// Mean of |psi><psi| over stored paths with per-population standard errors.
// Throws GridMismatch on inconsistent grids.
Trajectory ensemble_average(const std::vector<Trajectory>& paths);

// Ensemble of `n_traj` paths with seeds seed0, seed0+1, ...; averaged in
// fixed chunks so the reduction is deterministic for any worker count.
Trajectory langevin_ensemble(const LZParams& p, const NoiseSpec& n,
                             const Vector3& psi0, const TimeGrid& grid,
                             double dt, std::uint64_t seed0, std::size_t n_traj,
                             LangevinScheme scheme = LangevinScheme::ExponentialMidpoint,
                             unsigned workers = 0);

}  // namespace lz3::open
