#pragma once

// Generic dense-output integrators for complex-valued systems: an adaptive
// Dormand-Prince 5(4) pair and a fixed-step Euler-Maruyama stepper with a
// counter-based Gaussian source.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "lz3/trajectory.hpp"

namespace lz3::propagate {

using State = std::vector<cplx>;
using Rhs = std::function<void(double t, const State& y, State& dy)>;

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.0;      // 0: no cap beyond the span
  double initial_step = 0.0;  // 0: automatic

  void validate() const {
    if (!(rtol >= 1e-14)) throw DomainError("rtol must be >= 1e-14");
    if (!(atol >= 1e-16)) throw DomainError("atol must be >= 1e-16");
    if (max_step < 0.0 || initial_step < 0.0)
      throw DomainError("step limits must be non-negative");
  }
};

struct Sample {
  double t = 0.0;
  State y;
};

// Adaptive Dormand-Prince 5(4) with PI step control and cubic Hermite dense
// output at the grid's sample times.  Throws StepUnderflow / NonFiniteState.
std::vector<Sample> rk_adaptive(const Rhs& rhs, const State& y0,
                                const TimeGrid& grid,
                                const IntegratorConfig& cfg);

// Single-endpoint convenience: integrates [t0, t1] and returns y(t1) with the
// final step landing exactly on t1 (no interpolation).
State rk_endpoint(const Rhs& rhs, const State& y0, double t0, double t1,
                  const IntegratorConfig& cfg);

struct NoiseTerm {
  // dy += G(t, y); the Wiener increment and volatility are applied by the
  // stepper.
  std::function<void(double t, const State& y, State& gy)> apply;
  double volatility = 0.0;
};

// Fixed-step Euler-Maruyama: y_{n+1} = y_n + f dt + sum_j vol_j G_j(y_n) dW.
// Increments dW ~ N(0, dt) come from a Philox stream keyed (seed, j, n), so a
// fixed seed replays bit-for-bit.  dt is rounded down per output interval to
// an integer number of substeps.  Throws NonFiniteState.
std::vector<Sample> euler_maruyama(const Rhs& drift,
                                   const std::vector<NoiseTerm>& noise,
                                   const State& y0, const TimeGrid& grid,
                                   double dt, std::uint64_t seed);

}  // namespace lz3::propagate
