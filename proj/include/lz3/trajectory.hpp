#pragma once

// Shared time-grid and trajectory records produced by the propagators.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lz3/algebra.hpp"
#include "lz3/errors.hpp"

namespace lz3 {

struct TimeGrid {
  double t0 = -20.0;
  double t1 = 20.0;
  double dt_out = 0.01;

  void validate() const {
    if (!(t0 < t1)) throw DomainError("TimeGrid requires t0 < t1");
    if (!(dt_out > 0.0)) throw DomainError("TimeGrid requires dt_out > 0");
    if ((t1 - t0) / dt_out > 1e7)
      throw DomainError("TimeGrid would produce more than 1e7 samples");
  }

  // Sample times t0 + k dt_out, k = 0..n, with the last sample <= t1 (a
  // hair of slack absorbs representation rounding).
  std::vector<double> sample_times() const {
    validate();
    const double span = t1 - t0;
    std::vector<double> ts;
    const std::size_t n =
        static_cast<std::size_t>(std::floor(span / dt_out + 1e-9));
    ts.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) ts.push_back(t0 + static_cast<double>(k) * dt_out);
    return ts;
  }
};

struct TrajectoryPoint {
  double t = 0.0;
  std::array<double, 3> pops{};  // |psi_j|^2 or rho_jj; pops[2] = 0 for 2-level runs
  double trace = 0.0;            // norm^2 for states, Tr(rho) for densities
  double purity = 0.0;           // 1 for pure states, Tr(rho^2) for densities
  std::optional<Vector3> state;
  std::optional<Matrix3> rho;
  // Per-population standard error of an ensemble mean, when applicable.
  std::optional<std::array<double, 3>> std_error;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  std::vector<std::string> warnings;

  std::size_t size() const { return points.size(); }
};

}  // namespace lz3
