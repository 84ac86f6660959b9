#include "lz3/propagate.hpp"

#include <algorithm>
#include <cmath>

#include "lz3/detail/rng.hpp"

namespace lz3::propagate {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat (embedded 4th-order error weights).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

bool finite(const State& y) {
  for (const auto& v : y)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

struct Dopri5 {
  const Rhs& rhs;
  const IntegratorConfig& cfg;
  double dir;        // +1, integration proceeds towards larger t
  double span;
  double max_step;

  State k1, k2, k3, k4, k5, k6, k7, ytmp, yerr;

  Dopri5(const Rhs& r, const IntegratorConfig& c, double span_)
      : rhs(r), cfg(c), dir(1.0), span(span_) {
    max_step = cfg.max_step > 0.0 ? cfg.max_step : span;
  }

  void resize(std::size_t n) {
    for (State* s : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &ytmp, &yerr})
      s->assign(n, cplx{});
  }

  static void axpy(State& out, const State& y, double h,
                   std::initializer_list<std::pair<double, const State*>> terms) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      cplx acc = 0.0;
      for (const auto& [w, k] : terms) acc += w * (*k)[i];
      out[i] = y[i] + h * acc;
    }
  }

  // One trial step from (t, y, k1 = f(t, y)); on acceptance fills ynew and
  // k7 = f(t + h, ynew).  Returns the scaled error estimate.
  double attempt(double t, const State& y, double h, State& ynew) {
    axpy(ytmp, y, h, {{a21, &k1}});
    rhs(t + c2 * h, ytmp, k2);
    axpy(ytmp, y, h, {{a31, &k1}, {a32, &k2}});
    rhs(t + c3 * h, ytmp, k3);
    axpy(ytmp, y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    rhs(t + c4 * h, ytmp, k4);
    axpy(ytmp, y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    rhs(t + c5 * h, ytmp, k5);
    axpy(ytmp, y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    rhs(t + h, ytmp, k6);
    axpy(ynew, y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    rhs(t + h, ynew, k7);
    double err2 = 0.0;
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) {
      const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                          e6 * k6[i] + e7 * k7[i]);
      const double sc =
          cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err2 += std::norm(e) / (sc * sc);
    }
    return std::sqrt(err2 / static_cast<double>(n));
  }

  double initial_step(double t0, const State& y0) const {
    if (cfg.initial_step > 0.0) return std::min(cfg.initial_step, max_step);
    double dy = 0.0, df = 0.0;
    for (std::size_t i = 0; i < y0.size(); ++i) {
      const double sc = cfg.atol + cfg.rtol * std::abs(y0[i]);
      dy += std::norm(y0[i]) / (sc * sc);
      df += std::norm(k1[i]) / (sc * sc);
    }
    double h = (dy > 0.0 && df > 0.0) ? 0.01 * std::sqrt(dy / df) : 1e-6 * span;
    (void)t0;
    return std::min({h, max_step, span});
  }
};

}  // namespace

std::vector<Sample> rk_adaptive(const Rhs& rhs, const State& y0,
                                const TimeGrid& grid,
                                const IntegratorConfig& cfg) {
  grid.validate();
  cfg.validate();
  if (!finite(y0)) throw NonFiniteState("rk_adaptive: non-finite initial state");

  const std::vector<double> out_times = grid.sample_times();
  std::vector<Sample> out;
  out.reserve(out_times.size());

  Dopri5 st(rhs, cfg, grid.t1 - grid.t0);
  st.resize(y0.size());

  double t = grid.t0;
  State y = y0;
  rhs(t, y, st.k1);
  double h = st.initial_step(t, y);
  double errold = 1e-4;
  std::size_t next_out = 0;
  if (!out_times.empty() && out_times[0] <= grid.t0) {
    out.push_back({out_times[0], y});
    next_out = 1;
  }

  State ynew(y.size());
  const double hmin = 1e-14 * (grid.t1 - grid.t0);
  while (t < grid.t1) {
    h = std::min(h, grid.t1 - t);
    if (h < hmin)
      throw StepUnderflow("rk_adaptive: step collapsed at t = " + std::to_string(t));
    const double err = st.attempt(t, y, h, ynew);
    if (!std::isfinite(err) || !finite(ynew)) {
      if (h <= 16.0 * hmin)
        throw NonFiniteState("rk_adaptive: state became non-finite at t = " +
                             std::to_string(t));
      h *= 0.25;
      continue;
    }
    if (err <= 1.0) {
      // Cubic Hermite dense output on [t, t+h] from (y, k1) and (ynew, k7).
      const double tend = t + h;
      while (next_out < out_times.size() &&
             (out_times[next_out] <= tend || tend >= grid.t1)) {
        const double th = std::clamp((out_times[next_out] - t) / h, 0.0, 1.0);
        const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
        const double h10 = th * (1.0 - th) * (1.0 - th);
        const double h01 = th * th * (3.0 - 2.0 * th);
        const double h11 = th * th * (th - 1.0);
        Sample s;
        s.t = out_times[next_out];
        s.y.resize(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
          s.y[i] = h00 * y[i] + h10 * h * st.k1[i] + h01 * ynew[i] +
                   h11 * h * st.k7[i];
        out.push_back(std::move(s));
        ++next_out;
      }
      t = tend;
      y.swap(ynew);
      st.k1.swap(st.k7);  // FSAL
      const double fac =
          0.9 * std::pow(std::max(err, 1e-10), -0.17) * std::pow(errold, 0.04);
      h *= std::clamp(fac, 0.2, 5.0);
      h = std::min(h, st.max_step);
      errold = std::max(err, 1e-10);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }
  return out;
}

State rk_endpoint(const Rhs& rhs, const State& y0, double t0, double t1,
                  const IntegratorConfig& cfg) {
  TimeGrid g{t0, t1, t1 - t0};
  auto samples = rk_adaptive(rhs, y0, g, cfg);
  return samples.back().y;
}

std::vector<Sample> euler_maruyama(const Rhs& drift,
                                   const std::vector<NoiseTerm>& noise,
                                   const State& y0, const TimeGrid& grid,
                                   double dt, std::uint64_t seed) {
  grid.validate();
  if (!(dt > 0.0) || dt > grid.dt_out + 1e-15 * grid.dt_out)
    throw DomainError("euler_maruyama requires 0 < dt <= dt_out");
  if (!finite(y0)) throw NonFiniteState("euler_maruyama: non-finite initial state");

  const auto out_times = grid.sample_times();
  const std::size_t nsub = static_cast<std::size_t>(
      std::ceil(grid.dt_out / dt - 1e-9));
  const double h = grid.dt_out / static_cast<double>(nsub);
  const double sqrt_h = std::sqrt(h);

  std::vector<Sample> out;
  out.reserve(out_times.size());
  State y = y0, ynext(y0.size()), dy(y0.size()), gy(y0.size());
  out.push_back({out_times[0], y});

  std::uint64_t step = 0;
  for (std::size_t seg = 1; seg < out_times.size(); ++seg) {
    double t = out_times[seg - 1];
    for (std::size_t s = 0; s < nsub; ++s, ++step) {
      drift(t, y, dy);
      for (std::size_t i = 0; i < y.size(); ++i) ynext[i] = y[i] + h * dy[i];
      for (std::size_t j = 0; j < noise.size(); ++j) {
        const double dw =
            sqrt_h * lz3::detail::counter_normal(seed, static_cast<std::uint32_t>(j), step);
        noise[j].apply(t, y, gy);
        const double w = noise[j].volatility * dw;
        for (std::size_t i = 0; i < y.size(); ++i) ynext[i] += w * gy[i];
      }
      y.swap(ynext);
      t += h;
    }
    if (!finite(y))
      throw NonFiniteState("euler_maruyama: state became non-finite near t = " +
                           std::to_string(out_times[seg]));
    out.push_back({out_times[seg], y});
  }
  return out;
}

}  // namespace lz3::propagate
