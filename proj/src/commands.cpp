#include "lz3/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "lz3/closed.hpp"
#include "lz3/specfun.hpp"

namespace lz3::cli {

namespace {

namespace fs = std::filesystem;

void write_text(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write to '" + path + "'");
  out << content;
}

std::string describe_hamiltonian(const ScenarioConfig& cfg) {
  std::string s;
  if (cfg.is_lz()) {
    const LZParams& p = cfg.lz();
    s = "type=lz a=" + format_number(p.a) + " delta=" + format_number(p.delta) +
        " omega=" + format_number(p.omega);
    if (p.pulse_sigma) s += " pulse_sigma=" + format_number(*p.pulse_sigma);
  } else {
    const SU3Params& p = cfg.su3();
    s = "type=su3 a=" + format_number(p.a);
    const char* names[6] = {"d1", "d2", "d4", "d5", "d6", "d7"};
    for (int i = 0; i < 6; ++i)
      s += std::string(" ") + names[i] + "=" + format_number(p.coeffs[i]);
  }
  return s;
}

std::string csv_header_comments(const std::string& command,
                                const ScenarioConfig& cfg) {
  std::string s = "# lz3 " + command + "\n";
  s += "# hamiltonian: " + describe_hamiltonian(cfg) + "\n";
  if (cfg.noise) {
    s += "# noise: xi=" + format_number(cfg.noise->xi[0]) + "," +
         format_number(cfg.noise->xi[1]) + "," + format_number(cfg.noise->xi[2]) +
         "\n";
  }
  s += "# grid: t0=" + format_number(cfg.grid.t0) + " t1=" +
       format_number(cfg.grid.t1) + " dt_out=" + format_number(cfg.grid.dt_out) +
       "\n";
  return s;
}

std::string trajectory_csv(const Trajectory& tr, const std::string& comments) {
  std::string s = comments;
  s += "t,P1,P2,P3,trace,purity\n";
  for (const auto& pt : tr.points) {
    s += format_number(pt.t) + "," + format_number(pt.pops[0]) + "," +
         format_number(pt.pops[1]) + "," + format_number(pt.pops[2]) + "," +
         format_number(pt.trace) + "," + format_number(pt.purity) + "\n";
  }
  return s;
}

ordered_json trajectory_json(const Trajectory& tr, const std::string& command,
                             const ScenarioConfig& cfg) {
  ordered_json doc;
  doc["command"] = command;
  doc["config"] = config_to_json(cfg);
  doc["warnings"] = tr.warnings;
  ordered_json pts = ordered_json::array();
  for (const auto& pt : tr.points) {
    ordered_json j;
    j["t"] = pt.t;
    j["P"] = pt.pops;
    j["trace"] = pt.trace;
    j["purity"] = pt.purity;
    if (pt.state) {
      ordered_json st = ordered_json::array();
      for (const auto& amp : *pt.state) st.push_back({amp.real(), amp.imag()});
      j["state"] = st;
    }
    if (pt.rho) {
      ordered_json rows = ordered_json::array();
      for (int r = 0; r < 3; ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < 3; ++c)
          row.push_back({(*pt.rho)(r, c).real(), (*pt.rho)(r, c).imag()});
        rows.push_back(row);
      }
      j["rho"] = rows;
    }
    if (pt.std_error) j["std_error"] = *pt.std_error;
    pts.push_back(std::move(j));
  }
  doc["points"] = std::move(pts);
  return doc;
}

void emit_trajectory(const Trajectory& tr, const std::string& command,
                     const ScenarioConfig& cfg, const std::string& extra_comments) {
  if (!cfg.output) throw ConfigError(command + " requires an 'output' section");
  for (const auto& w : tr.warnings) std::cerr << "warning: " << w << "\n";
  if (cfg.output->format == "csv") {
    write_text(cfg.output->path,
               trajectory_csv(tr, csv_header_comments(command, cfg) + extra_comments));
  } else {
    write_text(cfg.output->path, trajectory_json(tr, command, cfg).dump(1) + "\n");
  }
}

Trajectory run_scenario(const ScenarioConfig& cfg) {
  const bool open_system = cfg.noise && !cfg.noise->is_zero();
  if (cfg.is_lz()) {
    if (open_system)
      return open::evolve_density(cfg.lz(), *cfg.noise, cfg.initial_density(),
                                  cfg.grid, cfg.integrator);
    return closed::evolve_state(cfg.lz(), cfg.initial_vector(), cfg.grid,
                                cfg.integrator);
  }
  if (open_system)
    return open::evolve_density(cfg.su3(), *cfg.noise, cfg.initial_density(),
                                cfg.grid, cfg.integrator);
  return closed::evolve_state(cfg.su3(), cfg.initial_vector(), cfg.grid,
                              cfg.integrator);
}

}  // namespace

int cmd_simulate(const ScenarioConfig& cfg) {
  emit_trajectory(run_scenario(cfg), "simulate", cfg, "");
  return 0;
}

namespace {

std::string eigencurve_csv(const LZParams& p, const TimeGrid& grid,
                           const std::string& comments) {
  std::string s = comments;
  s += "t,E1,E2,E3\n";
  for (const double t : grid.sample_times()) {
    const auto ev = algebra::eigenvalues_hermitian3(algebra::build_hamiltonian(p, t));
    s += format_number(t) + "," + format_number(ev[2]) + "," +
         format_number(ev[1]) + "," + format_number(ev[0]) + "\n";
  }
  return s;
}

std::string figure_comment(const std::string& name, const LZParams& p) {
  std::string s = "# lz3 figure " + name + "\n# hamiltonian: type=lz a=" +
                  format_number(p.a) + " delta=" + format_number(p.delta) +
                  " omega=" + format_number(p.omega);
  if (p.pulse_sigma) s += " pulse_sigma=" + format_number(*p.pulse_sigma);
  return s + "\n";
}

std::string gnuplot_stub(const std::string& csv_name, bool eigen) {
  std::string s = "# gnuplot stub\nset datafile separator ','\nset xlabel 't'\n";
  if (eigen)
    s += "plot '" + csv_name + "' using 1:2 with lines title 'E1', \\\n"
         "     '" + csv_name + "' using 1:3 with lines title 'E2', \\\n"
         "     '" + csv_name + "' using 1:4 with lines title 'E3'\n";
  else
    s += "plot '" + csv_name + "' using 1:2 with lines title 'P1', \\\n"
         "     '" + csv_name + "' using 1:3 with lines title 'P2', \\\n"
         "     '" + csv_name + "' using 1:4 with lines title 'P3', \\\n"
         "     '" + csv_name + "' using 1:5 with lines title 'trace', \\\n"
         "     '" + csv_name + "' using 1:6 with lines title 'purity'\n";
  return s;
}

ScenarioConfig figure_scenario(const LZParams& p, const TimeGrid& g,
                               std::optional<open::NoiseSpec> noise = {}) {
  ScenarioConfig cfg;
  cfg.hamiltonian = p;
  cfg.grid = g;
  cfg.noise = noise;
  return cfg;
}

}  // namespace

int cmd_figure(const std::string& name, const std::string& outdir) {
  fs::create_directories(outdir);
  const auto path = [&outdir](const std::string& f) {
    return (fs::path(outdir) / f).string();
  };
  const propagate::IntegratorConfig cfg;  // defaults
  const TimeGrid window{-20.0, 20.0, 0.01};
  const TimeGrid eigen_window{-10.0, 10.0, 0.01};
  const Vector3 level1{1.0, 0.0, 0.0};
  const Vector2 level1_2{1.0, 0.0};

  if (name == "fig1a") {
    for (const double d : {1.0, 2.0}) {
      const LZParams p{-1.0, d, d, {}};
      const std::string f = d == 1.0 ? "fig1a_delta1.csv" : "fig1a_delta2.csv";
      write_text(path(f), eigencurve_csv(p, eigen_window, figure_comment(name, p)));
    }
    write_text(path("fig1a.gp"), gnuplot_stub("fig1a_delta1.csv", true));
  } else if (name == "fig1b" || name == "fig1c") {
    const LZParams p = name == "fig1b" ? LZParams{-1.0, 1.0, 1.0, {}}
                                       : LZParams{1.0, 2.0, 2.0, {}};
    const auto tr = closed::evolve_state(p, level1, window, cfg);
    write_text(path(name + ".csv"),
               trajectory_csv(tr, figure_comment(name, p)));
    write_text(path(name + ".gp"), gnuplot_stub(name + ".csv", false));
  } else if (name == "fig2a" || name == "fig2b" || name == "fig2c") {
    const double delta = name == "fig2a" ? 1.0 : 2.0;
    const std::optional<double> sigma =
        name == "fig2c" ? std::optional<double>(5.0) : std::nullopt;
    // The pulsed panel gets a wider window so the post-pulse tail is visible.
    const TimeGrid g = name == "fig2c" ? TimeGrid{-40.0, 40.0, 0.01} : window;
    const LZParams p{-1.0, delta, delta, sigma};
    const auto tr = closed::two_level_evolve(-1.0, delta, sigma, level1_2, g, cfg);
    write_text(path(name + ".csv"), trajectory_csv(tr, figure_comment(name, p)));
    write_text(path(name + ".gp"), gnuplot_stub(name + ".csv", false));
  } else if (name == "fig3a") {
    const LZParams p{-1.0, 1.0, 5.0, {}};
    write_text(path("fig3a.csv"),
               eigencurve_csv(p, eigen_window, figure_comment(name, p)));
    write_text(path("fig3a.gp"), gnuplot_stub("fig3a.csv", true));
  } else if (name == "fig3b") {
    const LZParams p{-1.0, 1.0, 5.0, {}};
    const auto tr = closed::evolve_state(p, level1, window, cfg);
    write_text(path("fig3b.csv"), trajectory_csv(tr, figure_comment(name, p)));
    write_text(path("fig3b.gp"), gnuplot_stub("fig3b.csv", false));
  } else if (name == "fig4") {
    const LZParams p{1.0, 2.0, 2.0, {}};
    const auto noise = open::NoiseSpec::isotropic(0.1);
    Matrix3 rho0;
    rho0(0, 0) = 1.0;
    const auto tr = open::evolve_density(p, noise, rho0, window, cfg);
    std::string comments = figure_comment(name, p);
    comments += "# noise: xi=0.1,0.1,0.1\n";
    write_text(path("fig4.csv"), trajectory_csv(tr, comments));
    write_text(path("fig4.gp"), gnuplot_stub("fig4.csv", false));
  } else {
    throw UnknownFigure("'" + name + "' (expected fig1a..fig4)");
  }
  return 0;
}

int cmd_compare_analytic(const ScenarioConfig& cfg) {
  if (!cfg.is_lz() || algebra::classify(cfg.lz()) != SymmetryClass::SU2)
    throw DomainError("compare-analytic requires the symmetric su(2) coupling");
  if (!cfg.output) throw ConfigError("compare-analytic requires an 'output' section");
  const LZParams& p = cfg.lz();
  const double bound = cfg.comparison_bound.value_or(1e-6);

  const auto constants = closed::fit_constants(p, cfg.grid.t0);
  const Vector3 psi0{1.0, 0.0, 0.0};
  const auto numeric = closed::evolve_state(p, psi0, cfg.grid, cfg.integrator);

  double max_dev = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto& pt : numeric.points) {
    const Vector3 an = closed::analytic_state(p, constants, pt.t);
    for (int i = 0; i < 3; ++i) {
      const double dev = std::abs(an[i] - (*pt.state)[i]);
      max_dev = std::max(max_dev, dev);
      sum_sq += dev * dev;
      ++count;
    }
  }
  const double rms = std::sqrt(sum_sq / static_cast<double>(count));

  ordered_json doc;
  doc["command"] = "compare-analytic";
  doc["config"] = config_to_json(cfg);
  doc["fit_t0"] = cfg.grid.t0;
  doc["fit_condition"] = constants.condition;
  doc["fit_residual"] = constants.fit_residual;
  doc["max_deviation"] = max_dev;
  doc["rms_deviation"] = rms;
  doc["bound"] = bound;
  doc["pass"] = max_dev <= bound;
  write_text(cfg.output->path, doc.dump(1) + "\n");
  std::cout << "max deviation " << format_number(max_dev) << " (bound "
            << format_number(bound) << ")\n";
  return max_dev <= bound ? 0 : 4;
}

int cmd_liouvillian(const ScenarioConfig& cfg, double t_freeze) {
  if (!cfg.output) throw ConfigError("liouvillian requires an 'output' section");
  const Matrix3 h = cfg.is_lz()
                        ? algebra::build_hamiltonian(cfg.lz(), t_freeze)
                        : algebra::build_su3_hamiltonian(cfg.su3(), t_freeze);
  const open::NoiseSpec noise = cfg.noise.value_or(open::NoiseSpec{});
  const Matrix9 lv = open::liouvillian_matrix(h, noise);
  const auto spec = open::liouvillian_spectrum(lv, cfg.initial_density());

  ordered_json doc;
  doc["command"] = "liouvillian";
  doc["config"] = config_to_json(cfg);
  doc["t"] = t_freeze;
  ordered_json evs = ordered_json::array();
  for (const auto& ev : spec.eigenvalues)
    evs.push_back({{"re", ev.real()}, {"im", ev.imag()}});
  doc["eigenvalues"] = evs;
  doc["zero_index"] = spec.zero_index;

  std::vector<std::string> warnings;
  try {
    const Matrix3 ss = open::steady_state(lv);
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < 3; ++r) {
      ordered_json row = ordered_json::array();
      for (int c = 0; c < 3; ++c) row.push_back({ss(r, c).real(), ss(r, c).imag()});
      rows.push_back(row);
    }
    doc["steady_state"] = rows;
  } catch (const DegenerateKernel& e) {
    doc["steady_state"] = nullptr;
    warnings.push_back(e.what());
  }
  if (spec.amplitudes) {
    ordered_json amps = ordered_json::array();
    for (const auto& a : *spec.amplitudes) {
      ordered_json rows = ordered_json::array();
      for (int r = 0; r < 3; ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < 3; ++c) row.push_back({a(r, c).real(), a(r, c).imag()});
        rows.push_back(row);
      }
      amps.push_back(rows);
    }
    doc["amplitudes"] = amps;
  }
  doc["warnings"] = warnings;
  write_text(cfg.output->path, doc.dump(1) + "\n");
  return 0;
}

int cmd_sweep(const ScenarioConfig& cfg) {
  if (!cfg.output) throw ConfigError("sweep requires an 'output' section");
  if (!cfg.is_lz()) throw ConfigError("sweep requires an 'lz' hamiltonian");
  const LZParams& base = cfg.lz();
  const SweepSpec sw = cfg.sweep.value_or(SweepSpec{});
  const double base_xi = cfg.noise ? cfg.noise->xi[0] : 0.0;
  const std::vector<double> as = sw.a.value_or(std::vector<double>{base.a});
  const std::vector<double> ds = sw.delta.value_or(std::vector<double>{base.delta});
  const std::vector<double> ws = sw.omega.value_or(std::vector<double>{base.omega});
  const std::vector<double> xs = sw.xi.value_or(std::vector<double>{base_xi});

  const std::size_t total = as.size() * ds.size() * ws.size() * xs.size();
  if (total > 100000) throw ConfigError("sweep exceeds 1e5 points");

  std::string csv = csv_header_comments("sweep", cfg);
  csv += "a,delta,omega,xi,P1,P2,P3,purity,error\n";
  for (const double a : as)
    for (const double d : ds)
      for (const double w : ws)
        for (const double x : xs) {
          ScenarioConfig point = cfg;
          LZParams p = base;
          p.a = a;
          p.delta = d;
          p.omega = w;
          point.hamiltonian = p;
          point.noise = x > 0.0 ? std::optional<open::NoiseSpec>(
                                      open::NoiseSpec::isotropic(x))
                                : std::nullopt;
          csv += format_number(a) + "," + format_number(d) + "," +
                 format_number(w) + "," + format_number(x) + ",";
          try {
            const Trajectory tr = run_scenario(point);
            const auto& last = tr.points.back();
            csv += format_number(last.pops[0]) + "," + format_number(last.pops[1]) +
                   "," + format_number(last.pops[2]) + "," +
                   format_number(last.purity) + ",\n";
          } catch (const NumericalError& e) {
            csv += ",,,," + e.kind + "\n";
          }
        }
  write_text(cfg.output->path, csv);
  return 0;
}

int cmd_langevin(const ScenarioConfig& cfg, std::size_t n_traj, std::uint64_t seed) {
  if (!cfg.is_lz()) throw ConfigError("langevin requires an 'lz' hamiltonian");
  if (n_traj < 1) throw ConfigError("langevin requires at least one trajectory");
  const open::NoiseSpec noise = cfg.noise.value_or(open::NoiseSpec{});
  const LangevinSpec ls = cfg.langevin.value_or(LangevinSpec{});
  const unsigned workers = cfg.workers.value_or(0);

  Trajectory tr;
  if (n_traj == 1) {
    tr = open::langevin_trajectory(cfg.lz(), noise, cfg.initial_vector(), cfg.grid,
                                   ls.dt, seed, ls.scheme_enum());
  } else {
    tr = open::langevin_ensemble(cfg.lz(), noise, cfg.initial_vector(), cfg.grid,
                                 ls.dt, seed, n_traj, ls.scheme_enum(), workers);
  }
  std::string extra = "# langevin: trajectories=" + std::to_string(n_traj) +
                      " seed=" + std::to_string(seed) + " dt=" +
                      format_number(ls.dt) + " scheme=" + ls.scheme + "\n";
  emit_trajectory(tr, "langevin", cfg, extra);
  return 0;
}

int cmd_specfun_eval(const std::string& fn, double are, double aim, double bre,
                     double bim, double zre, double zim) {
  const cplx a{are, aim}, b{bre, bim}, z{zre, zim};
  cplx v;
  if (fn == "gamma")
    v = specfun::gamma_complex(z);
  else if (fn == "kummer")
    v = specfun::kummer_m(a, b, z);
  else if (fn == "pcf_d")
    v = specfun::pcf_d(a, z);
  else if (fn == "pcf_d_deriv")
    v = specfun::pcf_d_deriv(a, z);
  else
    throw ConfigError("specfun-eval: unknown function '" + fn + "'");
  std::printf("%.17g %.17g\n", v.real(), v.imag());
  return 0;
}

}  // namespace lz3::cli
