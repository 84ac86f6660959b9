// lz3: three-level Landau-Zener sweep simulator.
//
// Subcommands: simulate, figure, compare-analytic, liouvillian, sweep,
// langevin (plus a hidden specfun-eval used by test tooling).
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 comparison bound exceeded.

#include <CLI11.hpp>
#include <iostream>

#include "lz3/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"three-level Landau-Zener sweep simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lz3 0.1.0");

  std::string config_path, figure_name, outdir = ".";
  double t_freeze = 0.0;
  std::size_t trajectories = 1;
  std::uint64_t seed = 1;
  std::string sf_fn;
  double sf[6] = {0, 0, 0, 0, 0, 0};

  auto* simulate = app.add_subcommand("simulate", "run a configured scenario");
  simulate->add_option("--config", config_path, "scenario JSON")->required();

  auto* figure = app.add_subcommand("figure", "emit plot-ready figure data");
  figure->add_option("name", figure_name, "fig1a..fig4")->required();
  figure->add_option("--outdir", outdir, "output directory");

  auto* compare = app.add_subcommand("compare-analytic",
                                     "closed-form vs numeric deviation report");
  compare->add_option("--config", config_path, "scenario JSON")->required();

  auto* liou = app.add_subcommand("liouvillian", "frozen-H spectrum and steady state");
  liou->add_option("--config", config_path, "scenario JSON")->required();
  liou->add_option("--t", t_freeze, "freeze time")->required();

  auto* sweep = app.add_subcommand("sweep", "final populations over parameter lists");
  sweep->add_option("--config", config_path, "scenario JSON")->required();

  auto* langevin = app.add_subcommand("langevin", "stochastic trajectory ensemble");
  langevin->add_option("--config", config_path, "scenario JSON")->required();
  langevin->add_option("--trajectories", trajectories, "ensemble size");
  langevin->add_option("--seed", seed, "base seed");

  auto* sfeval = app.add_subcommand("specfun-eval", "");
  sfeval->group("");  // hidden, test tooling
  sfeval->add_option("fn", sf_fn)->required();
  sfeval->add_option("--a-re", sf[0]);
  sfeval->add_option("--a-im", sf[1]);
  sfeval->add_option("--b-re", sf[2]);
  sfeval->add_option("--b-im", sf[3]);
  sfeval->add_option("--z-re", sf[4]);
  sfeval->add_option("--z-im", sf[5]);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed())
      return lz3::cli::cmd_simulate(lz3::cli::parse_config_file(config_path));
    if (figure->parsed()) return lz3::cli::cmd_figure(figure_name, outdir);
    if (compare->parsed())
      return lz3::cli::cmd_compare_analytic(lz3::cli::parse_config_file(config_path));
    if (liou->parsed())
      return lz3::cli::cmd_liouvillian(lz3::cli::parse_config_file(config_path),
                                       t_freeze);
    if (sweep->parsed())
      return lz3::cli::cmd_sweep(lz3::cli::parse_config_file(config_path));
    if (langevin->parsed())
      return lz3::cli::cmd_langevin(lz3::cli::parse_config_file(config_path),
                                    trajectories, seed);
    if (sfeval->parsed())
      return lz3::cli::cmd_specfun_eval(sf_fn, sf[0], sf[1], sf[2], sf[3], sf[4],
                                        sf[5]);
  } catch (const lz3::ConfigError& e) {
    std::cerr << "lz3: " << e.what() << "\n";
    return 2;
  } catch (const lz3::UnknownFigure& e) {
    std::cerr << "lz3: unknown figure " << e.what() << "\n";
    return 2;
  } catch (const lz3::NumericalError& e) {
    std::cerr << "lz3: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
