#pragma once

// CLI command implementations, kept callable from tests.  Each returns the
// process exit code; configuration and numerical failures are thrown and
// mapped to exit codes by the binary.

#include <cstdint>
#include <string>

#include "lz3/scenario.hpp"

namespace lz3::cli {

int cmd_simulate(const ScenarioConfig& cfg);
int cmd_figure(const std::string& name, const std::string& outdir);
int cmd_compare_analytic(const ScenarioConfig& cfg);
int cmd_liouvillian(const ScenarioConfig& cfg, double t_freeze);
int cmd_sweep(const ScenarioConfig& cfg);
int cmd_langevin(const ScenarioConfig& cfg, std::size_t n_traj, std::uint64_t seed);

// Hidden debug hook: evaluates one special function and prints "re im".
int cmd_specfun_eval(const std::string& fn, double are, double aim, double bre,
                     double bim, double zre, double zim);

}  // namespace lz3::cli
