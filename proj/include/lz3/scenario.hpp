#pragma once

// Scenario configuration: strict JSON ingestion (unknown keys rejected) and
// lossless serialization, shared by every CLI command.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "lz3/algebra.hpp"
#include "lz3/open.hpp"
#include "lz3/propagate.hpp"
#include "lz3/trajectory.hpp"

namespace lz3::cli {

using ordered_json = nlohmann::ordered_json;

struct OutputSpec {
  std::string path;
  std::string format = "csv";  // "csv" | "json"
};

struct LangevinSpec {
  double dt = 1e-3;
  std::string scheme = "exponential_midpoint";  // | "euler_maruyama"

  open::LangevinScheme scheme_enum() const;
};

struct SweepSpec {
  // Explicit value lists; absent axes fall back to the base scenario value.
  std::optional<std::vector<double>> a, delta, omega, xi;
};

struct ScenarioConfig {
  std::variant<LZParams, SU3Params> hamiltonian;
  std::optional<open::NoiseSpec> noise;
  TimeGrid grid;
  propagate::IntegratorConfig integrator;
  bool has_integrator = false;  // whether the key was present (round-trip)
  // Basis index 1..3 or explicit amplitudes.
  std::variant<int, Vector3> initial_state{1};
  std::optional<OutputSpec> output;
  std::optional<LangevinSpec> langevin;
  std::optional<SweepSpec> sweep;
  std::optional<double> comparison_bound;
  std::optional<unsigned> workers;

  bool is_lz() const { return std::holds_alternative<LZParams>(hamiltonian); }
  const LZParams& lz() const { return std::get<LZParams>(hamiltonian); }
  const SU3Params& su3() const { return std::get<SU3Params>(hamiltonian); }

  Vector3 initial_vector() const;
  Matrix3 initial_density() const;
};

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);
ordered_json config_to_json(const ScenarioConfig& cfg);

// 12-significant-digit float formatting used for all emitted data files.
std::string format_number(double x);

}  // namespace lz3::cli
