#include "lz3/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lz3::cli {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where.empty() ? what : where + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) fail(where, "unknown key '" + item.key() + "'");
  }
}

double need_number(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) fail(where, std::string("missing key '") + key + "'");
  if (!obj[key].is_number()) fail(where, std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

double opt_number(const json& obj, const std::string& where, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(where, std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(where, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::variant<LZParams, SU3Params> parse_hamiltonian(const json& h) {
  if (!h.is_object()) fail("hamiltonian", "must be an object");
  std::string type = h.value("type", "lz");
  if (type == "lz") {
    check_keys(h, "hamiltonian", {"type", "a", "delta", "omega", "pulse_sigma"});
    LZParams p;
    p.a = need_number(h, "hamiltonian", "a");
    p.delta = need_number(h, "hamiltonian", "delta");
    p.omega = need_number(h, "hamiltonian", "omega");
    if (h.contains("pulse_sigma") && !h["pulse_sigma"].is_null())
      p.pulse_sigma = need_number(h, "hamiltonian", "pulse_sigma");
    p.validate();
    return p;
  }
  if (type == "su3") {
    check_keys(h, "hamiltonian", {"type", "a", "coeffs"});
    SU3Params p;
    p.a = need_number(h, "hamiltonian", "a");
    if (!h.contains("coeffs") || !h["coeffs"].is_object())
      fail("hamiltonian", "su3 requires a 'coeffs' object");
    const json& c = h["coeffs"];
    check_keys(c, "hamiltonian.coeffs", {"d1", "d2", "d4", "d5", "d6", "d7"});
    const char* names[6] = {"d1", "d2", "d4", "d5", "d6", "d7"};
    for (int i = 0; i < 6; ++i)
      p.coeffs[i] = opt_number(c, "hamiltonian.coeffs", names[i], 0.0);
    p.validate();
    return p;
  }
  fail("hamiltonian", "unknown type '" + type + "' (expected 'lz' or 'su3')");
}

}  // namespace

open::LangevinScheme LangevinSpec::scheme_enum() const {
  if (scheme == "exponential_midpoint") return open::LangevinScheme::ExponentialMidpoint;
  if (scheme == "euler_maruyama") return open::LangevinScheme::EulerMaruyama;
  throw ConfigError("langevin.scheme must be 'exponential_midpoint' or 'euler_maruyama'");
}

Vector3 ScenarioConfig::initial_vector() const {
  if (std::holds_alternative<int>(initial_state)) {
    const int idx = std::get<int>(initial_state);
    Vector3 v{};
    v[idx - 1] = 1.0;
    return v;
  }
  return std::get<Vector3>(initial_state);
}

Matrix3 ScenarioConfig::initial_density() const {
  const Vector3 psi = initial_vector();
  Matrix3 rho;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
  return rho;
}

ScenarioConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Recover a line number from the byte offset for the diagnostic.
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    fail("", "JSON parse failure at line " + std::to_string(line) + ": " + e.what());
  }
  if (!root.is_object()) fail("", "top level must be an object");
  check_keys(root, "config",
             {"hamiltonian", "noise", "grid", "integrator", "initial_state",
              "output", "langevin", "sweep", "comparison", "workers"});

  ScenarioConfig cfg;
  if (!root.contains("hamiltonian")) fail("config", "missing key 'hamiltonian'");
  cfg.hamiltonian = parse_hamiltonian(root["hamiltonian"]);

  if (root.contains("noise") && !root["noise"].is_null()) {
    const json& n = root["noise"];
    check_keys(n, "noise", {"xi"});
    open::NoiseSpec ns;
    if (!n.contains("xi")) fail("noise", "missing key 'xi'");
    if (n["xi"].is_number()) {
      ns = open::NoiseSpec::isotropic(n["xi"].get<double>());
    } else {
      const auto xs = number_list(n["xi"], "noise.xi");
      if (xs.size() != 3) fail("noise.xi", "expected 3 volatilities");
      ns.xi = {xs[0], xs[1], xs[2]};
    }
    ns.validate();
    cfg.noise = ns;
  }

  if (!root.contains("grid")) fail("config", "missing key 'grid'");
  {
    const json& g = root["grid"];
    check_keys(g, "grid", {"t0", "t1", "dt_out"});
    cfg.grid.t0 = need_number(g, "grid", "t0");
    cfg.grid.t1 = need_number(g, "grid", "t1");
    cfg.grid.dt_out = need_number(g, "grid", "dt_out");
    cfg.grid.validate();
  }

  if (root.contains("integrator")) {
    const json& g = root["integrator"];
    check_keys(g, "integrator", {"rtol", "atol", "max_step", "initial_step"});
    cfg.integrator.rtol = opt_number(g, "integrator", "rtol", cfg.integrator.rtol);
    cfg.integrator.atol = opt_number(g, "integrator", "atol", cfg.integrator.atol);
    cfg.integrator.max_step = opt_number(g, "integrator", "max_step", 0.0);
    cfg.integrator.initial_step = opt_number(g, "integrator", "initial_step", 0.0);
    cfg.integrator.validate();
    cfg.has_integrator = true;
  }

  if (root.contains("initial_state")) {
    const json& s = root["initial_state"];
    if (s.is_number_integer()) {
      const int idx = s.get<int>();
      if (idx < 1 || idx > 3) fail("initial_state", "basis index must be 1, 2 or 3");
      cfg.initial_state = idx;
    } else if (s.is_array()) {
      if (s.size() != 3) fail("initial_state", "expected 3 amplitudes");
      Vector3 v{};
      double nrm = 0.0;
      for (int i = 0; i < 3; ++i) {
        const auto pair = number_list(s[i], "initial_state");
        if (pair.size() != 2) fail("initial_state", "amplitudes are [re, im] pairs");
        v[i] = cplx(pair[0], pair[1]);
        nrm += std::norm(v[i]);
      }
      if (std::abs(nrm - 1.0) > 1e-8)
        fail("initial_state", "amplitudes must be normalized to 1e-8");
      cfg.initial_state = v;
    } else {
      fail("initial_state", "expected a basis index or amplitude array");
    }
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    check_keys(o, "output", {"path", "format"});
    OutputSpec out;
    if (!o.contains("path") || !o["path"].is_string())
      fail("output", "missing string key 'path'");
    out.path = o["path"].get<std::string>();
    if (o.contains("format")) {
      out.format = o["format"].get<std::string>();
      if (out.format != "csv" && out.format != "json")
        fail("output.format", "expected 'csv' or 'json'");
    }
    cfg.output = out;
  }

  if (root.contains("langevin")) {
    const json& l = root["langevin"];
    check_keys(l, "langevin", {"dt", "scheme"});
    LangevinSpec ls;
    ls.dt = opt_number(l, "langevin", "dt", ls.dt);
    if (l.contains("scheme")) ls.scheme = l["scheme"].get<std::string>();
    ls.scheme_enum();  // validates
    if (!(ls.dt > 0.0)) fail("langevin.dt", "must be positive");
    cfg.langevin = ls;
  }

  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    check_keys(s, "sweep", {"a", "delta", "omega", "xi"});
    SweepSpec sw;
    if (s.contains("a")) sw.a = number_list(s["a"], "sweep.a");
    if (s.contains("delta")) sw.delta = number_list(s["delta"], "sweep.delta");
    if (s.contains("omega")) sw.omega = number_list(s["omega"], "sweep.omega");
    if (s.contains("xi")) sw.xi = number_list(s["xi"], "sweep.xi");
    cfg.sweep = sw;
  }

  if (root.contains("comparison")) {
    const json& c = root["comparison"];
    check_keys(c, "comparison", {"bound"});
    cfg.comparison_bound = opt_number(c, "comparison", "bound", 1e-6);
  }

  if (root.contains("workers")) {
    if (!root["workers"].is_number_unsigned())
      fail("workers", "must be a non-negative integer");
    cfg.workers = root["workers"].get<unsigned>();
  }
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

ordered_json config_to_json(const ScenarioConfig& cfg) {
  ordered_json root;
  ordered_json h;
  if (cfg.is_lz()) {
    const LZParams& p = cfg.lz();
    h["type"] = "lz";
    h["a"] = p.a;
    h["delta"] = p.delta;
    h["omega"] = p.omega;
    if (p.pulse_sigma) h["pulse_sigma"] = *p.pulse_sigma;
  } else {
    const SU3Params& p = cfg.su3();
    h["type"] = "su3";
    h["a"] = p.a;
    ordered_json c;
    const char* names[6] = {"d1", "d2", "d4", "d5", "d6", "d7"};
    for (int i = 0; i < 6; ++i) c[names[i]] = p.coeffs[i];
    h["coeffs"] = c;
  }
  root["hamiltonian"] = h;
  if (cfg.noise) root["noise"] = {{"xi", cfg.noise->xi}};
  root["grid"] = {{"t0", cfg.grid.t0}, {"t1", cfg.grid.t1}, {"dt_out", cfg.grid.dt_out}};
  if (cfg.has_integrator)
    root["integrator"] = {{"rtol", cfg.integrator.rtol},
                          {"atol", cfg.integrator.atol},
                          {"max_step", cfg.integrator.max_step},
                          {"initial_step", cfg.integrator.initial_step}};
  if (std::holds_alternative<int>(cfg.initial_state)) {
    root["initial_state"] = std::get<int>(cfg.initial_state);
  } else {
    const Vector3& v = std::get<Vector3>(cfg.initial_state);
    ordered_json arr = ordered_json::array();
    for (int i = 0; i < 3; ++i) arr.push_back({v[i].real(), v[i].imag()});
    root["initial_state"] = arr;
  }
  if (cfg.output)
    root["output"] = {{"path", cfg.output->path}, {"format", cfg.output->format}};
  if (cfg.langevin)
    root["langevin"] = {{"dt", cfg.langevin->dt}, {"scheme", cfg.langevin->scheme}};
  if (cfg.sweep) {
    ordered_json s = ordered_json::object();
    if (cfg.sweep->a) s["a"] = *cfg.sweep->a;
    if (cfg.sweep->delta) s["delta"] = *cfg.sweep->delta;
    if (cfg.sweep->omega) s["omega"] = *cfg.sweep->omega;
    if (cfg.sweep->xi) s["xi"] = *cfg.sweep->xi;
    root["sweep"] = s;
  }
  if (cfg.comparison_bound) root["comparison"] = {{"bound", *cfg.comparison_bound}};
  if (cfg.workers) root["workers"] = *cfg.workers;
  return root;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace lz3::cli
