#include "cpforce/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cpforce/dynamics.hpp"
#include "cpforce/error.hpp"

namespace cpforce {

namespace {

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError(where + ": unknown key '" + key + "' (allowed: " + list + ")");
    }
  }
}

template <class T>
T get(const YAML::Node& node, const std::string& key, const std::string& where) {
  const YAML::Node v = node[key];
  if (!v) throw ConfigError(where + ": missing required key '" + key + "'");
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + "." + key + ": value has the wrong type");
  }
}

template <class T>
T get_or(const YAML::Node& node, const std::string& key, T fallback, const std::string& where) {
  if (!node[key]) return fallback;
  return get<T>(node, key, where);
}

double positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(what + " must be positive");
  return v;
}

DrudeLorentzParams parse_response(const YAML::Node& node, const std::string& where) {
  check_keys(node, {"omega_P", "gamma", "omega_T"}, where);
  DrudeLorentzParams p;
  p.omega_P = get<double>(node, "omega_P", where);
  p.gamma = get<double>(node, "gamma", where);
  p.omega_T = get_or<double>(node, "omega_T", 1.0, where);
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return p;
}

MaterialModel parse_material(const YAML::Node& node) {
  check_keys(node, {"omega_P", "gamma", "omega_T", "vacuum", "permeability"}, "material");
  MaterialModel m;
  if (get_or<bool>(node, "vacuum", false, "material")) {
    if (node["omega_P"] || node["gamma"] || node["permeability"])
      throw ConfigError("material: 'vacuum: true' excludes response parameters");
    return m;
  }
  YAML::Node eps;
  for (const char* k : {"omega_P", "gamma", "omega_T"})
    if (node[k]) eps[k] = node[k];
  m.permittivity = parse_response(eps, "material");
  if (node["permeability"]) m.permeability = parse_response(node["permeability"], "material.permeability");
  return m;
}

Vec3 parse_vec3(const YAML::Node& node, const std::string& where) {
  if (!node.IsSequence() || node.size() != 3) throw ConfigError(where + ": expected [x, y, z]");
  Vec3 v;
  for (int i = 0; i < 3; ++i) v(i) = node[i].as<double>();
  return v;
}

AtomInput parse_atom(const YAML::Node& node) {
  check_keys(node, {"coupling_g", "omega10", "theta", "phi", "levels", "dipoles"}, "atom");
  AtomInput a;
  a.coupling_g = get<double>(node, "coupling_g", "atom");
  if (!(a.coupling_g >= 0.0)) throw ConfigError("atom.coupling_g must be non-negative");
  const bool two = static_cast<bool>(node["omega10"]);
  const bool multi = static_cast<bool>(node["levels"]);
  if (two == multi) throw ConfigError("atom: give exactly one of 'omega10' or 'levels'");
  if (two) {
    if (node["dipoles"]) throw ConfigError("atom: 'dipoles' belongs to the 'levels' form");
    a.omega10 = positive(get<double>(node, "omega10", "atom"), "atom.omega10");
    a.theta = get_or<double>(node, "theta", 0.0, "atom");
    a.phi = get_or<double>(node, "phi", 0.0, "atom");
  } else {
    if (node["theta"] || node["phi"])
      throw ConfigError("atom: 'theta'/'phi' belong to the two-level form");
    a.levels = get<std::vector<double>>(node, "levels", "atom");
    const YAML::Node ds = node["dipoles"];
    if (!ds || !ds.IsSequence()) throw ConfigError("atom.dipoles: expected a list");
    for (const auto& d : ds) {
      check_keys(d, {"m", "n", "d"}, "atom.dipoles[]");
      AtomInput::Dipole dip;
      dip.m = get<int>(d, "m", "atom.dipoles[]");
      dip.n = get<int>(d, "n", "atom.dipoles[]");
      dip.d = parse_vec3(d["d"], "atom.dipoles[].d");
      a.dipoles.push_back(dip);
    }
  }
  try {
    (void)a.build();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("atom: ") + e.what());
  }
  return a;
}

SweepSpec parse_sweep(const YAML::Node& node) {
  check_keys(node, {"variable", "min", "max", "points", "spacing"}, "sweep");
  SweepSpec s;
  s.variable = get<std::string>(node, "variable", "sweep");
  s.min = get<double>(node, "min", "sweep");
  s.max = get<double>(node, "max", "sweep");
  s.points = get<int>(node, "points", "sweep");
  const std::string spacing = get_or<std::string>(node, "spacing", "lin", "sweep");
  if (spacing != "lin" && spacing != "log") throw ConfigError("sweep.spacing must be 'lin' or 'log'");
  s.log = spacing == "log";
  if (!(s.min < s.max)) throw ConfigError("sweep: min must be strictly below max");
  if (s.points < 2) throw ConfigError("sweep: points must be at least 2");
  if (s.log && !(s.min > 0.0)) throw ConfigError("sweep: log spacing needs min > 0");
  return s;
}

Eigen::MatrixXcd parse_initial(const YAML::Node& node, int N) {
  check_keys(node, {"state", "amplitudes", "populations", "coherences"}, "dynamics.initial");
  const int forms = (node["state"] ? 1 : 0) + (node["amplitudes"] ? 1 : 0) +
                    (node["populations"] ? 1 : 0);
  if (forms != 1)
    throw ConfigError("dynamics.initial: give exactly one of 'state', 'amplitudes', 'populations'");
  if (node["coherences"] && !node["populations"])
    throw ConfigError("dynamics.initial: 'coherences' requires 'populations'");

  if (node["state"]) {
    const int l = get<int>(node, "state", "dynamics.initial");
    if (l < 0 || l >= N) throw ConfigError("dynamics.initial.state out of range");
    return DensityMatrix::pure_state(N, l).sigma;
  }
  if (node["amplitudes"]) {
    const YAML::Node amps = node["amplitudes"];
    if (!amps.IsSequence() || static_cast<int>(amps.size()) != N)
      throw ConfigError("dynamics.initial.amplitudes: need one entry per level");
    Eigen::VectorXcd c(N);
    for (int k = 0; k < N; ++k) {
      const YAML::Node e = amps[k];
      if (e.IsSequence()) {
        if (e.size() != 2) throw ConfigError("dynamics.initial.amplitudes: complex entries are [re, im]");
        c(k) = cdouble(e[0].as<double>(), e[1].as<double>());
      } else {
        c(k) = e.as<double>();
      }
    }
    try {
      return DensityMatrix::superposition(c).sigma;
    } catch (const DomainError& e) {
      throw ConfigError(std::string("dynamics.initial: ") + e.what());
    }
  }
  const auto pops = get<std::vector<double>>(node, "populations", "dynamics.initial");
  if (static_cast<int>(pops.size()) != N)
    throw ConfigError("dynamics.initial.populations: need one entry per level");
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(N, N);
  for (int k = 0; k < N; ++k) s(k, k) = pops[k];
  if (node["coherences"]) {
    for (const auto& c : node["coherences"]) {
      check_keys(c, {"m", "n", "re", "im"}, "dynamics.initial.coherences[]");
      const int m = get<int>(c, "m", "coherences[]");
      const int n = get<int>(c, "n", "coherences[]");
      if (m < 0 || n < 0 || m >= N || n >= N || m == n)
        throw ConfigError("dynamics.initial.coherences: invalid index pair");
      const cdouble v(get_or<double>(c, "re", 0.0, "coherences[]"),
                      get_or<double>(c, "im", 0.0, "coherences[]"));
      s(m, n) = v;
      s(n, m) = std::conj(v);
    }
  }
  DensityMatrix d;
  d.sigma = s;
  try {
    d.validate(1e-10);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("dynamics.initial: ") + e.what());
  }
  return s;
}

}  // namespace

Task parse_task(const std::string& name) {
  if (name == "shift") return Task::shift;
  if (name == "force") return Task::force;
  if (name == "potential") return Task::potential;
  if (name == "dynamics") return Task::dynamics;
  if (name == "greens") return Task::greens;
  throw ConfigError("unknown task '" + name + "' (shift, force, potential, dynamics, greens)");
}

const char* task_name(Task task) {
  switch (task) {
    case Task::shift: return "shift";
    case Task::force: return "force";
    case Task::potential: return "potential";
    case Task::dynamics: return "dynamics";
    case Task::greens: return "greens";
  }
  return "?";
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    v[i] = log ? min * std::pow(max / min, f) : min + (max - min) * f;
  }
  v.back() = max;
  return v;
}

AtomSpec AtomInput::build(std::optional<double> omega10_override) const {
  if (two_level()) return AtomSpec::two_level(coupling_g, omega10_override.value_or(*omega10), theta, phi);
  if (omega10_override) throw ConfigError("sweeping omega10 needs the two-level atom form");
  AtomSpec atom(levels, coupling_g);
  for (const auto& d : dipoles) atom.set_dipole(d.m, d.n, d.d);
  return atom;
}

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("configuration is not valid YAML: ") + e.what());
  }
  if (!root || root.IsNull()) throw ConfigError("configuration is empty");
  check_keys(root, {"task", "material", "atom", "geometry", "sweep", "potential", "dynamics",
                    "output", "solver", "tolerance", "workers"},
             "top level");

  try {
    RunConfig cfg;
    cfg.task = parse_task(get<std::string>(root, "task", "top level"));
    if (!root["material"]) throw ConfigError("missing 'material' block");
    cfg.material = parse_material(root["material"]);
    if (!root["atom"]) throw ConfigError("missing 'atom' block");
    cfg.atom = parse_atom(root["atom"]);

    if (!root["geometry"]) throw ConfigError("missing 'geometry' block");
    const YAML::Node geo = root["geometry"];
    check_keys(geo, {"z"}, "geometry");
    if (!geo["z"]) throw ConfigError("geometry: missing 'z'");
    if (geo["z"].IsSequence()) {
      cfg.z_values = geo["z"].as<std::vector<double>>();
    } else {
      cfg.z_values = {geo["z"].as<double>()};
    }
    if (cfg.z_values.empty()) throw ConfigError("geometry.z: empty list");
    for (double z : cfg.z_values) positive(z, "geometry.z");

    if (root["sweep"]) {
      cfg.sweep = parse_sweep(root["sweep"]);
      const std::string& v = cfg.sweep->variable;
      std::set<std::string> allowed;
      switch (cfg.task) {
        case Task::shift:
        case Task::force:
        case Task::potential: allowed = {"omega10", "z"}; break;
        case Task::greens: allowed = {"omega", "u"}; break;
        case Task::dynamics: throw ConfigError("sweep: not supported for the dynamics task");
      }
      if (!allowed.count(v)) throw ConfigError("sweep.variable '" + v + "' not valid for this task");
      if (v == "omega10" && !cfg.atom.two_level())
        throw ConfigError("sweep over omega10 needs the two-level atom form");
      if (v == "z" && cfg.z_values.size() > 1)
        throw ConfigError("sweep over z conflicts with a list in geometry.z");
      if (v != "omega" && !(cfg.sweep->min > 0.0)) throw ConfigError("sweep: values must be positive");
    } else if (cfg.task == Task::greens) {
      throw ConfigError("greens task needs a sweep over 'omega' or 'u'");
    }
    if ((cfg.task == Task::shift || cfg.task == Task::force) && !cfg.atom.two_level())
      throw ConfigError("the shift and force tasks use the two-level atom form");

    if (root["potential"]) {
      if (cfg.task != Task::potential) throw ConfigError("'potential' block given for another task");
      const YAML::Node p = root["potential"];
      check_keys(p, {"state", "path"}, "potential");
      cfg.state = get_or<int>(p, "state", 0, "potential");
      const std::string path = get_or<std::string>(p, "path", "full", "potential");
      if (path == "full") cfg.path = GreenPath::full;
      else if (path == "short_distance") cfg.path = GreenPath::short_distance;
      else throw ConfigError("potential.path must be 'full' or 'short_distance'");
      const int N = cfg.atom.build().size();
      if (cfg.state < 0 || cfg.state >= N) throw ConfigError("potential.state out of range");
    }

    if (cfg.task == Task::dynamics) {
      if (!root["dynamics"]) throw ConfigError("dynamics task needs a 'dynamics' block");
      const YAML::Node d = root["dynamics"];
      check_keys(d, {"initial", "t_max", "t_unit", "points"}, "dynamics");
      if (!d["initial"]) throw ConfigError("dynamics: missing 'initial'");
      cfg.dynamics.sigma0 = parse_initial(d["initial"], cfg.atom.build().size());
      cfg.dynamics.t_max = positive(get_or<double>(d, "t_max", 10.0, "dynamics"), "dynamics.t_max");
      const std::string unit = get_or<std::string>(d, "t_unit", "decay", "dynamics");
      if (unit != "decay" && unit != "omega_T")
        throw ConfigError("dynamics.t_unit must be 'decay' or 'omega_T'");
      cfg.dynamics.t_in_decay_units = unit == "decay";
      cfg.dynamics.points = get_or<int>(d, "points", 201, "dynamics");
      if (cfg.dynamics.points < 2) throw ConfigError("dynamics.points must be at least 2");
      if (cfg.z_values.size() != 1) throw ConfigError("dynamics task takes a single z");
    } else if (root["dynamics"]) {
      throw ConfigError("'dynamics' block given for another task");
    }

    if (root["output"]) {
      const YAML::Node o = root["output"];
      check_keys(o, {"path", "precision"}, "output");
      cfg.output_path = get_or<std::string>(o, "path", "", "output");
      cfg.precision = get_or<int>(o, "precision", 10, "output");
      if (cfg.precision < 3 || cfg.precision > 17) throw ConfigError("output.precision must be in [3, 17]");
    }

    if (root["solver"]) {
      const YAML::Node s = root["solver"];
      check_keys(s, {"damping", "max_iterations", "step_tolerance", "validity_threshold",
                     "degeneracy_factor"},
                 "solver");
      auto& t = cfg.two_level;
      t.damping = get_or<double>(s, "damping", t.damping, "solver");
      if (!(t.damping > 0.0 && t.damping <= 1.0)) throw ConfigError("solver.damping must lie in (0, 1]");
      t.max_iterations = get_or<int>(s, "max_iterations", t.max_iterations, "solver");
      if (t.max_iterations < 1) throw ConfigError("solver.max_iterations must be positive");
      t.step_tolerance = positive(get_or<double>(s, "step_tolerance", t.step_tolerance, "solver"),
                                  "solver.step_tolerance");
      t.validity_threshold = positive(
          get_or<double>(s, "validity_threshold", t.validity_threshold, "solver"),
          "solver.validity_threshold");
      cfg.general.damping = t.damping;
      cfg.general.max_iterations = std::max(cfg.general.max_iterations, t.max_iterations);
      cfg.general.degeneracy_factor = positive(
          get_or<double>(s, "degeneracy_factor", cfg.general.degeneracy_factor, "solver"),
          "solver.degeneracy_factor");
    }

    if (root["tolerance"]) {
      const YAML::Node t = root["tolerance"];
      if (t.IsScalar()) {
        cfg.tolerances = Tolerances::uniform(positive(t.as<double>(), "tolerance"));
      } else {
        check_keys(t, {"green_iu", "green_real", "frequency"}, "tolerance");
        auto& tol = cfg.tolerances;
        tol.green_iu = positive(get_or<double>(t, "green_iu", tol.green_iu, "tolerance"), "tolerance.green_iu");
        tol.green_real = positive(get_or<double>(t, "green_real", tol.green_real, "tolerance"), "tolerance.green_real");
        tol.frequency = positive(get_or<double>(t, "frequency", tol.frequency, "tolerance"), "tolerance.frequency");
      }
    }

    cfg.workers = get_or<int>(root, "workers", 1, "top level");
    if (cfg.workers < 1) throw ConfigError("workers must be at least 1");
    return cfg;
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace cpforce
