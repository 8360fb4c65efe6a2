#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "cpforce/atom.hpp"
#include "cpforce/force.hpp"
#include "cpforce/greens.hpp"
#include "cpforce/material.hpp"
#include "cpforce/spectra.hpp"

namespace cpforce {

enum class Task { shift, force, potential, dynamics, greens };

Task parse_task(const std::string& name);  // ConfigError on unknown names
const char* task_name(Task task);

struct SweepSpec {
  std::string variable;
  double min = 0.0;
  double max = 0.0;
  int points = 2;
  bool log = false;

  std::vector<double> values() const;
};

// Either the two-level convenience form or an explicit level list.
struct AtomInput {
  double coupling_g = 0.0;
  // two-level form
  std::optional<double> omega10;
  double theta = 0.0;
  double phi = 0.0;
  // multilevel form
  std::vector<double> levels;
  struct Dipole {
    int m = 0;
    int n = 0;
    Vec3 d = Vec3::Zero();
  };
  std::vector<Dipole> dipoles;

  bool two_level() const { return omega10.has_value(); }
  // Builds the atom; `omega10_override` replaces the two-level frequency.
  AtomSpec build(std::optional<double> omega10_override = std::nullopt) const;
};

struct DynamicsSpec {
  Eigen::MatrixXcd sigma0;  // empty until resolved against the atom size
  double t_max = 10.0;
  bool t_in_decay_units = true;  // t_max in units of 1/max(Gamma)
  int points = 201;
};

struct RunConfig {
  Task task = Task::shift;
  MaterialModel material;
  AtomInput atom;
  std::vector<double> z_values;
  std::optional<SweepSpec> sweep;
  int state = 0;                       // potential task
  GreenPath path = GreenPath::full;    // potential task
  DynamicsSpec dynamics;
  std::string output_path;
  int precision = 10;
  Tolerances tolerances;
  TwoLevelSolveOptions two_level;
  GeneralSolveOptions general;
  int workers = 1;
  bool strict = false;
};

// Parses the YAML configuration. Unknown keys, missing required entries and
// out-of-range values raise ConfigError.
RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::string& path);

}  // namespace cpforce
