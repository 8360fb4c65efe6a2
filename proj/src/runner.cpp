#include "cpforce/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "cpforce/dynamics.hpp"
#include "cpforce/error.hpp"
#include "cpforce/units.hpp"

namespace cpforce {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Sweep tables report F lambda_T^4 / (3C) in units of 1e9.
constexpr double kForceTableScale = 1e-9;

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::pole: return "pole";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::unphysical: return "unphysical";
    case ErrorKind::not_applicable: return "not_applicable";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::config: return "config";
    case ErrorKind::validity: return "validity";
  }
  return "unknown";
}

std::string format_number(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

using InputsFn = std::function<std::vector<double>(std::size_t)>;

// Runs `fn(i)` for i in [0, n) on up to `workers` threads; rows land in
// input order. Library errors become row statuses; a failed row keeps its
// grid coordinates from `inputs` and is NaN elsewhere.
std::vector<TableRow> parallel_rows(std::size_t n, int workers, std::size_t width,
                                    const InputsFn& inputs,
                                    const std::function<TableRow(std::size_t)>& fn) {
  auto failed = [&](std::size_t i) {
    std::vector<double> v = inputs(i);
    v.resize(width, kNaN);
    return v;
  };
  std::vector<TableRow> rows(n);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = fn(i);
      } catch (const Error& e) {
        rows[i].values = failed(i);
        rows[i].status = std::string("error:") + kind_name(e.kind());
        rows[i].message = e.what();
      } catch (const std::exception& e) {
        rows[i].values = failed(i);
        rows[i].status = "error:internal";
        rows[i].message = e.what();
      }
      const auto& v = rows[i].values;
      if (rows[i].status.rfind("error", 0) != 0 &&
          std::any_of(v.begin(), v.end(), [](double x) { return !std::isfinite(x); })) {
        rows[i].status = "error:nan";
      }
    }
  };
  const int threads = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return rows;
}

// The (z, omega10) grid shared by the two-level sweeps.
struct GridPoint {
  double z;
  double omega10;
};

std::vector<GridPoint> two_level_grid(const RunConfig& cfg) {
  std::vector<GridPoint> grid;
  const double w0 = cfg.atom.omega10.value_or(kNaN);
  if (cfg.sweep && cfg.sweep->variable == "z") {
    for (double z : cfg.sweep->values()) grid.push_back({z, w0});
  } else {
    const std::vector<double> ws = cfg.sweep ? cfg.sweep->values() : std::vector<double>{w0};
    for (double z : cfg.z_values)
      for (double w : ws) grid.push_back({z, w});
  }
  return grid;
}

std::vector<std::string> material_notes(const RunConfig& cfg) {
  std::vector<std::string> notes;
  notes.push_back("units: frequencies / omega_T, lengths / lambda_T (lambda_T = 2 pi c / omega_T), "
                  "times * omega_T");
  std::ostringstream m;
  if (cfg.material.permittivity) {
    const auto& p = *cfg.material.permittivity;
    m << "permittivity: Drude-Lorentz omega_P = " << p.omega_P << ", omega_T = " << p.omega_T
      << ", gamma = " << p.gamma << "; surface resonance omega_S = "
      << surface_resonance(cfg.material);
  } else {
    m << "permittivity: 1";
  }
  if (cfg.material.permeability) {
    const auto& p = *cfg.material.permeability;
    m << "; permeability: Drude-Lorentz omega_P = " << p.omega_P << ", omega_T = " << p.omega_T
      << ", gamma = " << p.gamma;
  }
  notes.push_back(m.str());
  std::ostringstream a;
  a << "atom: coupling g = " << cfg.atom.coupling_g;
  if (cfg.atom.two_level()) a << ", theta = " << cfg.atom.theta << ", phi = " << cfg.atom.phi;
  else a << ", " << cfg.atom.levels.size() << " levels";
  notes.push_back(a.str());
  return notes;
}

}  // namespace

// --- Table -------------------------------------------------------------------

std::string Table::render(int precision) const {
  std::ostringstream out;
  out << "# " << title << "\n";
  for (const auto& n : notes) out << "# " << n << "\n";
  for (const auto& c : columns) out << "# column " << c.name << ": " << c.description << "\n";
  out << "# column status: ok, warn:<reason> or error:<kind>\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!rows[i].message.empty()) out << "# row " << i << ": " << rows[i].message << "\n";
  for (const auto& c : columns) out << c.name << ",";
  out << "status\n";
  for (const auto& r : rows) {
    for (double v : r.values) out << format_number(v, precision) << ",";
    out << r.status << "\n";
  }
  return out.str();
}

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return static_cast<int>(i);
  return -1;
}

int Table::error_rows() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const TableRow& r) {
    return r.status.rfind("error", 0) == 0;
  }));
}

int Table::warning_rows() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const TableRow& r) {
    return r.status.rfind("warn", 0) == 0;
  }));
}

int table_exit_code(const Table& table, bool strict) {
  if (table.error_rows() > 0) return 3;
  if (strict && table.warning_rows() > 0) return 4;
  return 0;
}

// --- shift -------------------------------------------------------------------

Table run_shift_sweep(const RunConfig& cfg) {
  if (!cfg.atom.two_level()) throw ConfigError("shift task needs the two-level atom form");
  Table t;
  t.title = "shift: body-induced two-level transition shift and decay rate, short-distance limit";
  t.notes = material_notes(cfg);
  t.columns = {
      {"omega10", "bare transition frequency"},
      {"z", "atom-surface distance"},
      {"delta_omega", "self-consistent resonant shift, eps evaluated at the shifted frequency"},
      {"delta_omega_bare", "resonant shift with eps at the bare frequency (perturbative)"},
      {"gamma", "decay rate 4C Im eps / (hbar z^3 |eps+1|^2) at the shifted frequency"},
      {"gamma_bare", "decay rate at the bare frequency (perturbative)"},
      {"omega_tilde", "shifted transition frequency omega10 + delta_omega"},
      {"delta_omega_offres", "off-resonant shift (imaginary-frequency integral) at omega_tilde"},
      {"offres_ratio", "delta_omega_offres / omega_tilde"},
      {"offres_bound", "C omega_P^2 / (2 hbar z^3 omega_T^2 omega_tilde)"},
      {"iterations", "damped fixed-point iterations"},
  };
  const auto grid = two_level_grid(cfg);
  const InputsFn inputs = [&](std::size_t i) { return std::vector<double>{grid[i].omega10, grid[i].z}; };
  t.rows = parallel_rows(grid.size(), cfg.workers, t.columns.size(), inputs, [&](std::size_t i) {
    const auto [z, w10] = grid[i];
    const AtomSpec atom = cfg.atom.build(w10);
    const TwoLevelShift s = solve_two_level_shift(atom, cfg.material, z, cfg.two_level, cfg.tolerances);
    const OffResonantBound b = check_offresonant_bound(s, atom, cfg.material, z);
    TableRow row;
    row.values = {w10, z, s.delta_omega, s.delta_omega_bare, s.gamma, s.gamma_bare,
                  s.omega_tilde, s.delta_omega_offres, b.ratio, b.bound,
                  static_cast<double>(s.iterations)};
    if (!s.warnings.empty()) {
      row.status = "warn:validity";
      row.message = s.warnings.front();
    } else if (!b.satisfied) {
      row.status = "warn:offres_bound";
    }
    return row;
  });
  return t;
}

// --- force -------------------------------------------------------------------

Table run_force_sweep(const RunConfig& cfg) {
  if (!cfg.atom.two_level()) throw ConfigError("force task needs the two-level atom form");
  Table t;
  t.title = "force: two-level Casimir-Polder force components, short-distance limit";
  t.notes = material_notes(cfg);
  t.notes.push_back("force columns are F lambda_T^4 / (3C) x 1e-9 (C = d_A^2 (1 + cos^2 theta) / "
                    "(32 pi eps0)); positive values are repulsive");
  t.columns = {
      {"omega10", "bare transition frequency"},
      {"z", "atom-surface distance"},
      {"F11_r", "resonant force on the excited state, shifted frequency and linewidth gamma + Gamma"},
      {"F11_r_pert", "resonant force, bare frequency and linewidth gamma (perturbative)"},
      {"F11_r_shift", "resonant force, shifted frequency and linewidth gamma"},
      {"F11_r_broad", "resonant force, bare frequency and linewidth gamma + Gamma"},
      {"F11_or", "off-resonant force on the excited state with shift and broadening"},
      {"F11_or_pert", "off-resonant force on the excited state, bare frequency, no broadening"},
      {"F00_or", "off-resonant force on the ground state (equals -F11_or)"},
      {"F11_or_broad_delta", "F11_or(Gamma) - F11_or(Gamma = 0) at the shifted frequency"},
      {"omega_tilde", "shifted transition frequency"},
      {"gamma", "decay rate at the shifted frequency"},
  };
  const auto grid = two_level_grid(cfg);
  const InputsFn inputs = [&](std::size_t i) { return std::vector<double>{grid[i].omega10, grid[i].z}; };
  t.rows = parallel_rows(grid.size(), cfg.workers, t.columns.size(), inputs, [&](std::size_t i) {
    const auto [z, w10] = grid[i];
    const AtomSpec atom = cfg.atom.build(w10);
    const TwoLevelShift s = solve_two_level_shift(atom, cfg.material, z, cfg.two_level, cfg.tolerances);
    const auto& sp = s.spectrum;
    const double C = atom.reference_C();
    const double norm = C > 0.0 ? kForceTableScale / (3.0 * C) : 0.0;
    const auto& m = cfg.material;
    const double f11or = two_level_offresonant_force(atom, m, sp, z, 1, cfg.tolerances);
    TableRow row;
    row.values = {
        w10,
        z,
        norm * two_level_resonant_force(atom, m, sp, z, ResonantVariant::nonperturbative),
        norm * two_level_resonant_force(atom, m, sp, z, ResonantVariant::perturbative),
        norm * two_level_resonant_force(atom, m, sp, z, ResonantVariant::shift_only),
        norm * two_level_resonant_force(atom, m, sp, z, ResonantVariant::broadening_only),
        norm * f11or,
        norm * two_level_offresonant_force(atom, m, sp, z, 1, cfg.tolerances, true),
        norm * two_level_offresonant_force(atom, m, sp, z, 0, cfg.tolerances),
        norm * two_level_offresonant_broadening_delta(atom, m, sp, z, cfg.tolerances),
        s.omega_tilde,
        s.gamma,
    };
    if (!s.warnings.empty()) {
      row.status = "warn:validity";
      row.message = s.warnings.front();
    }
    return row;
  });
  return t;
}

// --- potential ---------------------------------------------------------------

Table run_potential(const RunConfig& cfg) {
  Table t;
  t.title = std::string("potential: perturbative van der Waals potential and force of state ") +
            std::to_string(cfg.state) +
            (cfg.path == GreenPath::full ? ", full Green tensor" : ", short-distance Green tensor");
  t.notes = material_notes(cfg);
  t.notes.push_back("energies U / (hbar omega_T), forces F lambda_T / (hbar omega_T)");
  const bool two = cfg.atom.two_level();
  if (two) t.columns.push_back({"omega10", "transition frequency of the two-level atom"});
  t.columns.insert(t.columns.end(),
                   {{"z", "atom-surface distance"},
                    {"U_or", "off-resonant potential (imaginary-frequency integral)"},
                    {"U_r", "resonant potential (real-frequency pole terms)"},
                    {"U", "U_or + U_r"},
                    {"F_or", "-dU_or/dz"},
                    {"F_r", "-dU_r/dz"},
                    {"F", "-dU/dz"}});
  std::vector<GridPoint> grid;
  if (two) {
    grid = two_level_grid(cfg);
  } else {
    const std::vector<double> zs =
        (cfg.sweep && cfg.sweep->variable == "z") ? cfg.sweep->values() : cfg.z_values;
    for (double z : zs) grid.push_back({z, kNaN});
  }
  const InputsFn inputs = [&](std::size_t i) {
    return two ? std::vector<double>{grid[i].omega10, grid[i].z} : std::vector<double>{grid[i].z};
  };
  t.rows = parallel_rows(grid.size(), cfg.workers, t.columns.size(), inputs, [&](std::size_t i) {
    const auto [z, w10] = grid[i];
    const AtomSpec atom = two ? cfg.atom.build(w10) : cfg.atom.build();
    const PotentialEval p = vdw_potential(atom, cfg.material, cfg.state, z, cfg.tolerances, cfg.path);
    TableRow row;
    if (two) row.values.push_back(w10);
    row.values.insert(row.values.end(), {z, p.U_or, p.U_r, p.U(), p.F_or, p.F_r, p.F()});
    return row;
  });
  return t;
}

// --- greens ------------------------------------------------------------------

Table run_greens(const RunConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("greens task needs a sweep");
  const bool imaginary = cfg.sweep->variable == "u";
  Table t;
  t.title = std::string("greens: equal-position scattering Green tensor of the half space at ") +
            (imaginary ? "imaginary frequencies omega = i u" : "real frequencies");
  t.notes = material_notes(cfg);
  t.notes.push_back("tensor entries in units of 1/lambda_T, z-derivatives in 1/lambda_T^2; "
                    "dz_* differentiate both position arguments, lateral is d/dx G_xz");
  const std::string f = imaginary ? "u" : "omega";
  t.columns = {{f, imaginary ? "imaginary frequency" : "real frequency"},
               {"z", "atom-surface distance"},
               {"re_xx", "Re G_xx = Re G_yy"},
               {"im_xx", "Im G_xx"},
               {"re_zz", "Re G_zz"},
               {"im_zz", "Im G_zz"},
               {"re_dz_xx", "Re dG_xx/dz"},
               {"im_dz_xx", "Im dG_xx/dz"},
               {"re_dz_zz", "Re dG_zz/dz"},
               {"im_dz_zz", "Im dG_zz/dz"},
               {"re_lateral", "Re dG_xz/dx"},
               {"im_lateral", "Im dG_xz/dx"},
               {"re_xx_short", "Re G_xx, short-distance asymptote"},
               {"im_xx_short", "Im G_xx, short-distance asymptote"},
               {"re_zz_short", "Re G_zz, short-distance asymptote"},
               {"im_zz_short", "Im G_zz, short-distance asymptote"}};
  std::vector<std::pair<double, double>> grid;
  for (double z : cfg.z_values)
    for (double v : cfg.sweep->values()) grid.push_back({z, v});
  const InputsFn inputs = [&](std::size_t i) { return std::vector<double>{grid[i].second, grid[i].first}; };
  t.rows = parallel_rows(grid.size(), cfg.workers, t.columns.size(), inputs, [&](std::size_t i) {
    const auto [z, v] = grid[i];
    const cdouble omega = imaginary ? cdouble(0.0, v) : cdouble(v, 0.0);
    const GreenEval g = imaginary
                            ? green_scatter_iu(cfg.material, z, v, QuadratureOptions{cfg.tolerances.green_iu})
                            : green_scatter_real(cfg.material, z, v, QuadratureOptions{cfg.tolerances.green_real});
    const GreenEval s = short_distance_green_real(eval_eps(cfg.material, omega), z, omega);
    TableRow row;
    row.values = {v, z};
    for (cdouble c : {g.tensor(0, 0), g.tensor(2, 2), g.dz_tensor(0, 0), g.dz_tensor(2, 2),
                      g.lateral, s.tensor(0, 0), s.tensor(2, 2)}) {
      row.values.push_back(c.real());
      row.values.push_back(c.imag());
    }
    return row;
  });
  return t;
}

// --- dynamics ----------------------------------------------------------------

Table run_dynamics(const RunConfig& cfg) {
  const double z = cfg.z_values.front();
  const AtomSpec atom = cfg.atom.build();
  const int N = atom.size();
  const Eigen::MatrixXcd& sigma0 = cfg.dynamics.sigma0;
  if (sigma0.rows() != N) throw ConfigError("dynamics: initial state does not match the atom");

  const ShiftedSpectrum spectrum = solve_spectrum_general(atom, cfg.material, z, cfg.tolerances, cfg.general);

  std::vector<std::pair<int, int>> pairs;
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n)
      if (m == n || sigma0(n, m) != 0.0) pairs.push_back({m, n});
  std::vector<ForceBreakdown> parts(pairs.size());
  {
    std::vector<std::string> failures(pairs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      for (std::size_t i = next++; i < pairs.size(); i = next++) {
        try {
          parts[i] = force_component_general(atom, cfg.material, spectrum, pairs[i].first,
                                             pairs[i].second, z, cfg.tolerances);
        } catch (const std::exception& e) {
          failures[i] = e.what();
        }
      }
    };
    const int threads = std::max(1, std::min<int>(cfg.workers, static_cast<int>(pairs.size())));
    std::vector<std::thread> pool;
    for (int th = 1; th < threads; ++th) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    for (const auto& f : failures)
      if (!f.empty()) throw NumericError("dynamics: force matrix element failed: " + f, kNaN, kNaN);
  }
  ForceTable table;
  for (std::size_t i = 0; i < pairs.size(); ++i) table[pairs[i]] = parts[i];

  double scale = 1.0;
  if (cfg.dynamics.t_in_decay_units) {
    const double gmax = spectrum.widths.maxCoeff();
    if (!(gmax > 0.0))
      throw ConfigError("dynamics: all level widths vanish; give t_max with t_unit: omega_T");
    scale = 1.0 / gmax;
  }
  const double t_max = cfg.dynamics.t_max * scale;
  std::vector<double> grid(cfg.dynamics.points);
  for (int i = 0; i < cfg.dynamics.points; ++i)
    grid[i] = t_max * static_cast<double>(i) / (cfg.dynamics.points - 1);
  grid.back() = t_max;

  const ForceTrajectory traj = force_trajectory(spectrum, table, DensityMatrix{sigma0, 0.0}, grid);

  Table t;
  t.title = "dynamics: time-dependent Casimir-Polder force sum_mn sigma_nm(t) F_mn at fixed z";
  t.notes = material_notes(cfg);
  {
    std::ostringstream s;
    s << "z = " << z << "; forces F lambda_T / (hbar omega_T)";
    for (int m = 0; m < N; ++m) s << "; Gamma_" << m << " = " << spectrum.widths(m);
    t.notes.push_back(s.str());
    for (int m = 1; m < N; ++m) {
      std::ostringstream w;
      w << "shifted frequency omega~_" << m << "0 = " << spectrum.omega_tilde(m, 0);
      t.notes.push_back(w.str());
    }
    for (int m = 0; m < N; ++m) {
      auto it = table.find({m, m});
      std::ostringstream f;
      f << "F_" << m << m << " electric: off-resonant " << it->second.el_or.z().real()
        << ", resonant " << it->second.el_r.z().real();
      t.notes.push_back(f.str());
    }
  }
  t.columns.push_back({"t", "time"});
  for (int m = 0; m < N; ++m)
    t.columns.push_back({"p" + std::to_string(m), "population sigma_" + std::to_string(m) + std::to_string(m)});
  std::vector<std::pair<int, int>> coh;
  for (int n = 0; n < N; ++n)
    for (int m = n + 1; m < N; ++m)
      if (sigma0(n, m) != 0.0) coh.push_back({n, m});
  for (auto [n, m] : coh) {
    const std::string tag = std::to_string(n) + std::to_string(m);
    t.columns.push_back({"re_sigma" + tag, "Re sigma_" + tag});
    t.columns.push_back({"im_sigma" + tag, "Im sigma_" + tag});
  }
  t.columns.push_back({"F", "total force, z-component"});
  t.columns.push_back({"F_el_or", "electric off-resonant part"});
  t.columns.push_back({"F_el_r", "electric resonant part"});
  t.columns.push_back({"F_mag_or", "magnetic off-resonant part"});
  t.columns.push_back({"F_mag_r", "magnetic resonant part"});
  t.columns.push_back({"F_x", "total force, x-component"});
  t.columns.push_back({"F_y", "total force, y-component"});

  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    TableRow row;
    const auto& s = traj.states[i].sigma;
    row.values.push_back(traj.times[i]);
    for (int m = 0; m < N; ++m) row.values.push_back(s(m, m).real());
    for (auto [n, m] : coh) {
      row.values.push_back(s(n, m).real());
      row.values.push_back(s(n, m).imag());
    }
    row.values.push_back(traj.totals[i].z());
    row.values.push_back(traj.el_or[i].z());
    row.values.push_back(traj.el_r[i].z());
    row.values.push_back(traj.mag_or[i].z());
    row.values.push_back(traj.mag_r[i].z());
    row.values.push_back(traj.totals[i].x());
    row.values.push_back(traj.totals[i].y());
    if (std::any_of(row.values.begin(), row.values.end(), [](double x) { return !std::isfinite(x); }))
      row.status = "error:nan";
    t.rows.push_back(std::move(row));
  }
  if (traj.max_imag_residue > 1e-10) {
    t.notes.push_back("imaginary residue of the assembled force: " + std::to_string(traj.max_imag_residue));
    for (auto& r : t.rows)
      if (r.status == "ok") r.status = "warn:imaginary_residue";
  }
  return t;
}

Table run_task(const RunConfig& cfg) {
  switch (cfg.task) {
    case Task::shift: return run_shift_sweep(cfg);
    case Task::force: return run_force_sweep(cfg);
    case Task::potential: return run_potential(cfg);
    case Task::dynamics: return run_dynamics(cfg);
    case Task::greens: return run_greens(cfg);
  }
  throw ConfigError("unknown task");
}

}  // namespace cpforce
