#include "cpforce/cpforce.h"

#include <exception>
#include <limits>
#include <string>

#include "cpforce/config.hpp"
#include "cpforce/error.hpp"
#include "cpforce/runner.hpp"

struct cpf_config {
  cpforce::RunConfig cfg;
  std::string task_name;
};

struct cpf_result {
  cpforce::Table table;
  std::string text;
  int exit_code = 0;
};

namespace {

thread_local std::string g_last_error;

cpf_status status_of(cpforce::ErrorKind k) {
  using cpforce::ErrorKind;
  switch (k) {
    case ErrorKind::config: return CPF_ERR_CONFIG;
    case ErrorKind::domain: return CPF_ERR_DOMAIN;
    case ErrorKind::pole: return CPF_ERR_POLE;
    case ErrorKind::numeric: return CPF_ERR_NUMERIC;
    case ErrorKind::convergence: return CPF_ERR_CONVERGENCE;
    case ErrorKind::unphysical: return CPF_ERR_UNPHYSICAL;
    case ErrorKind::not_applicable: return CPF_ERR_NOT_APPLICABLE;
    case ErrorKind::degenerate: return CPF_ERR_DEGENERATE;
    case ErrorKind::validity: return CPF_ERR_VALIDITY;
  }
  return CPF_ERR_INTERNAL;
}

template <class F>
cpf_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return CPF_OK;
  } catch (const cpforce::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CPF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return CPF_ERR_INTERNAL;
  }
}

cpf_status invalid(const char* what) {
  g_last_error = what;
  return CPF_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* cpf_version(void) { return "0.1.0"; }

const char* cpf_last_error(void) { return g_last_error.c_str(); }

const char* cpf_status_name(cpf_status s) {
  switch (s) {
    case CPF_OK: return "ok";
    case CPF_ERR_CONFIG: return "config";
    case CPF_ERR_DOMAIN: return "domain";
    case CPF_ERR_POLE: return "pole";
    case CPF_ERR_NUMERIC: return "numeric";
    case CPF_ERR_CONVERGENCE: return "convergence";
    case CPF_ERR_UNPHYSICAL: return "unphysical";
    case CPF_ERR_NOT_APPLICABLE: return "not_applicable";
    case CPF_ERR_DEGENERATE: return "degenerate";
    case CPF_ERR_VALIDITY: return "validity";
    case CPF_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CPF_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

cpf_status cpf_config_load_file(const char* path, cpf_config** out) {
  if (!path || !out) return invalid("cpf_config_load_file: null argument");
  *out = nullptr;
  return guarded([&] {
    auto* c = new cpf_config{cpforce::load_config(path), {}};
    c->task_name = cpforce::task_name(c->cfg.task);
    *out = c;
  });
}

cpf_status cpf_config_load_string(const char* yaml, cpf_config** out) {
  if (!yaml || !out) return invalid("cpf_config_load_string: null argument");
  *out = nullptr;
  return guarded([&] {
    auto* c = new cpf_config{cpforce::parse_config(yaml), {}};
    c->task_name = cpforce::task_name(c->cfg.task);
    *out = c;
  });
}

void cpf_config_free(cpf_config* config) { delete config; }

cpf_status cpf_config_set_workers(cpf_config* config, int workers) {
  if (!config) return invalid("cpf_config_set_workers: null config");
  if (workers < 1) return invalid("workers must be at least 1");
  config->cfg.workers = workers;
  return CPF_OK;
}

cpf_status cpf_config_set_tolerance(cpf_config* config, double tolerance) {
  if (!config) return invalid("cpf_config_set_tolerance: null config");
  if (!(tolerance > 0.0 && tolerance < 1.0)) return invalid("tolerance must lie in (0, 1)");
  config->cfg.tolerances = cpforce::Tolerances::uniform(tolerance);
  return CPF_OK;
}

cpf_status cpf_config_set_strict(cpf_config* config, int strict) {
  if (!config) return invalid("cpf_config_set_strict: null config");
  config->cfg.strict = strict != 0;
  return CPF_OK;
}

cpf_status cpf_config_set_output(cpf_config* config, const char* path) {
  if (!config || !path) return invalid("cpf_config_set_output: null argument");
  config->cfg.output_path = path;
  return CPF_OK;
}

const char* cpf_config_task(const cpf_config* config) {
  return config ? config->task_name.c_str() : "";
}

const char* cpf_config_output(const cpf_config* config) {
  return config ? config->cfg.output_path.c_str() : "";
}

cpf_status cpf_run(const cpf_config* config, cpf_result** out) {
  if (!config || !out) return invalid("cpf_run: null argument");
  *out = nullptr;
  return guarded([&] {
    auto* r = new cpf_result;
    try {
      r->table = cpforce::run_task(config->cfg);
      r->text = r->table.render(config->cfg.precision);
      r->exit_code = cpforce::table_exit_code(r->table, config->cfg.strict);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

void cpf_result_free(cpf_result* result) { delete result; }

const char* cpf_result_text(const cpf_result* r) { return r ? r->text.c_str() : ""; }

size_t cpf_result_rows(const cpf_result* r) { return r ? r->table.rows.size() : 0; }

size_t cpf_result_columns(const cpf_result* r) { return r ? r->table.columns.size() : 0; }

const char* cpf_result_column_name(const cpf_result* r, size_t column) {
  if (!r || column >= r->table.columns.size()) return "";
  return r->table.columns[column].name.c_str();
}

double cpf_result_value(const cpf_result* r, size_t row, size_t column) {
  if (!r || row >= r->table.rows.size() || column >= r->table.rows[row].values.size())
    return std::numeric_limits<double>::quiet_NaN();
  return r->table.rows[row].values[column];
}

const char* cpf_result_row_status(const cpf_result* r, size_t row) {
  if (!r || row >= r->table.rows.size()) return "";
  return r->table.rows[row].status.c_str();
}

int cpf_result_error_rows(const cpf_result* r) { return r ? r->table.error_rows() : 0; }

int cpf_result_warning_rows(const cpf_result* r) { return r ? r->table.warning_rows() : 0; }

int cpf_result_exit_code(const cpf_result* r) { return r ? r->exit_code : 0; }

cpf_status cpf_two_level_shift(const cpf_two_level* in, cpf_shift_result* out) {
  if (!in || !out) return invalid("cpf_two_level_shift: null argument");
  return guarded([&] {
    const auto model = cpforce::MaterialModel::drude_lorentz_dielectric(in->omega_P, in->gamma);
    const auto atom = cpforce::AtomSpec::two_level(in->coupling_g, in->omega10, in->theta);
    const auto s = cpforce::solve_two_level_shift(atom, model, in->z);
    *out = {s.delta_omega, s.gamma, s.omega_tilde, s.delta_omega_bare,
            s.gamma_bare, s.delta_omega_offres, s.iterations, s.warnings.empty() ? 0 : 1};
  });
}

}  // extern "C"
