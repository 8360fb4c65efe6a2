#pragma once

#include <string>
#include <vector>

#include "cpforce/config.hpp"

namespace cpforce {

struct Column {
  std::string name;
  std::string description;
};

// One output row. `status` is "ok", "warn:<reason>" or "error:<kind>"; rows
// that failed carry NaN values.
struct TableRow {
  std::vector<double> values;
  std::string status = "ok";
  std::string message;
};

struct Table {
  std::string title;
  std::vector<std::string> notes;
  std::vector<Column> columns;
  std::vector<TableRow> rows;

  // Comma-separated text with a '#'-commented header. Identical tables render
  // to identical bytes.
  std::string render(int precision = 10) const;
  int column(const std::string& name) const;  // -1 if absent
  int error_rows() const;
  int warning_rows() const;
};

Table run_shift_sweep(const RunConfig& cfg);
Table run_force_sweep(const RunConfig& cfg);
Table run_potential(const RunConfig& cfg);
Table run_dynamics(const RunConfig& cfg);
Table run_greens(const RunConfig& cfg);

// Dispatches on cfg.task.
Table run_task(const RunConfig& cfg);

// Process exit status for a finished table: 0 ok, 3 numeric failure in some
// row, 4 validity warning in strict mode.
int table_exit_code(const Table& table, bool strict);

}  // namespace cpforce
