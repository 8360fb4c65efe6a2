// Batch front end. Talks to the library only through the C interface.
#include <cpforce/cpforce.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Options {
  std::string config;
  std::string out;
  bool strict = false;
  std::optional<int> workers;
  std::optional<double> tolerance;
};

using ConfigPtr = std::unique_ptr<cpf_config, decltype(&cpf_config_free)>;
using ResultPtr = std::unique_ptr<cpf_result, decltype(&cpf_result_free)>;

int fail(cpf_status s) {
  std::cerr << "cpforce: " << cpf_status_name(s) << ": " << cpf_last_error() << "\n";
  return s == CPF_ERR_CONFIG || s == CPF_ERR_INVALID_ARGUMENT ? kExitConfig : kExitNumeric;
}

int run(const std::string& task, const Options& opt) {
  cpf_config* raw = nullptr;
  if (cpf_status s = cpf_config_load_file(opt.config.c_str(), &raw); s != CPF_OK) return fail(s);
  ConfigPtr cfg(raw, &cpf_config_free);

  // The configuration is validated against its own task, so the two must agree.
  if (task != cpf_config_task(cfg.get())) {
    std::cerr << "cpforce: config: " << opt.config << " describes task '" << cpf_config_task(cfg.get())
              << "', not '" << task << "'\n";
    return kExitConfig;
  }
  if (opt.workers)
    if (cpf_status s = cpf_config_set_workers(cfg.get(), *opt.workers); s != CPF_OK) return fail(s);
  if (opt.tolerance)
    if (cpf_status s = cpf_config_set_tolerance(cfg.get(), *opt.tolerance); s != CPF_OK) return fail(s);
  if (opt.strict) cpf_config_set_strict(cfg.get(), 1);
  if (!opt.out.empty()) cpf_config_set_output(cfg.get(), opt.out.c_str());

  cpf_result* rraw = nullptr;
  if (cpf_status s = cpf_run(cfg.get(), &rraw); s != CPF_OK) return fail(s);
  ResultPtr result(rraw, &cpf_result_free);

  const std::string path = cpf_config_output(cfg.get());
  if (path.empty() || path == "-") {
    std::fputs(cpf_result_text(result.get()), stdout);
  } else {
    std::ofstream f(path, std::ios::binary);
    f << cpf_result_text(result.get());
    if (!f) {
      std::cerr << "cpforce: cannot write " << path << "\n";
      return kExitConfig;
    }
  }
  const int errors = cpf_result_error_rows(result.get());
  const int warnings = cpf_result_warning_rows(result.get());
  if (errors || warnings)
    std::cerr << "cpforce: " << errors << " failed row(s), " << warnings << " warning row(s)\n";
  return cpf_result_exit_code(result.get());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir-Polder forces on atoms near a magnetodielectric half space"};
  app.set_version_flag("--version", std::string(cpf_version()));
  app.require_subcommand(1);

  Options opt;
  const struct {
    const char* name;
    const char* help;
  } tasks[] = {
      {"shift", "self-consistent two-level shift and decay rate sweep"},
      {"force", "two-level resonant and off-resonant force sweep"},
      {"potential", "perturbative potential and force versus distance"},
      {"dynamics", "time-dependent force from the atomic density matrix"},
      {"greens", "raw scattering Green tensor dump"},
  };
  for (const auto& t : tasks) {
    CLI::App* sub = app.add_subcommand(t.name, t.help);
    sub->add_option("--config,-c", opt.config, "YAML configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out,-o", opt.out, "output file (default: config output.path or stdout)");
    sub->add_flag("--strict", opt.strict, "exit with status 4 when a validity warning is raised");
    sub->add_option("--workers,-j", opt.workers, "number of worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--tolerance", opt.tolerance, "relative target for every quadrature")
        ->check(CLI::Range(1e-15, 0.1));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  for (const auto& t : tasks)
    if (app.got_subcommand(t.name)) return run(t.name, opt);
  return kExitConfig;
}
