#include <cmath>
#include <cstring>
#include <string>

#include "cpforce/cpforce.h"
#include "doctest.h"

namespace {

const char* kShift = R"(
task: shift
material: {omega_P: 0.75, gamma: 0.01}
atom: {coupling_g: 1.0e-7, omega10: 1.0}
geometry: {z: 0.0075}
sweep: {variable: omega10, min: 1.0, max: 1.3, points: 7}
)";

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("configuration handles") {
  cpf_config* cfg = nullptr;
  REQUIRE(cpf_config_load_string(kShift, &cfg) == CPF_OK);
  CHECK(std::string(cpf_config_task(cfg)) == "shift");
  CHECK(std::string(cpf_config_output(cfg)).empty());
  CHECK(cpf_config_set_workers(cfg, 2) == CPF_OK);
  CHECK(cpf_config_set_workers(cfg, 0) == CPF_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(cpf_last_error()) > 0);
  CHECK(cpf_config_set_tolerance(cfg, 1e-9) == CPF_OK);
  CHECK(cpf_config_set_tolerance(cfg, -1.0) == CPF_ERR_INVALID_ARGUMENT);
  CHECK(cpf_config_set_strict(cfg, 1) == CPF_OK);
  CHECK(cpf_config_set_output(cfg, "out.csv") == CPF_OK);
  CHECK(std::string(cpf_config_output(cfg)) == "out.csv");
  cpf_config_free(cfg);
  cpf_config_free(nullptr);
}

TEST_CASE("configuration failures map to status codes") {
  cpf_config* cfg = reinterpret_cast<cpf_config*>(0x1);
  CHECK(cpf_config_load_string("task: shift\nbogus: 1\n", &cfg) == CPF_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(cpf_last_error()).find("bogus") != std::string::npos);
  CHECK(cpf_config_load_file("/nonexistent.yaml", &cfg) == CPF_ERR_CONFIG);
  CHECK(cpf_config_load_string(nullptr, &cfg) == CPF_ERR_INVALID_ARGUMENT);
  CHECK(cpf_run(nullptr, nullptr) == CPF_ERR_INVALID_ARGUMENT);
  CHECK(std::string(cpf_status_name(CPF_ERR_DEGENERATE)) == "degenerate");
  CHECK(std::string(cpf_version()) == "0.1.0");
}

TEST_CASE("run and inspect a result") {
  cpf_config* cfg = nullptr;
  REQUIRE(cpf_config_load_string(kShift, &cfg) == CPF_OK);
  cpf_result* res = nullptr;
  REQUIRE(cpf_run(cfg, &res) == CPF_OK);
  CHECK(std::strlen(cpf_last_error()) == 0);
  CHECK(cpf_result_rows(res) == 7);
  const size_t ncol = cpf_result_columns(res);
  REQUIRE(ncol > 3);
  CHECK(std::string(cpf_result_column_name(res, 0)) == "omega10");
  CHECK(std::string(cpf_result_column_name(res, ncol)).empty());
  CHECK(cpf_result_value(res, 0, 0) == 1.0);
  CHECK(std::isnan(cpf_result_value(res, 99, 0)));
  CHECK(std::string(cpf_result_row_status(res, 6)) == "ok");
  CHECK(cpf_result_error_rows(res) == 0);
  CHECK(cpf_result_exit_code(res) == 0);
  CHECK(std::string(cpf_result_text(res)).find("omega10,z,") != std::string::npos);
  cpf_result_free(res);
  cpf_config_free(cfg);
}

TEST_CASE("direct two-level shift") {
  cpf_two_level in{0.75, 0.01, 1e-7, 1.2, 0.0, 0.0075};
  cpf_shift_result out{};
  REQUIRE(cpf_two_level_shift(&in, &out) == CPF_OK);
  CHECK(out.omega_tilde == doctest::Approx(1.2 + out.delta_omega).epsilon(1e-15));
  CHECK(out.gamma > 0.0);
  CHECK(out.iterations > 0);
  in.z = -1.0;
  CHECK(cpf_two_level_shift(&in, &out) == CPF_ERR_DOMAIN);
  in.z = 0.0075;
  in.omega_P = -1.0;
  CHECK(cpf_two_level_shift(&in, &out) == CPF_ERR_DOMAIN);
}

}
