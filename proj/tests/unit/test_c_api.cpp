#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "coopqed/coopqed.h"
#include "doctest.h"

namespace {

const char* const kConfig = R"([params]
omega_c = 5.32 GHz
omega_l = 5.1 GHz
omega_r = 6.1 GHz
eta_l = 300 MHz
eta_r = 300 MHz
epsilon_d = 20 MHz
omega_d = 5.3 GHz
[time]
t_max = 50 ns
dt = 0.5 ns
)";

cq_params symmetric() {
  const double two_pi = 6.283185307179586;
  return cq_params{two_pi * 5.32e9, two_pi * 5.1e9, two_pi * 5.1e9, two_pi * 3e8,
                   two_pi * 3e8,    two_pi * 2e5,   two_pi * 5.3e9};
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(cq_version()) > 0);
  CHECK(std::string(cq_status_name(CQ_OK)) == "ok");
  CHECK(std::string(cq_status_name(CQ_ERROR_VALIDATION)) != "ok");
}

TEST_CASE("config lifecycle") {
  cq_config cfg = nullptr;
  REQUIRE(cq_config_parse(kConfig, &cfg) == CQ_OK);
  cq_params p{};
  CHECK(cq_config_params(cfg, &p) == CQ_OK);
  CHECK(p.omega_r == doctest::Approx(6.283185307179586 * 6.1e9));
  char* text = nullptr;
  CHECK(cq_config_text(cfg, &text) == CQ_OK);
  REQUIRE(text);
  cq_config again = nullptr;
  CHECK(cq_config_parse(text, &again) == CQ_OK);
  cq_string_free(text);
  cq_config_free(again);

  char* report = nullptr;
  CHECK(cq_describe(cfg, &report) == CQ_OK);
  CHECK(std::string(report).find("Lambda") != std::string::npos);
  cq_string_free(report);
  cq_config_free(cfg);

  cq_config bad = nullptr;
  CHECK(cq_config_parse("[nope]\n", &bad) == CQ_ERROR_CONFIG);
  CHECK(bad == nullptr);
  CHECK(std::strlen(cq_last_error()) > 0);
  CHECK(cq_config_load_file("/nonexistent.cfg", &bad) == CQ_ERROR_CONFIG);
  CHECK(cq_config_parse(nullptr, &bad) == CQ_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("validation through the C interface") {
  cq_params p = symmetric();
  char* report = nullptr;
  CHECK(cq_validate(&p, &report) == CQ_OK);
  cq_string_free(report);
  p.eta_l = 6.0 * p.eta_r;
  CHECK(cq_validate(&p, &report) == CQ_ERROR_VALIDATION);
  REQUIRE(report);
  CHECK(std::string(report).find("ratio") != std::string::npos);
  cq_string_free(report);

  cq_model m = nullptr;
  CHECK(cq_model_create(&p, 1, &m) == CQ_ERROR_VALIDATION);
  CHECK(m == nullptr);
}

TEST_CASE("model access and evolution") {
  const cq_params p = symmetric();
  cq_model m = nullptr;
  REQUIRE(cq_model_create(&p, 1, &m) == CQ_OK);
  cq_cluster c{};
  REQUIRE(cq_model_cluster(m, 0, &c) == CQ_OK);
  CHECK(c.n == 0);
  CHECK(c.energies[0] < c.energies[1]);
  CHECK(c.energies[1] < c.energies[2]);
  CHECK(c.null_space_fallback[1] == 1);
  double norm = 0.0;
  for (int l = 0; l < 3; ++l) norm += c.coeffs[3 * l + 2] * c.coeffs[3 * l + 2];
  CHECK(norm == doctest::Approx(1.0));
  CHECK(cq_model_cluster(m, 2, &c) == CQ_OK);
  CHECK(c.n == 2);
  CHECK(cq_model_cluster(m, -1, &c) == CQ_ERROR_INVALID_ARGUMENT);

  double lambda[9], zeta[9];
  CHECK(cq_model_couplings(m, lambda, zeta) == CQ_OK);
  CHECK(lambda[3 * 1 + 1] == doctest::Approx(1.0));
  CHECK(zeta[3 * 1 + 1] / 6.283185307179586 == doctest::Approx(-20e6));
  CHECK(cq_model_couplings(m, nullptr, zeta) == CQ_OK);

  const cq_complex init[6] = {{0, 0}, {std::sqrt(0.9), 0}, {0, 0}, {0, 0}, {std::sqrt(0.1), 0}, {0, 0}};
  size_t samples = 0;
  CHECK(cq_model_evolve(m, init, 10e-9, 1e-9, nullptr, 0, &samples) == CQ_ERROR_INVALID_ARGUMENT);
  CHECK(samples == 11);
  std::vector<cq_complex> states(samples * 6);
  REQUIRE(cq_model_evolve(m, init, 10e-9, 1e-9, states.data(), samples, &samples) == CQ_OK);
  for (size_t i = 0; i < samples; ++i) {
    double n = 0.0;
    for (int l = 0; l < 6; ++l) n += states[6 * i + l].re * states[6 * i + l].re + states[6 * i + l].im * states[6 * i + l].im;
    CHECK(n == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(states[1].re == doctest::Approx(std::sqrt(0.9)));

  const cq_complex unnormalised[6] = {{1, 0}, {1, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}};
  CHECK(cq_model_evolve(m, unnormalised, 10e-9, 1e-9, states.data(), samples, &samples) ==
        CQ_ERROR_INVALID_ARGUMENT);
  cq_model_free(m);
  cq_model_free(nullptr);
}

TEST_CASE("measures through the C interface") {
  const double r = 1.0 / std::sqrt(2.0);
  const cq_complex bell[6] = {{0, 0}, {0, 0}, {0, 0}, {r, 0}, {0, 0}, {r, 0}};
  cq_measures out{};
  REQUIRE(cq_measures_eval(bell, &out) == CQ_OK);
  CHECK(out.c2 == doctest::Approx(1.0));
  CHECK(out.c3_literal < 1e-10);
  CHECK(out.async < 1e-15);
  CHECK(cq_measures_eval(nullptr, &out) == CQ_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("run through the C interface") {
  cq_config cfg = nullptr;
  REQUIRE(cq_config_parse(kConfig, &cfg) == CQ_OK);
  cq_run_summary s{};
  const std::string dir = "/tmp/coopqed_test_c_api_run";
  REQUIRE(cq_run(cfg, dir.c_str(), &s) == CQ_OK);
  CHECK(s.samples == 101);
  CHECK((s.warning_count == 0 || std::strlen(cq_last_warnings()) > 0));
  cq_sweep_summary sw{};
  CHECK(cq_sweep(cfg, dir.c_str(), 1, &sw) == CQ_ERROR_VALIDATION);
  cq_config_free(cfg);
}
