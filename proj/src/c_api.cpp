#include "coopqed/coopqed.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "coopqed/config.hpp"
#include "coopqed/error.hpp"
#include "coopqed/measures.hpp"
#include "coopqed/runner.hpp"

struct cq_config_t {
  coopqed::RunConfig config;
};

struct cq_model_t {
  coopqed::Model model;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_warnings;

cq_status map_code(coopqed::ErrorCode code) {
  using coopqed::ErrorCode;
  switch (code) {
    case ErrorCode::ConfigParse: return CQ_ERROR_CONFIG;
    case ErrorCode::Validation:
    case ErrorCode::InvalidRange: return CQ_ERROR_VALIDATION;
    case ErrorCode::StepTooLarge:
    case ErrorCode::NormDrift: return CQ_ERROR_INTEGRATION;
    case ErrorCode::Io: return CQ_ERROR_IO;
    case ErrorCode::DegenerateSpectrum: return CQ_ERROR_DEGENERATE;
    case ErrorCode::NoPlateau: return CQ_ERROR_NO_PLATEAU;
    case ErrorCode::InvalidArgument:
    case ErrorCode::ClusterMismatch:
    case ErrorCode::FrameError:
    case ErrorCode::BadSubsystem: return CQ_ERROR_INVALID_ARGUMENT;
  }
  return CQ_ERROR_INTERNAL;
}

template <typename F>
cq_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return CQ_OK;
  } catch (const coopqed::Error& e) {
    last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return CQ_ERROR_INTERNAL;
}

cq_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return CQ_ERROR_INVALID_ARGUMENT;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

coopqed::SystemParams to_params(const cq_params& p) {
  coopqed::SystemParams out;
  out.omega_c = p.omega_c;
  out.omega_l = p.omega_l;
  out.omega_r = p.omega_r;
  out.eta_l = p.eta_l;
  out.eta_r = p.eta_r;
  out.epsilon_d = p.epsilon_d;
  out.omega_d = p.omega_d;
  return out;
}

cq_delay to_delay(const coopqed::Detection& d) {
  cq_delay out{};
  if (d.result) {
    out.found = 1;
    out.tau_d = d.result->tau_d;
    out.saturated_value = d.result->saturated_value;
    out.plateau_level = d.result->plateau_level;
  }
  return out;
}

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::optional<std::filesystem::path> maybe_path(const char* p) {
  if (!p) return std::nullopt;
  return std::filesystem::path(p);
}

}  // namespace

extern "C" {

const char* cq_version(void) {
  static const std::string v = coopqed::version();
  return v.c_str();
}

const char* cq_status_name(cq_status status) {
  switch (status) {
    case CQ_OK: return "ok";
    case CQ_ERROR_CONFIG: return "config error";
    case CQ_ERROR_VALIDATION: return "validation error";
    case CQ_ERROR_INTEGRATION: return "integration error";
    case CQ_ERROR_IO: return "i/o error";
    case CQ_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case CQ_ERROR_DEGENERATE: return "degenerate spectrum";
    case CQ_ERROR_NO_PLATEAU: return "no plateau";
    case CQ_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cq_last_error(void) { return last_error.c_str(); }

const char* cq_last_warnings(void) { return last_warnings.c_str(); }

void cq_string_free(char* text) { std::free(text); }

cq_status cq_config_load_file(const char* path, cq_config* out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new cq_config_t{coopqed::load_config(path)}; });
}

cq_status cq_config_parse(const char* text, cq_config* out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new cq_config_t{coopqed::parse_config(text)}; });
}

void cq_config_free(cq_config config) { delete config; }

cq_status cq_config_params(cq_config config, cq_params* out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  const auto& p = config->config.params;
  *out = cq_params{p.omega_c, p.omega_l, p.omega_r, p.eta_l, p.eta_r, p.epsilon_d, p.omega_d};
  last_error.clear();
  return CQ_OK;
}

cq_status cq_config_text(cq_config config, char** text_out) {
  if (!config) return null_argument("config");
  if (!text_out) return null_argument("text_out");
  return guarded([&] { *text_out = duplicate(coopqed::to_config_text(config->config)); });
}

cq_status cq_describe(cq_config config, char** text_out) {
  if (!config) return null_argument("config");
  if (!text_out) return null_argument("text_out");
  *text_out = nullptr;
  return guarded([&] { *text_out = duplicate(coopqed::describe(config->config)); });
}

cq_status cq_run(cq_config config, const char* out_dir, cq_run_summary* summary) {
  if (!config) return null_argument("config");
  last_warnings.clear();
  return guarded([&] {
    const auto s = coopqed::run(config->config, coopqed::resolve_output_dir(maybe_path(out_dir)));
    last_warnings = join(s.warnings);
    if (summary) {
      *summary = cq_run_summary{};
      summary->samples = s.samples;
      summary->c2 = to_delay(s.c2);
      summary->c3 = to_delay(s.c3);
      summary->async = to_delay(s.async);
      summary->a_bar_found = s.a_bar ? 1 : 0;
      summary->a_bar = s.a_bar.value_or(0.0);
      summary->clamp_count = s.clamp_count;
      summary->warning_count = s.warnings.size();
    }
  });
}

cq_status cq_sweep(cq_config config, const char* out_dir, int jobs, cq_sweep_summary* summary) {
  if (!config) return null_argument("config");
  last_warnings.clear();
  return guarded([&] {
    const auto s = coopqed::run_sweep(config->config, coopqed::resolve_output_dir(maybe_path(out_dir)),
                                      jobs > 0 ? static_cast<unsigned>(jobs) : 0u);
    last_warnings = join(s.warnings);
    if (summary) {
      summary->points = s.result.points.size();
      summary->converged = 0;
      for (const auto& p : s.result.points) summary->converged += p.converged ? 1 : 0;
    }
  });
}

cq_status cq_validate(const cq_params* params, char** report_out) {
  if (!params) return null_argument("params");
  cq_status status = CQ_OK;
  const cq_status call = guarded([&] {
    const auto report = coopqed::validate(to_params(*params));
    if (report_out) *report_out = duplicate(join(report.violations));
    if (!report.ok()) {
      last_error = report.violations.front();
      status = CQ_ERROR_VALIDATION;
    }
  });
  if (call != CQ_OK) return call;
  return status;
}

cq_status cq_model_create(const cq_params* params, int include_cavity_offset, cq_model* out) {
  if (!params) return null_argument("params");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const auto p = to_params(*params);
    const auto report = coopqed::validate(p);
    if (!report.ok()) throw coopqed::Error(coopqed::ErrorCode::Validation, report.violations.front());
    *out = new cq_model_t{coopqed::build_model(p, include_cavity_offset != 0)};
  });
}

void cq_model_free(cq_model model) { delete model; }

cq_status cq_model_cluster(cq_model model, int n, cq_cluster* out) {
  if (!model) return null_argument("model");
  if (!out) return null_argument("out");
  return guarded([&] {
    const coopqed::DressedCluster c =
        n == 0 ? model->model.cluster0 : n == 1 ? model->model.cluster1 : coopqed::solve_cluster(model->model.params, n);
    out->n = c.n;
    for (int k = 0; k < 3; ++k) {
      out->energies[k] = c.energies[k];
      out->norms[k] = c.norms[k];
      out->null_space_fallback[k] = c.null_space_fallback[k] ? 1 : 0;
      for (int l = 0; l < 3; ++l) out->coeffs[3 * l + k] = c.coeffs(l, k);
    }
  });
}

cq_status cq_model_couplings(cq_model model, double* lambda, double* zeta) {
  if (!model) return null_argument("model");
  const auto& c = model->model.couplings;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (lambda) lambda[3 * a + b] = c.lambda(a, b);
      if (zeta) zeta[3 * a + b] = c.zeta(a, b);
    }
  }
  last_error.clear();
  return CQ_OK;
}

cq_status cq_model_evolve(cq_model model, const cq_complex initial[6], double t_max, double dt, cq_complex* states,
                          size_t capacity, size_t* samples) {
  if (!model) return null_argument("model");
  if (!initial) return null_argument("initial");
  if (!samples) return null_argument("samples");
  return guarded([&] {
    coopqed::EvolveOptions opts;
    opts.t_max = t_max;
    opts.dt = dt;
    if (!(dt > 0.0) || !(t_max >= 0.0)) {
      throw coopqed::Error(coopqed::ErrorCode::InvalidArgument, "need dt > 0 and t_max >= 0");
    }
    const auto needed = static_cast<size_t>(std::floor(t_max / dt + 1e-9)) + 1;
    *samples = needed;
    if (!states || capacity < needed) {
      throw coopqed::Error(coopqed::ErrorCode::InvalidArgument,
                           "state buffer holds " + std::to_string(capacity) + " samples, need " +
                               std::to_string(needed));
    }
    coopqed::BareState init;
    for (int i = 0; i < 6; ++i) init.gamma[static_cast<std::size_t>(i)] = {initial[i].re, initial[i].im};
    const auto traj = coopqed::evolve(model->model, init, opts);
    for (size_t s = 0; s < traj.states.size(); ++s) {
      for (size_t i = 0; i < 6; ++i) {
        states[6 * s + i] = cq_complex{traj.states[s].gamma[i].real(), traj.states[s].gamma[i].imag()};
      }
    }
  });
}

cq_status cq_measures_eval(const cq_complex gamma[6], cq_measures* out) {
  if (!gamma) return null_argument("gamma");
  if (!out) return null_argument("out");
  return guarded([&] {
    coopqed::BareState s;
    for (int i = 0; i < 6; ++i) s.gamma[static_cast<std::size_t>(i)] = {gamma[i].re, gamma[i].im};
    const auto m = coopqed::evaluate_measures(s);
    *out = cq_measures{m.c2, m.c3_literal, m.c3_residual, m.async};
  });
}

}  // extern "C"
