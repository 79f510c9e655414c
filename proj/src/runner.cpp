#include "coopqed/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>

#include "json.hpp"

#include "coopqed/error.hpp"
#include "coopqed/format.hpp"

namespace coopqed {

using ordered_json = nlohmann::ordered_json;

std::string version() { return COOPQED_VERSION_STRING; }

std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& explicit_dir) {
  if (explicit_dir && !explicit_dir->empty()) return *explicit_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "out";
}

void check_config(const RunConfig& config) {
  const ValidationReport report = validate(config.params);
  std::vector<std::string> problems = report.violations;
  const double norm = config.initial.norm_squared();
  if (!(std::abs(norm - 1.0) <= config.pipeline.evolve.norm_tolerance)) {
    problems.push_back("initial state is not normalised: sum |gamma|^2 = " + format_double(norm));
  }
  if (problems.empty()) return;
  std::string msg = "validation failed:";
  for (const auto& p : problems) msg += "\n  - " + p;
  throw Error(ErrorCode::Validation, msg);
}

namespace {

std::string ghz(double angular_value) { return format_double(cyclic(angular_value, FrequencyUnit::GHz)); }
std::string mhz(double angular_value) { return format_double(cyclic(angular_value, FrequencyUnit::MHz)); }

void describe_cluster(std::ostringstream& out, const DressedCluster& c) {
  out << "cluster n = " << c.n << " (basis |e," << c.n << ",g>, |g," << c.n + 1 << ",g>, |g," << c.n << ",e>)\n";
  for (int k = 0; k < 3; ++k) {
    out << "  E_" << k + 1 << "^(" << c.n << ") = " << format_double(c.energies[k]) << " rad/s  ("
        << ghz(c.energies[k]) << " GHz)" << (c.null_space_fallback[k] ? "  [null-space column]" : "") << '\n';
  }
  static const char* const rows[3] = {"L", "C", "R"};
  for (int l = 0; l < 3; ++l) {
    out << "  alpha_" << rows[l] << " =";
    for (int k = 0; k < 3; ++k) out << ' ' << format_double(c.coeffs(l, k));
    out << '\n';
  }
}

ordered_json detection_json(const Detection& d) {
  ordered_json j;
  if (d.result) {
    j["tau_D"] = d.result->tau_d;
    j["saturated_value"] = d.result->saturated_value;
    j["plateau_level"] = d.result->plateau_level;
    j["window_s"] = d.result->detection.window;
    j["band"] = d.result->detection.band_frac;
  } else {
    j["no_plateau"] = d.failure;
  }
  return j;
}

ordered_json summary_json(const RunConfig& config, const Model& model, const RunSummary& s) {
  ordered_json j;
  j["software"] = {{"name", "coopqed"}, {"version", version()}};
  j["config"] = to_config_text(config);
  ordered_json derived;
  derived["Delta"] = model.cluster0.detunings.delta;
  derived["delta_0"] = model.cluster0.detunings.delta_n;
  derived["delta_1"] = model.cluster1.detunings.delta_n;
  derived["energies_0"] = model.cluster0.energies;
  derived["energies_1"] = model.cluster1.energies;
  derived["cluster_offset"] = model.couplings.cluster_offset;
  j["derived_rad_per_s"] = derived;
  j["integration"] = {{"samples", s.samples}, {"substeps_per_sample", s.substeps_per_sample}};
  ordered_json delays = ordered_json::object();
  if (config.detect.c2) delays["C2"] = detection_json(s.c2);
  if (config.detect.c3) delays["C3"] = detection_json(s.c3);
  if (config.detect.async) delays["A"] = detection_json(s.async);
  j["delays"] = delays;
  j["C3_variant"] = config.pipeline.c3_variant == C3Variant::Residual ? "residual" : "literal";
  j["A_bar"] = s.a_bar ? ordered_json(*s.a_bar) : ordered_json(nullptr);
  j["clamp_count"] = s.clamp_count;
  j["warnings"] = s.warnings;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::Io, "cannot create output directory " + dir.string());
  }
}

RunSummary summarize(const RunConfig& config, const Model& model, const PipelineResult& r) {
  RunSummary s;
  s.samples = r.trajectory.times.size();
  s.substeps_per_sample = substeps_per_sample(model, config.pipeline.evolve);
  s.c2 = r.c2;
  s.c3 = r.c3;
  s.async = r.async;
  s.a_bar = r.a_bar;
  s.clamp_count = r.series.clamp_count;
  auto warn = [&](bool selected, const char* name, const Detection& d) {
    if (selected && !d.result) s.warnings.push_back(std::string("no plateau for ") + name + ": " + d.failure);
  };
  warn(config.detect.c2, "C2", r.c2);
  warn(config.detect.c3, "C3", r.c3);
  warn(config.detect.async, "A", r.async);
  return s;
}

void write_run_outputs(const RunConfig& config, const Model& model, const PipelineResult& r, const RunSummary& s,
                       const std::filesystem::path& dir) {
  ensure_dir(dir);
  write_trajectory_csv(dir / "trajectory.csv", r.trajectory, config.output_stride);
  write_measures_csv(dir / "measures.csv", r.series, config.output_stride);
  write_text(dir / "summary.json", summary_json(config, model, s).dump(2) + "\n");
}

}  // namespace

std::string describe(const RunConfig& config) {
  check_config(config);
  const Model model = build_model(config.params, config.pipeline.evolve.include_cavity_offset);
  const ValidationReport report = validate(config.params);
  std::ostringstream out;
  out << "coopqed " << version() << " describe\n";
  out << "Delta = " << format_double(model.cluster0.detunings.delta) << " rad/s  ("
      << ghz(model.cluster0.detunings.delta) << " GHz)\n";
  out << "delta_0 = " << format_double(model.cluster0.detunings.delta_n) << " rad/s  ("
      << ghz(model.cluster0.detunings.delta_n) << " GHz)\n";
  out << "delta_1 = " << format_double(model.cluster1.detunings.delta_n) << " rad/s  ("
      << ghz(model.cluster1.detunings.delta_n) << " GHz)\n";
  out << "discriminant (delta_n = 0) = " << format_double(report.resonant_discriminant) << " ("
      << (report.discriminant_negative() ? "negative: three distinct real roots" : "non-negative") << ")\n";
  for (int n = 0; n < 2; ++n) {
    const CubicForm cubic = cubic_form(detunings(config.params, n), config.params);
    out << "cubic n = " << n << ": p = " << format_double(cubic.p) << ", q = " << format_double(cubic.q)
        << ", D = " << format_double(cubic.discriminant) << '\n';
  }
  describe_cluster(out, model.cluster0);
  describe_cluster(out, model.cluster1);
  out << "cavity offset in zeta: "
      << (config.pipeline.evolve.include_cavity_offset ? "included (omega_c)" : "omitted (literal)") << '\n';
  out << "Lambda (rows j of n = 0, cols k of n = 1):\n";
  for (int j = 0; j < 3; ++j) {
    out << " ";
    for (int k = 0; k < 3; ++k) out << ' ' << format_double(model.couplings.lambda(j, k));
    out << '\n';
  }
  out << "zeta/2pi in MHz (rows k of n = 1, cols j of n = 0):\n";
  for (int k = 0; k < 3; ++k) {
    out << " ";
    for (int j = 0; j < 3; ++j) out << ' ' << mhz(model.couplings.zeta(k, j));
    out << '\n';
  }
  const EvolveOptions& ev = config.pipeline.evolve;
  const long long sub = substeps_per_sample(model, ev);
  const long long samples = static_cast<long long>(std::floor(ev.t_max / ev.dt + 1e-9)) + 1;
  out << "samples = " << samples << ", substeps per sample = " << sub
      << ", internal step = " << format_double(ev.dt / static_cast<double>(sub)) << " s"
      << ", estimated RK4 steps = " << (samples - 1) * sub << '\n';
  return out.str();
}

RunSummary run(const RunConfig& config, const std::filesystem::path& out_dir) {
  check_config(config);
  const Model model = build_model(config.params, config.pipeline.evolve.include_cavity_offset);
  const PipelineResult r = run_pipeline(model, config.initial, config.pipeline);
  RunSummary s = summarize(config, model, r);
  write_run_outputs(config, model, r, s, out_dir);
  return s;
}

RunConfig sweep_point_config(const RunConfig& config, double axis_value) {
  RunConfig point = config;
  point.params = sweep_point_params(config.params, axis_value);
  point.sweep.reset();
  return point;
}

SweepRunSummary run_sweep(const RunConfig& config, const std::filesystem::path& out_dir, unsigned jobs) {
  if (!config.sweep) throw Error(ErrorCode::Validation, "config has no [sweep] section");
  const SweepSpec& spec = *config.sweep;
  ensure_dir(out_dir);

  SweepRequest request;
  request.base = config.params;
  request.axis = spec.axis();
  request.initial = config.initial;
  request.pipeline = config.pipeline;
  request.include_cavity_offset = config.pipeline.evolve.include_cavity_offset;
  request.observable = spec.observable;
  request.jobs = jobs > 0 ? jobs : spec.jobs;

  auto point_dir = [&](std::size_t i) {
    char name[32];
    std::snprintf(name, sizeof name, "point_%03zu", i);
    return out_dir / name;
  };
  for (std::size_t i = 0; i < request.axis.size(); ++i) {
    ensure_dir(point_dir(i));
    write_text(point_dir(i) / "point.cfg", to_config_text(sweep_point_config(config, request.axis[i])));
  }

  std::mutex io_error_mutex;
  std::string io_error;
  request.on_point = [&](std::size_t i, const SweepPoint& point, const PipelineResult& r) {
    try {
      const RunConfig pc = sweep_point_config(config, point.axis_value);
      const Model model = build_model(pc.params, pc.pipeline.evolve.include_cavity_offset);
      write_run_outputs(pc, model, r, summarize(pc, model, r), point_dir(i));
    } catch (const std::exception& e) {
      std::lock_guard lock(io_error_mutex);
      if (io_error.empty()) io_error = e.what();
    }
  };

  SweepRunSummary out;
  out.result = sweep(request);
  if (!io_error.empty()) throw Error(ErrorCode::Io, io_error);

  std::ostringstream csv;
  csv << "eta_over_Omega,tau_D,A_bar,converged\n";
  for (std::size_t i = 0; i < out.result.points.size(); ++i) {
    const SweepPoint& p = out.result.points[i];
    const double nan = std::nan("");
    csv << format_double(p.axis_value) << ',' << format_double(p.tau_d.value_or(nan)) << ','
        << format_double(p.a_bar.value_or(nan)) << ',' << (p.converged ? 1 : 0) << '\n';
    if (!p.converged) {
      out.warnings.push_back("point " + std::to_string(i) + " (eta/Omega_L = " + format_double(p.axis_value) +
                             ") not converged: " + p.failure);
      write_text(point_dir(i) / "failure.txt", p.failure + "\n");
    }
  }
  write_text(out_dir / "sweep.csv", csv.str());
  return out;
}

}  // namespace coopqed
