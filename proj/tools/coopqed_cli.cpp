// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "coopqed/coopqed.h"

namespace {

struct ConfigDeleter {
  void operator()(cq_config c) const { cq_config_free(c); }
};
using ConfigPtr = std::unique_ptr<cq_config_t, ConfigDeleter>;

int report(cq_status status) {
  std::fprintf(stderr, "coopqed: %s: %s\n", cq_status_name(status), cq_last_error());
  switch (status) {
    case CQ_ERROR_CONFIG: return 1;
    case CQ_ERROR_VALIDATION: return 2;
    case CQ_ERROR_INTEGRATION: return 3;
    default: return 4;
  }
}

void print_warnings() {
  const std::string warnings = cq_last_warnings();
  std::size_t start = 0;
  while (start < warnings.size()) {
    const std::size_t end = warnings.find('\n', start);
    std::fprintf(stderr, "warning: %s\n", warnings.substr(start, end - start).c_str());
    if (end == std::string::npos) break;
    start = end + 1;
  }
}

int load(const std::string& path, ConfigPtr& out) {
  cq_config raw = nullptr;
  const cq_status s = cq_config_load_file(path.c_str(), &raw);
  if (s != CQ_OK) return report(s);
  out.reset(raw);
  return 0;
}

void print_delay(const char* name, const cq_delay& d) {
  if (d.found) {
    std::printf("%s: tau_D = %.6g s, saturated = %.6g\n", name, d.tau_d, d.saturated_value);
  } else {
    std::printf("%s: no plateau\n", name);
  }
}

int cmd_describe(const std::string& path) {
  ConfigPtr cfg;
  if (int rc = load(path, cfg)) return rc;
  char* text = nullptr;
  const cq_status s = cq_describe(cfg.get(), &text);
  if (s != CQ_OK) return report(s);
  std::fputs(text, stdout);
  cq_string_free(text);
  return 0;
}

int cmd_run(const std::string& path, const std::string& out) {
  ConfigPtr cfg;
  if (int rc = load(path, cfg)) return rc;
  cq_run_summary summary{};
  const cq_status s = cq_run(cfg.get(), out.empty() ? nullptr : out.c_str(), &summary);
  if (s != CQ_OK) return report(s);
  print_warnings();
  std::printf("samples: %zu\n", summary.samples);
  print_delay("C2", summary.c2);
  print_delay("C3", summary.c3);
  print_delay("A", summary.async);
  if (summary.a_bar_found) std::printf("A_bar = %.6g\n", summary.a_bar);
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& out, int jobs) {
  ConfigPtr cfg;
  if (int rc = load(path, cfg)) return rc;
  cq_sweep_summary summary{};
  const cq_status s = cq_sweep(cfg.get(), out.empty() ? nullptr : out.c_str(), jobs, &summary);
  if (s != CQ_OK) return report(s);
  print_warnings();
  std::printf("points: %zu, converged: %zu\n", summary.points, summary.converged);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven two-qubit cavity simulator: dressed-state dynamics and cooperativity measures"};
  app.set_version_flag("--version", std::string(cq_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = 0;

  auto* run = app.add_subcommand("run", "Evolve one configuration and write CSV and summary files");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--out", out_dir, "Output directory (default: $COOPQED_OUTPUT_DIR or ./out)");

  auto* describe = app.add_subcommand("describe", "Print derived quantities without integrating");
  describe->add_option("config", config_path, "Config file")->required();

  auto* sweep = app.add_subcommand("sweep", "Run the [sweep] section of a config");
  sweep->add_option("config", config_path, "Config file")->required();
  sweep->add_option("--out", out_dir, "Output directory (default: $COOPQED_OUTPUT_DIR or ./out)");
  sweep->add_option("--jobs", jobs, "Parallel points (default: value from the config)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (*run) return cmd_run(config_path, out_dir);
  if (*describe) return cmd_describe(config_path);
  if (*sweep) return cmd_sweep(config_path, out_dir, jobs);
  return 0;
}
