#include "coopqed/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "coopqed/error.hpp"
#include "coopqed/format.hpp"

namespace coopqed {

std::vector<double> SweepSpec::axis() const {
  std::vector<double> out;
  if (points <= 0) return out;
  if (points == 1) return {from};
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(points - 1);
    if (spacing == AxisSpacing::Log) {
      out.push_back(std::exp(std::log(from) + u * (std::log(to) - std::log(from))));
    } else {
      out.push_back(from + u * (to - from));
    }
  }
  out.front() = from;
  out.back() = to;
  return out;
}

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorCode::ConfigParse, "config line " + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

double number(const std::string& text, int line) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last || !std::isfinite(value)) {
    fail(line, "not a finite number: '" + text + "'");
  }
  return value;
}

double frequency(const Entry& e) {
  const auto parts = split_ws(e.value);
  if (parts.size() != 2) fail(e.line, "frequency needs '<value> <unit>', got '" + e.value + "'");
  const double v = number(parts[0], e.line);
  const std::string unit = lower(parts[1]);
  if (unit == "rad/s") return v;
  if (unit == "hz") return angular(v, FrequencyUnit::Hz);
  if (unit == "khz") return angular(v, FrequencyUnit::kHz);
  if (unit == "mhz") return angular(v, FrequencyUnit::MHz);
  if (unit == "ghz") return angular(v, FrequencyUnit::GHz);
  fail(e.line, "unknown frequency unit '" + parts[1] + "' (GHz, MHz, kHz, Hz or rad/s)");
}

double duration(const Entry& e) {
  const auto parts = split_ws(e.value);
  if (parts.size() != 2) fail(e.line, "time needs '<value> <unit>', got '" + e.value + "'");
  const double v = number(parts[0], e.line);
  const std::string unit = lower(parts[1]);
  if (unit == "s") return v;
  if (unit == "ms") return v * 1e-3;
  if (unit == "us") return v * 1e-6;
  if (unit == "ns") return v * 1e-9;
  if (unit == "ps") return v * 1e-12;
  fail(e.line, "unknown time unit '" + parts[1] + "' (s, ms, us, ns or ps)");
}

cplx complex_value(const Entry& e) {
  const auto parts = split_ws(e.value);
  if (parts.size() != 2) fail(e.line, "amplitude needs '<re> <im>', got '" + e.value + "'");
  return {number(parts[0], e.line), number(parts[1], e.line)};
}

bool boolean(const Entry& e) {
  const std::string v = lower(e.value);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  fail(e.line, "not a boolean: '" + e.value + "'");
}

long long integer(const Entry& e) {
  long long value = 0;
  const char* first = e.value.data();
  const char* last = e.value.data() + e.value.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last) fail(e.line, "not an integer: '" + e.value + "'");
  return value;
}

const std::map<std::string, std::set<std::string>>& grammar() {
  static const std::map<std::string, std::set<std::string>> g{
      {"params", {"omega_c", "omega_l", "omega_r", "eta_l", "eta_r", "epsilon_d", "omega_d"}},
      {"initial",
       {"preset", "gamma_l0", "gamma_c0", "gamma_r0", "gamma_l1", "gamma_c1", "gamma_r1"}},
      {"time", {"t_max", "dt", "stride", "step"}},
      {"measures", {"c3_variant", "detect", "band", "window_periods", "window", "tail"}},
      {"model", {"include_cavity_offset"}},
      {"sweep", {"variable", "from", "to", "points", "spacing", "jobs", "observable"}},
  };
  return g;
}

const Entry* find(const std::map<std::string, Section>& sections, const std::string& sec, const std::string& key) {
  const auto s = sections.find(sec);
  if (s == sections.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

const Entry& require(const std::map<std::string, Section>& sections, const std::string& sec, const std::string& key) {
  const Entry* e = find(sections, sec, key);
  if (!e) throw Error(ErrorCode::ConfigParse, "config: missing required key [" + sec + "] " + key);
  return *e;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Section> sections;
  std::string current;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      current = lower(trim(line.substr(1, line.size() - 2)));
      if (!grammar().count(current)) fail(line_no, "unknown section [" + current + "]");
      if (sections.count(current)) fail(line_no, "section [" + current + "] appears twice");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    if (current.empty()) fail(line_no, "key outside of a section");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (!grammar().at(current).count(key)) fail(line_no, "unknown key '" + key + "' in [" + current + "]");
    if (value.empty()) fail(line_no, "empty value for '" + key + "'");
    if (sections[current].count(key)) fail(line_no, "duplicate key '" + key + "'");
    sections[current][key] = Entry{value, line_no};
  }

  RunConfig cfg;
  SystemParams& p = cfg.params;
  p.omega_c = frequency(require(sections, "params", "omega_c"));
  p.omega_l = frequency(require(sections, "params", "omega_l"));
  p.omega_r = frequency(require(sections, "params", "omega_r"));
  p.eta_l = frequency(require(sections, "params", "eta_l"));
  p.eta_r = frequency(require(sections, "params", "eta_r"));
  p.epsilon_d = frequency(require(sections, "params", "epsilon_d"));
  p.omega_d = frequency(require(sections, "params", "omega_d"));

  static const char* const gamma_keys[6] = {"gamma_l0", "gamma_c0", "gamma_r0", "gamma_l1", "gamma_c1", "gamma_r1"};
  bool explicit_state = false;
  for (const char* key : gamma_keys) explicit_state = explicit_state || find(sections, "initial", key);
  if (const Entry* preset = find(sections, "initial", "preset")) {
    if (explicit_state) fail(preset->line, "use either a preset or explicit amplitudes, not both");
    const std::string name = lower(preset->value);
    // "paper-default" is the older spelling of the same preset.
    if (name == "cavity-driven" || name == "paper-default") {
      cfg.initial = BareState::cavity_driven();
    } else if (name == "cavity-left-excited") {
      cfg.initial = BareState::cavity_left_excited();
    } else {
      fail(preset->line, "unknown preset '" + preset->value + "' (cavity-driven, cavity-left-excited)");
    }
    cfg.initial_label = name == "paper-default" ? "cavity-driven" : name;
  } else if (explicit_state) {
    for (int i = 0; i < 6; ++i) {
      const Entry* e = find(sections, "initial", gamma_keys[i]);
      cfg.initial.gamma[static_cast<std::size_t>(i)] = e ? complex_value(*e) : cplx{};
    }
    cfg.initial_label = "explicit";
  }

  EvolveOptions& ev = cfg.pipeline.evolve;
  ev.t_max = duration(require(sections, "time", "t_max"));
  ev.dt = duration(require(sections, "time", "dt"));
  if (!(ev.t_max > 0.0)) fail(require(sections, "time", "t_max").line, "t_max must be positive");
  if (!(ev.dt > 0.0)) fail(require(sections, "time", "dt").line, "dt must be positive");
  if (const Entry* e = find(sections, "time", "step")) {
    ev.step = duration(*e);
    if (!(*ev.step > 0.0)) fail(e->line, "step must be positive");
  }
  if (const Entry* e = find(sections, "time", "stride")) {
    const long long stride = integer(*e);
    if (stride < 1) fail(e->line, "stride must be >= 1");
    cfg.output_stride = static_cast<std::size_t>(stride);
  }

  if (const Entry* e = find(sections, "measures", "c3_variant")) {
    const std::string v = lower(e->value);
    if (v == "residual") {
      cfg.pipeline.c3_variant = C3Variant::Residual;
    } else if (v == "literal") {
      cfg.pipeline.c3_variant = C3Variant::Literal;
    } else {
      fail(e->line, "c3_variant must be 'residual' or 'literal'");
    }
  }
  if (const Entry* e = find(sections, "measures", "detect")) {
    cfg.detect = DetectSelection{false, false, false};
    std::string list = e->value;
    std::replace(list.begin(), list.end(), ',', ' ');
    for (const std::string& item : split_ws(list)) {
      const std::string m = lower(item);
      if (m == "c2") {
        cfg.detect.c2 = true;
      } else if (m == "c3") {
        cfg.detect.c3 = true;
      } else if (m == "a") {
        cfg.detect.async = true;
      } else if (m != "none") {
        fail(e->line, "unknown measure '" + item + "' in detect (C2, C3, A)");
      }
    }
  }
  if (const Entry* e = find(sections, "measures", "band")) {
    cfg.pipeline.detector.band_frac = number(e->value, e->line);
    if (!(cfg.pipeline.detector.band_frac > 0.0)) fail(e->line, "band must be positive");
  }
  if (const Entry* e = find(sections, "measures", "tail")) {
    cfg.pipeline.detector.tail_frac = number(e->value, e->line);
    const double t = cfg.pipeline.detector.tail_frac;
    if (!(t > 0.0 && t <= 1.0)) fail(e->line, "tail must be in (0, 1]");
  }
  if (const Entry* e = find(sections, "measures", "window_periods")) {
    cfg.pipeline.window_periods = number(e->value, e->line);
    if (cfg.pipeline.window_periods < 0.0) fail(e->line, "window_periods must be non-negative");
  }
  if (const Entry* e = find(sections, "measures", "window")) {
    cfg.pipeline.detector.window = duration(*e);
    if (cfg.pipeline.detector.window < 0.0) fail(e->line, "window must be non-negative");
  }

  if (const Entry* e = find(sections, "model", "include_cavity_offset")) {
    ev.include_cavity_offset = boolean(*e);
  }

  if (sections.count("sweep")) {
    SweepSpec sw;
    if (const Entry* e = find(sections, "sweep", "variable")) {
      if (lower(e->value) != "eta_over_omega_l") fail(e->line, "only 'eta_over_omega_l' can be swept");
    }
    const Entry& from = require(sections, "sweep", "from");
    const Entry& to = require(sections, "sweep", "to");
    const Entry& points = require(sections, "sweep", "points");
    sw.from = number(from.value, from.line);
    sw.to = number(to.value, to.line);
    const long long n = integer(points);
    if (n < 1 || n > 100000) fail(points.line, "points must be between 1 and 100000");
    sw.points = static_cast<int>(n);
    if (!(sw.from > 0.0)) fail(from.line, "from must be positive");
    if (sw.points > 1 && !(sw.to > sw.from)) fail(to.line, "to must exceed from");
    if (const Entry* e = find(sections, "sweep", "spacing")) {
      const std::string v = lower(e->value);
      if (v == "log") {
        sw.spacing = AxisSpacing::Log;
      } else if (v == "linear") {
        sw.spacing = AxisSpacing::Linear;
      } else {
        fail(e->line, "spacing must be 'log' or 'linear'");
      }
    }
    if (const Entry* e = find(sections, "sweep", "jobs")) {
      const long long j = integer(*e);
      if (j < 1 || j > 1024) fail(e->line, "jobs must be between 1 and 1024");
      sw.jobs = static_cast<unsigned>(j);
    }
    if (const Entry* e = find(sections, "sweep", "observable")) {
      const std::string v = lower(e->value);
      if (v == "delay") {
        sw.observable = SweepObservable::Delay;
      } else if (v == "async") {
        sw.observable = SweepObservable::Async;
      } else {
        fail(e->line, "observable must be 'delay' or 'async'");
      }
    }
    cfg.sweep = sw;
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigParse, "cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream out;
  auto freq = [&](const char* key, double v) { out << key << " = " << format_double(v) << " rad/s\n"; };
  auto secs = [&](const char* key, double v) { out << key << " = " << format_double(v) << " s\n"; };

  out << "[params]\n";
  freq("omega_c", c.params.omega_c);
  freq("omega_l", c.params.omega_l);
  freq("omega_r", c.params.omega_r);
  freq("eta_l", c.params.eta_l);
  freq("eta_r", c.params.eta_r);
  freq("epsilon_d", c.params.epsilon_d);
  freq("omega_d", c.params.omega_d);

  out << "\n[initial]\n";
  if (c.initial_label == "explicit") {
    static const char* const keys[6] = {"gamma_l0", "gamma_c0", "gamma_r0", "gamma_l1", "gamma_c1", "gamma_r1"};
    for (std::size_t i = 0; i < 6; ++i) {
      out << keys[i] << " = " << format_double(c.initial.gamma[i].real()) << ' '
          << format_double(c.initial.gamma[i].imag()) << '\n';
    }
  } else {
    out << "preset = " << c.initial_label << '\n';
  }

  const EvolveOptions& ev = c.pipeline.evolve;
  out << "\n[time]\n";
  secs("t_max", ev.t_max);
  secs("dt", ev.dt);
  if (ev.step) secs("step", *ev.step);
  out << "stride = " << c.output_stride << '\n';

  out << "\n[measures]\n";
  out << "c3_variant = " << (c.pipeline.c3_variant == C3Variant::Residual ? "residual" : "literal") << '\n';
  std::vector<std::string> det;
  if (c.detect.c2) det.emplace_back("C2");
  if (c.detect.c3) det.emplace_back("C3");
  if (c.detect.async) det.emplace_back("A");
  if (det.empty()) det.emplace_back("none");
  out << "detect =";
  for (std::size_t i = 0; i < det.size(); ++i) out << (i ? ", " : " ") << det[i];
  out << '\n';
  out << "band = " << format_double(c.pipeline.detector.band_frac) << '\n';
  out << "tail = " << format_double(c.pipeline.detector.tail_frac) << '\n';
  out << "window_periods = " << format_double(c.pipeline.window_periods) << '\n';
  if (c.pipeline.detector.window > 0.0) secs("window", c.pipeline.detector.window);

  out << "\n[model]\n";
  out << "include_cavity_offset = " << (ev.include_cavity_offset ? "true" : "false") << '\n';

  if (c.sweep) {
    const SweepSpec& s = *c.sweep;
    out << "\n[sweep]\n";
    out << "variable = eta_over_omega_l\n";
    out << "from = " << format_double(s.from) << '\n';
    out << "to = " << format_double(s.to) << '\n';
    out << "points = " << s.points << '\n';
    out << "spacing = " << (s.spacing == AxisSpacing::Log ? "log" : "linear") << '\n';
    out << "jobs = " << s.jobs << '\n';
    out << "observable = " << (s.observable == SweepObservable::Delay ? "delay" : "async") << '\n';
  }
  return out.str();
}

}  // namespace coopqed
