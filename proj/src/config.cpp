#include "memtaxis/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "memtaxis/errors.hpp"

namespace memtaxis {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class LineError {
 public:
  LineError(const std::string& source, int line) : source_(source), line_(line) {}
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ConfigError, source_ + ":" + std::to_string(line_) + ": " + msg);
  }

 private:
  const std::string& source_;
  int line_;
};

double parse_real(const std::string& text, const LineError& where) {
  double x = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || !std::isfinite(x)) {
    where.fail("'" + text + "' is not a finite decimal number");
  }
  return x;
}

int parse_int(const std::string& text, const LineError& where) {
  int x = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    where.fail("'" + text + "' is not an integer");
  }
  return x;
}

bool parse_bool(const std::string& text, const LineError& where) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  where.fail("'" + text + "' is not a boolean");
}

std::vector<double> parse_list(const std::string& text, const LineError& where) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(trim(item), where));
  if (out.empty()) where.fail("empty list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const LineError&)>;

template <class T>
Setter real(T RunConfig::*block, double T::*field) {
  return [=](RunConfig& c, const std::string& v, const LineError& w) {
    c.*block.*field = parse_real(v, w);
  };
}

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"model",
       {{"beta", real(&RunConfig::kin, &KineticParams::beta)},
        {"m", real(&RunConfig::kin, &KineticParams::m)},
        {"s", real(&RunConfig::kin, &KineticParams::s)}}},
      {"transport",
       {{"d11", real(&RunConfig::tr, &TransportParams::d11)},
        {"d22", real(&RunConfig::tr, &TransportParams::d22)},
        {"d21", real(&RunConfig::tr, &TransportParams::d21)},
        {"xi", real(&RunConfig::tr, &TransportParams::xi)},
        {"ell", real(&RunConfig::tr, &TransportParams::ell)}}},
      {"delay",
       {{"tau", [](RunConfig& c, const std::string& v, const LineError& w) { c.delay.tau = parse_real(v, w); }},
        {"tau_min", [](RunConfig& c, const std::string& v, const LineError& w) { c.delay.tau_min = parse_real(v, w); }},
        {"tau_max", [](RunConfig& c, const std::string& v, const LineError& w) { c.delay.tau_max = parse_real(v, w); }},
        {"tau_points", [](RunConfig& c, const std::string& v, const LineError& w) { c.delay.tau_points = parse_int(v, w); }}}},
      {"simulation",
       {{"n_cells", [](RunConfig& c, const std::string& v, const LineError& w) { c.sim.n_cells = parse_int(v, w); }},
        {"dt", real(&RunConfig::sim, &SimulationSpec::dt)},
        {"t_end", real(&RunConfig::sim, &SimulationSpec::t_end)},
        {"ic_mode", [](RunConfig& c, const std::string& v, const LineError& w) { c.sim.ic_mode = parse_int(v, w); }},
        {"ic_amplitude_u", real(&RunConfig::sim, &SimulationSpec::ic_amplitude_u)},
        {"ic_amplitude_v", real(&RunConfig::sim, &SimulationSpec::ic_amplitude_v)},
        {"probe_x", [](RunConfig& c, const std::string& v, const LineError& w) { c.sim.probe_x = parse_real(v, w); }},
        {"record_interval", real(&RunConfig::sim, &SimulationSpec::record_interval)},
        {"trace_interval", real(&RunConfig::sim, &SimulationSpec::trace_interval)},
        {"snapshot_limit", [](RunConfig& c, const std::string& v, const LineError& w) { c.sim.snapshot_limit = parse_int(v, w); }},
        {"spectrum_modes", [](RunConfig& c, const std::string& v, const LineError& w) { c.sim.spectrum_modes = parse_int(v, w); }}}},
      {"detect",
       {{"transient_fraction", real(&RunConfig::detect, &DetectOptions::transient_fraction)},
        {"spacing_tol", real(&RunConfig::detect, &DetectOptions::spacing_tol)},
        {"drift_tol", real(&RunConfig::detect, &DetectOptions::drift_tol)},
        {"steady_tol", real(&RunConfig::detect, &DetectOptions::steady_tol)}}},
      {"analysis",
       {{"n_max", [](RunConfig& c, const std::string& v, const LineError& w) { c.n_max = parse_int(v, w); }},
        {"j_max", [](RunConfig& c, const std::string& v, const LineError& w) { c.j_max = parse_int(v, w); }}}},
      {"sweep",
       {{"ell_values", [](RunConfig& c, const std::string& v, const LineError& w) { c.ell_values = parse_list(v, w); }},
        {"normal_form", [](RunConfig& c, const std::string& v, const LineError& w) { c.sweep_normal_form = parse_bool(v, w); }},
        {"workers", [](RunConfig& c, const std::string& v, const LineError& w) { c.workers = parse_int(v, w); }}}},
      {"output",
       {{"dir", [](RunConfig& c, const std::string& v, const LineError&) { c.output_dir = v; }}}},
  };
  return s;
}

void check_ranges(const RunConfig& c, const std::string& source) {
  const auto bad = [&](const std::string& msg) {
    throw Error(ErrorCode::ConfigError, source + ": " + msg);
  };
  try {
    c.kin.validate();
    c.tr.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  if (c.delay.tau && *c.delay.tau < 0) bad("tau must be >= 0");
  if (c.delay.tau_min.has_value() != c.delay.tau_max.has_value()) {
    bad("tau_min and tau_max must be given together");
  }
  if (c.delay.tau_min) {
    if (*c.delay.tau_min < 0 || *c.delay.tau_max < *c.delay.tau_min) bad("need 0 <= tau_min <= tau_max");
    if (c.delay.tau_points < 1) bad("tau_points must be >= 1");
  }
  if (c.sim.n_cells < 16) bad("n_cells must be >= 16");
  if (c.sim.dt < 0) bad("dt must be >= 0");
  if (!(c.sim.t_end > 0)) bad("t_end must be positive");
  if (!(c.sim.record_interval > 0) || !(c.sim.trace_interval > 0)) bad("intervals must be positive");
  if (c.sim.snapshot_limit < 1) bad("snapshot_limit must be >= 1");
  if (c.sim.spectrum_modes < 1) bad("spectrum_modes must be >= 1");
  if (c.n_max < 1 || c.j_max < 0) bad("need n_max >= 1 and j_max >= 0");
  if (c.workers < 1) bad("workers must be >= 1");
  for (double l : c.ell_values) {
    if (!(l > 0)) bad("ell_values must be positive");
  }
}

}  // namespace

std::vector<double> DelaySpec::grid() const {
  if (tau_min) {
    if (tau_points == 1) return {*tau_min};
    std::vector<double> g(tau_points);
    for (int i = 0; i < tau_points; ++i) {
      g[i] = *tau_min + (*tau_max - *tau_min) * i / (tau_points - 1);
    }
    return g;
  }
  if (tau) return {*tau};
  return {};
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig cfg;
  cfg.source = source;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const LineError where(source, line_no);
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') where.fail("malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) where.fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) where.fail("expected key = value");
    if (section.empty()) where.fail("key outside of a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& keys = schema().at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) where.fail("unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(section + "." + key).second) where.fail("duplicate key '" + key + "'");
    if (value.empty()) where.fail("missing value for '" + key + "'");
    it->second(cfg, value, where);
  }
  check_ranges(cfg, source);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace memtaxis
