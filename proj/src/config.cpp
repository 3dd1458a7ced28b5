#include "msqp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace msqp {

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
  return v;
}

const std::vector<double> kT2Grid{10, 50, 100, 200, 400, 1000};
const std::vector<double> kQGrid{1e5, 1e6, 1e7};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& s) {
  const std::string t = trim(s);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("not a number: '" + t + "'");
  }
  return v;
}

int to_int(const std::string& s) {
  const std::string t = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("not an integer: '" + t + "'");
  }
  return v;
}

bool to_bool(const std::string& s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("not a boolean: '" + t + "'");
}

std::vector<double> to_list(const std::string& s) {
  const std::string t = trim(s);
  if (t.rfind("linspace(", 0) == 0 && t.back() == ')') {
    const auto args = split(t.substr(9, t.size() - 10), ',');
    if (args.size() != 3) throw ConfigError("linspace takes (start, stop, count)");
    const int n = to_int(args[2]);
    if (n < 1) throw ConfigError("linspace count must be positive");
    return linspace(to_double(args[0]), to_double(args[1]), n);
  }
  std::vector<double> v;
  for (const auto& item : split(t, ',')) v.push_back(to_double(item));
  return v;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + f(v[i]);
  return out;
}

// Key table shared by the parser and the emitter, in emission order.
struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define MSQP_NUM(name, member)                                                         \
  Field {                                                                              \
    name, [](ExperimentConfig& c, const std::string& v) { c.member = to_double(v); }, \
        [](const ExperimentConfig& c) { return fmt(c.member); }                        \
  }
#define MSQP_INT(name, member)                                                      \
  Field {                                                                           \
    name, [](ExperimentConfig& c, const std::string& v) { c.member = to_int(v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }          \
  }
#define MSQP_BOOL(name, member)                                                      \
  Field {                                                                            \
    name, [](ExperimentConfig& c, const std::string& v) { c.member = to_bool(v); }, \
        [](const ExperimentConfig& c) { return std::string(c.member ? "true" : "false"); } \
  }
#define MSQP_LIST(name, member)                                                     \
  Field {                                                                           \
    name, [](ExperimentConfig& c, const std::string& v) { c.member = to_list(v); }, \
        [](const ExperimentConfig& c) { return join(c.member, fmt); }               \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      {"scenario", [](ExperimentConfig& c, const std::string& v) { c.scenario = trim(v); },
       [](const ExperimentConfig& c) { return c.scenario; }},
      {"output", [](ExperimentConfig& c, const std::string& v) { c.output = trim(v); },
       [](const ExperimentConfig& c) { return c.output; }},
      MSQP_NUM("q1.spin", q1.spin),
      MSQP_NUM("q1.D_GHz", q1.d_ghz),
      MSQP_NUM("q1.g", q1.g),
      MSQP_NUM("q1.G_MHz", q1.g_coupling_mhz),
      MSQP_NUM("q2.spin", q2.spin),
      MSQP_NUM("q2.D_GHz", q2.d_ghz),
      MSQP_NUM("q2.g", q2.g),
      MSQP_NUM("q2.G_MHz", q2.g_coupling_mhz),
      MSQP_NUM("field_mt", field_mt),
      MSQP_NUM("omega0_ghz", omega0_ghz),
      MSQP_INT("n_max", n_max),
      MSQP_INT("levels1", levels1),
      MSQP_INT("levels2", levels2),
      MSQP_BOOL("rwa", rwa),
      MSQP_LIST("b1_gauss", b1_gauss),
      MSQP_LIST("T2_us", t2_us),
      MSQP_LIST("Q", quality),
      MSQP_LIST("jt", jt),
      MSQP_LIST("tb", tb),
      {"oracles",
       [](ExperimentConfig& c, const std::string& v) {
         c.oracles.clear();
         for (const auto& s : split(v, ',')) c.oracles.push_back(to_int(s));
       },
       [](const ExperimentConfig& c) {
         return join(c.oracles, [](int k) { return std::to_string(k); });
       }},
      {"methods", [](ExperimentConfig& c, const std::string& v) { c.methods = split(v, ','); },
       [](const ExperimentConfig& c) {
         return join(c.methods, [](const std::string& s) { return s; });
       }},
      MSQP_INT("trotter_steps", trotter_steps),
      MSQP_NUM("delta1_mhz", delta1_mhz),
      MSQP_NUM("delta2_mhz", delta2_mhz),
      MSQP_NUM("min_pulse_ns", min_pulse_ns),
      MSQP_BOOL("cz_fixed_slot", cz_fixed_slot),
      MSQP_NUM("detector_efficiency", detector_efficiency),
      MSQP_NUM("detector_window_ns", detector_window_ns),
      {"integrator", [](ExperimentConfig& c, const std::string& v) { c.integrator = trim(v); },
       [](const ExperimentConfig& c) { return c.integrator; }},
      MSQP_NUM("steps_per_period", steps_per_period),
      MSQP_NUM("chunk_ns", chunk_ns),
      MSQP_BOOL("check_convergence", check_convergence),
  };
  return table;
}

#undef MSQP_NUM
#undef MSQP_INT
#undef MSQP_BOOL
#undef MSQP_LIST

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"deutsch_jozsa", "cz_sweep", "gate_comparison",
                                              "heisenberg", "tim"};
  return names;
}

ExperimentConfig default_config(const std::string& scenario) {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), scenario) == names.end()) {
    throw ConfigError("unknown scenario '" + scenario + "'");
  }
  ExperimentConfig c;
  c.scenario = scenario;
  c.output = scenario + ".csv";
  const double inf = std::numeric_limits<double>::infinity();
  if (scenario == "deutsch_jozsa") {
    c.n_max = 1;
    c.levels1 = 5;
    c.levels2 = 1;
    c.b1_gauss = {1, 2, 3, 4, 5};
    c.t2_us = kT2Grid;
    c.quality = {inf};
    c.min_pulse_ns = 0.0;
  } else if (scenario == "cz_sweep" || scenario == "gate_comparison") {
    c.n_max = 2;
    c.levels1 = 3;
    c.levels2 = 4;
    c.b1_gauss = {2};
    c.t2_us = kT2Grid;
    c.quality = kQGrid;
  } else if (scenario == "heisenberg") {
    c.n_max = 2;
    c.levels1 = 3;
    c.levels2 = 2;
    c.b1_gauss = {2};
    c.t2_us = {50};
    c.quality = {1e6};
    c.jt = linspace(0.0, 2.0 * kPi, 9);
  } else {
    c.n_max = 2;
    c.levels1 = 3;
    c.levels2 = 2;
    c.b1_gauss = {2};
    c.t2_us = {50};
    c.quality = {1e6};
    c.tb = linspace(0.0, 2.0 * kPi, 13);
  }
  return c;
}

void ExperimentConfig::validate() const {
  default_config(scenario);  // scenario name check
  q1.validate();
  q2.validate();
  if (!std::isfinite(field_mt)) throw ConfigError("field_mt must be finite");
  if (!(omega0_ghz > 0.0) || !std::isfinite(omega0_ghz)) {
    throw ConfigError("omega0_ghz must be positive");
  }
  if (n_max < 0 || n_max > 8) throw ConfigError("n_max must lie in [0, 8]");
  if (levels1 < 1 || levels1 > q1.dimension() || levels2 < 1 || levels2 > q2.dimension()) {
    throw ConfigError("levels1/levels2 must lie in [1, 2S+1]");
  }
  auto positive = [](const std::vector<double>& v, const char* name, bool allow_inf) {
    if (v.empty()) throw ConfigError(std::string(name) + " must not be empty");
    for (double x : v) {
      if (!(x > 0.0) || (!allow_inf && !std::isfinite(x))) {
        throw ConfigError(std::string(name) + " entries must be positive, got " + fmt(x));
      }
    }
  };
  positive(b1_gauss, "b1_gauss", false);
  positive(t2_us, "T2_us", true);
  positive(quality, "Q", true);
  if (scenario == "heisenberg") {
    if (jt.empty()) throw ConfigError("jt must not be empty");
    for (double x : jt) {
      if (!(x >= 0.0) || x > 2.0 * kPi + 1e-9) throw ConfigError("jt entries must lie in [0, 2π]");
    }
    if (methods.empty()) throw ConfigError("methods must not be empty");
  }
  if (scenario == "tim") {
    if (tb.empty()) throw ConfigError("tb must not be empty");
    for (double x : tb) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError("tb entries must be >= 0");
    }
  }
  for (const auto& m : methods) {
    if (m != "resonant" && m != "dispersive") {
      throw ConfigError("method must be resonant or dispersive, got '" + m + "'");
    }
  }
  if (oracles.empty()) throw ConfigError("oracles must not be empty");
  for (int k : oracles) {
    if (k < 1 || k > 4) throw ConfigError("oracles are numbered 1..4");
  }
  if (trotter_steps < 1) throw ConfigError("trotter_steps must be positive");
  if (!(delta1_mhz > 0.0) || !(delta2_mhz > 0.0)) throw ConfigError("Δ values must be positive");
  if (!(min_pulse_ns >= 0.0) || !std::isfinite(min_pulse_ns)) {
    throw ConfigError("min_pulse_ns must be non-negative");
  }
  if (!(detector_efficiency >= 0.0 && detector_efficiency <= 1.0)) {
    throw ConfigError("detector_efficiency must lie in [0, 1]");
  }
  if (!(detector_window_ns >= 0.0) || !std::isfinite(detector_window_ns)) {
    throw ConfigError("detector_window_ns must be non-negative");
  }
  if (integrator != "propagator" && integrator != "rk4") {
    throw ConfigError("integrator must be propagator or rk4");
  }
  if (!(steps_per_period >= 4.0) || !std::isfinite(steps_per_period)) {
    throw ConfigError("steps_per_period must be at least 4");
  }
  if (!(chunk_ns > 0.0) || !std::isfinite(chunk_ns)) throw ConfigError("chunk_ns must be positive");
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, std::pair<std::string, int>> entries;
  std::string line;
  int number = 0;
  for (const auto& f : fields()) entries.erase(f.key);
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(number) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& table = fields();
    if (std::none_of(table.begin(), table.end(), [&](const Field& f) { return f.key == key; })) {
      throw ConfigError(where + "unknown key '" + key + "'");
    }
    if (entries.count(key)) throw ConfigError(where + "duplicate key '" + key + "'");
    entries[key] = {value, number};
  }
  if (!entries.count("scenario")) throw ConfigError(source + ": missing 'scenario' key");
  ExperimentConfig c;
  try {
    c = default_config(trim(entries["scenario"].first));
  } catch (const ConfigError& e) {
    throw ConfigError(source + ":" + std::to_string(entries["scenario"].second) + ": " + e.what());
  }
  for (const auto& f : fields()) {
    auto it = entries.find(f.key);
    if (it == entries.end()) continue;
    try {
      f.set(c, it->second.first);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(it->second.second) + ": " + f.key + ": " +
                        e.what());
    }
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void emit_config(std::ostream& out, const ExperimentConfig& config) {
  for (const auto& f : fields()) out << f.key << " = " << f.get(config) << "\n";
}

}  // namespace msqp
