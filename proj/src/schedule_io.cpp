#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "msqp/composite.hpp"

namespace msqp {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void row(std::ostream& out, const std::string& channel, double t0, double dur, double p1,
         double p2, double p3) {
  out << channel << ',' << fmt(t0) << ',' << fmt(dur) << ',' << fmt(p1) << ',' << fmt(p2) << ','
      << fmt(p3) << '\n';
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void write_pulse_table(std::ostream& out, const ControlSchedule& schedule) {
  out << "channel,t0_ns,dur_ns,param1,param2,param3\n";
  row(out, "span", 0.0, schedule.span_ns, 0.0, 0.0, 0.0);
  for (const auto& p : schedule.pulses) {
    row(out, "drive", p.t0_ns, p.duration_ns, p.amplitude_g, p.carrier_ghz, p.phase);
  }
  for (const auto& d : schedule.detunings) {
    row(out, "detune", d.start_ns, d.duration_ns, d.delta_ghz, d.ramp_ns, 0.0);
  }
  for (const auto& f : schedule.fields) {
    row(out, f.qudit == 0 ? "field1" : "field2", f.start_ns, f.duration_ns, f.delta_mt, 0.0, 0.0);
  }
}

ControlSchedule read_pulse_table(std::istream& in) {
  ControlSchedule s;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (!header) {
      if (line.rfind("channel", 0) != 0) {
        throw ConfigError("pulse table line " + std::to_string(lineno) + ": missing header");
      }
      header = true;
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(trim(cell));
    if (cols.size() != 6) {
      throw ConfigError("pulse table line " + std::to_string(lineno) + ": expected 6 columns");
    }
    double v[5];
    for (int k = 0; k < 5; ++k) {
      try {
        std::size_t used = 0;
        v[k] = std::stod(cols[k + 1], &used);
        if (used != cols[k + 1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError("pulse table line " + std::to_string(lineno) + ": bad number '" +
                          cols[k + 1] + "'");
      }
    }
    const std::string& ch = cols[0];
    if (ch == "span") {
      s.span_ns = v[1];
    } else if (ch == "drive") {
      s.pulses.push_back({v[2], v[3], v[4], v[0], v[1]});
    } else if (ch == "detune") {
      s.detunings.push_back({v[0], v[1], v[2], v[3]});
    } else if (ch == "field1" || ch == "field2") {
      s.fields.push_back({ch == "field1" ? 0 : 1, v[0], v[1], v[2]});
    } else {
      throw ConfigError("pulse table line " + std::to_string(lineno) + ": unknown channel '" + ch +
                        "'");
    }
  }
  if (!header) throw ConfigError("pulse table is empty");
  return s;
}

}  // namespace msqp
