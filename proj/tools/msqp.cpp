#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "msqp/circuit.hpp"
#include "msqp/compiler.hpp"
#include "msqp/experiments.hpp"
#include "msqp/gates.hpp"
#include "msqp/readout.hpp"
#include "msqp/register.hpp"

using namespace msqp;

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericalExit = 3;

// Writes to `path`, or stdout for "" and "-".
template <typename F>
void with_output(const std::string& path, F write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write(out);
}

ExperimentConfig resolve_config(const std::string& scenario, const std::string& path,
                                const std::vector<std::string>& overrides) {
  ExperimentConfig base = path.empty() ? default_config(scenario) : load_config(path);
  if (!scenario.empty() && base.scenario != scenario) {
    throw ConfigError("config scenario '" + base.scenario + "' does not match '" + scenario + "'");
  }
  if (overrides.empty()) return base;
  std::map<std::string, std::string> set;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + o + "'");
    std::string key = o.substr(0, eq);
    key.erase(key.find_last_not_of(' ') + 1);
    set[key] = o.substr(eq + 1);
  }
  std::ostringstream text;
  emit_config(text, base);
  std::istringstream lines(text.str());
  std::ostringstream merged;
  std::string line;
  while (std::getline(lines, line)) {
    const std::string key = line.substr(0, line.find(" ="));
    if (!set.count(key)) merged << line << "\n";
  }
  for (const auto& [k, v] : set) merged << k << " = " << v << "\n";
  std::istringstream in(merged.str());
  return parse_config(in, "--set");
}

int run_experiment(const ExperimentConfig& config, std::string out, std::string manifest,
                   int workers) {
  if (out.empty()) out = config.output;
  if (manifest.empty() && out != "-") manifest = out + ".manifest";
  const auto start = std::chrono::steady_clock::now();
  const BenchmarkTable table = run_scenario(config, workers);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  with_output(out, [&](std::ostream& os) { table.write_csv(os); });
  if (!manifest.empty()) {
    RunManifest m;
    m.config = config;
    m.version = tool_version();
    m.workers = workers;
    m.timings_s = {{config.scenario, elapsed}};
    with_output(manifest, [&](std::ostream& os) { m.write(os); });
  }
  return 0;
}

QuditSpec qudit_from(const std::string& config_path, int qudit) {
  const ExperimentConfig c =
      config_path.empty() ? default_config("deutsch_jozsa") : load_config(config_path);
  return qudit == 1 ? c.q1 : c.q2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"msqp: pulse-level simulator for two spin-S qudits coupled to a tunable resonator"};
  app.require_subcommand(1);
  int workers = worker_count();
  app.add_option("-j,--workers", workers, "Parallel sweep workers")
      ->envname("MSQP_WORKERS")
      ->check(CLI::PositiveNumber);

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Energy-ordered levels of one qudit as CSV");
  int sp_qudit = 1;
  double sp_field = 50.0;
  std::string sp_config, sp_out;
  spectrum->add_option("--qudit", sp_qudit, "Qudit 1 or 2")->check(CLI::Range(1, 2));
  spectrum->add_option("--field-mt", sp_field, "Static field in mT");
  spectrum->add_option("--config", sp_config, "Take the qudit parameters from this config");
  spectrum->add_option("-o,--out", sp_out, "Output CSV (default stdout)");

  // compile
  auto* compile = app.add_subcommand(
      "compile", "Compile a circuit on qudit 1 (2 qubits -> 4 levels) into a pulse table");
  std::string cp_circuit, cp_out;
  double cp_b1 = 2.0, cp_min = 0.0;
  compile->add_option("circuit", cp_circuit, "Circuit file")->required()->check(CLI::ExistingFile);
  compile->add_option("--b1-gauss", cp_b1, "Drive amplitude in gauss");
  compile->add_option("--min-pulse-ns", cp_min, "Stretch shorter pulses to this length");
  compile->add_option("-o,--out", cp_out, "Output pulse table (default stdout)");

  // gate
  auto* gate = app.add_subcommand("gate", "Calibrate a two-qudit gate and write its schedule");
  std::string gt_kind = "cz", gt_out;
  double gt_phi = kPi, gt_tau = kPi;
  double gt_t2 = std::numeric_limits<double>::infinity();
  double gt_q = std::numeric_limits<double>::infinity();
  gate->add_option("kind", gt_kind, "cz (resonant U^{01}_phi) or iswap (dispersive XY)")
      ->check(CLI::IsMember({"cz", "iswap"}));
  gate->add_option("--phi", gt_phi, "Controlled phase in rad");
  gate->add_option("--tau", gt_tau, "Exchange angle in rad");
  gate->add_option("--t2-us", gt_t2, "Evaluate on the benchmark state with this T2");
  gate->add_option("--quality", gt_q, "Resonator quality factor for the evaluation");
  gate->add_option("-o,--out", gt_out, "Output pulse table");

  // run
  auto* run = app.add_subcommand("run", "Run one benchmark scenario");
  std::string rn_scenario, rn_config, rn_out, rn_manifest;
  std::vector<std::string> rn_set;
  run->add_option("scenario", rn_scenario, "Scenario name")
      ->required()
      ->check(CLI::IsMember(scenario_names()));
  run->add_option("--config", rn_config, "Config file (default: scenario defaults)")
      ->check(CLI::ExistingFile);
  run->add_option("-o,--out", rn_out, "Output CSV (default: config 'output'; '-' for stdout)");
  run->add_option("--manifest", rn_manifest, "Manifest path (default: <out>.manifest)");
  run->add_option("--set", rn_set, "Override a config key, key=value (repeatable)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run the scenario named in a config file");
  std::string sw_config, sw_out, sw_manifest;
  std::vector<std::string> sw_set;
  sweep->add_option("config", sw_config, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("-o,--out", sw_out, "Output CSV (default: config 'output'; '-' for stdout)");
  sweep->add_option("--manifest", sw_manifest, "Manifest path (default: <out>.manifest)");
  sweep->add_option("--set", sw_set, "Override a config key, key=value (repeatable)");

  // readout
  auto* readout = app.add_subcommand("readout", "Resonant photon-emission readout of one level pair");
  ReadoutPair rd_pair;
  DetectorModel rd_det;
  double rd_alpha = 1.0, rd_beta = 1.0, rd_t2 = std::numeric_limits<double>::infinity();
  double rd_q = std::numeric_limits<double>::infinity(), rd_delta = 20.0;
  int rd_qudit = 1;
  readout->add_option("--qudit", rd_qudit, "Qudit 1 or 2")->check(CLI::Range(1, 2));
  readout->add_option("--lower", rd_pair.lower, "Lower level position (0..3)")->check(CLI::Range(0, 3));
  readout->add_option("--upper", rd_pair.upper, "Upper level position (0..3)")->check(CLI::Range(0, 3));
  readout->add_option("--alpha", rd_alpha, "Amplitude on the lower level");
  readout->add_option("--beta", rd_beta, "Amplitude on the upper level");
  readout->add_option("--efficiency", rd_det.efficiency, "Detector efficiency in [0, 1]");
  readout->add_option("--window-ns", rd_det.window_ns, "Detection window after the swap");
  readout->add_option("--t2-us", rd_t2, "Spin dephasing time");
  readout->add_option("--quality", rd_q, "Resonator quality factor");
  readout->add_option("--dispersive-delta-mhz", rd_delta, "Detuning for the dispersive estimate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*spectrum) {
      const QuditSpec spec = qudit_from(sp_config, sp_qudit);
      spec.validate();
      const LevelOrder order = level_order(spec, sp_field);
      with_output(sp_out, [&](std::ostream& os) {
        os << "label,m,energy_GHz\n";
        for (std::size_t p = 0; p < order.size(); ++p) {
          os << p << "," << format_number(order.m_of_label[p]) << ","
             << format_number(order.energies_ghz[p]) << "\n";
        }
      });
    } else if (*compile) {
      std::ifstream in(cp_circuit);
      const Circuit c = parse_circuit(in);
      if (c.n_qubits < 1 || c.n_qubits > 2) throw ConfigError("compile handles 1 or 2 qubits");
      const int d = 1 << c.n_qubits;
      const QuditSpec q1{10.0, 7.1, 2.0, 0.090};
      // Logical levels m = 0, +1, -1, -2 as in the single-qudit algorithm.
      const std::vector<int> labels = d == 2 ? std::vector<int>{0, 2} : std::vector<int>{0, 2, 1, 3};
      const CompositeSpace space(q1, QuditSpec{10.0, 7.7, 2.0, 0.090}, labels, {0}, 1, 50.0, 7.5);
      std::vector<double> ms;
      for (int k = 0; k < d; ++k) ms.push_back(space.m_of(0, k));
      const ConnectivityGraph graph = build_connectivity(q1, 50.0, ms);
      GateProgram program{d, {}, 0.0};
      for (const CircuitGate& g : c.gates) {
        const GateProgram p = givens_decompose(gate_matrix(g, c.n_qubits), graph);
        program.rotations.insert(program.rotations.end(), p.rotations.begin(), p.rotations.end());
        program.global_phase += p.global_phase;
      }
      std::vector<int> levels(d);
      for (int k = 0; k < d; ++k) levels[k] = k;
      PulseOptions po;
      po.b1_gauss = cp_b1;
      po.min_duration_ns = cp_min;
      std::vector<std::string> warnings;
      const ControlSchedule s = rotations_to_pulses(program, space, 0, levels, po, &warnings);
      const double err = phase_insensitive_distance(reconstruct_unitary(program), c.unitary());
      std::cerr << "rotations = " << program.rotations.size() << "\nduration_ns = "
                << format_number(s.span_ns) << "\nreconstruction_error = " << format_number(err)
                << "\n";
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      with_output(cp_out, [&](std::ostream& os) { write_pulse_table(os, s); });
    } else if (*gate) {
      const QuditSpec q1{10.0, 7.1, 2.0, 0.090}, q2{10.0, 7.7, 2.0, 0.090};
      const bool cz = gt_kind == "cz";
      const CompositeSpace space =
          cz ? CompositeSpace(q1, q2, {0, 1, 2}, {0, 1, 2, 3}, 2, 50.0, 7.5)
             : CompositeSpace(q1, q2, {0, 1}, {0, 1}, 1, 50.0, 7.5);
      RegisterOptions ro;
      ro.comp2 = cz ? 4 : 2;
      Register r(space, ro);
      if (cz) {
        r.controlled_phase(0, 1, gt_phi);
      } else {
        r.exchange(gt_tau);
      }
      std::cout << "gate = " << gt_kind << "\nduration_ns = " << format_number(r.duration())
                << "\nclosed_op_fidelity = " << format_number(r.ops().front().fidelity) << "\n";
      if (std::isfinite(gt_t2) || std::isfinite(gt_q)) {
        const auto& a = benchmark_amplitudes();
        Vector psi = cz ? Vector(8) : Vector(4);
        if (cz) {
          for (int k = 0; k < 8; ++k) psi(k) = a[k];
        } else {
          psi << a[0], a[1], a[4], a[5];
        }
        NoiseModel nm;
        nm.t2_us = gt_t2;
        nm.quality_factor = gt_q;
        const Matrix rho = r.logical_density(
            evolve(space, r.schedule(), nm, r.initial_density(psi), 0.0, r.duration()));
        const Vector t = r.ideal() * psi.normalized();
        std::cout << "state_fidelity = " << format_number(std::real(t.dot(rho * t))) << "\n";
      }
      if (!gt_out.empty()) with_output(gt_out, [&](std::ostream& os) { write_pulse_table(os, r.schedule()); });
    } else if (*run) {
      return run_experiment(resolve_config(rn_scenario, rn_config, rn_set), rn_out, rn_manifest,
                            workers);
    } else if (*sweep) {
      return run_experiment(resolve_config("", sw_config, sw_set), sw_out, sw_manifest, workers);
    } else if (*readout) {
      rd_pair.qudit = rd_qudit - 1;
      const QuditSpec q1{10.0, 7.1, 2.0, 0.090}, q2{10.0, 7.7, 2.0, 0.090};
      const std::vector<int> four{0, 1, 2, 3};
      const CompositeSpace space = rd_pair.qudit == 0
                                       ? CompositeSpace(q1, q2, four, {0}, 1, 50.0, 7.5)
                                       : CompositeSpace(q1, q2, {0}, four, 1, 50.0, 7.5);
      std::vector<Complex> amp(4, 0.0);
      amp[rd_pair.lower] += rd_alpha;
      amp[rd_pair.upper] += rd_beta;
      NoiseModel nm;
      nm.t2_us = rd_t2;
      nm.quality_factor = rd_q;
      const ReadoutResult res =
          simulate_resonant_readout(initial_state(space, amp), space, rd_pair, rd_det, nm);
      const QuditSpec& spec = rd_pair.qudit == 0 ? q1 : q2;
      const double m_lower = space.m_of(rd_pair.qudit, rd_pair.lower);
      const double m_upper = space.m_of(rd_pair.qudit, rd_pair.upper);
      const DispersiveEstimate est =
          dispersive_shift(coupling_strength(spec, std::min(m_lower, m_upper)), rd_delta);
      std::cout << "p_no_click = " << format_number(res.probabilities[0])
                << "\np_click = " << format_number(res.probabilities[1])
                << "\nswap_ns = " << format_number(res.swap_ns)
                << "\nduration_ns = " << format_number(res.duration_ns)
                << "\nreprepare_ns = " << format_number(res.reprepare_ns)
                << "\nresidual_entanglement = " << format_number(res.residual_entanglement)
                << "\ndispersive_chi_mhz = " << format_number(est.chi_mhz)
                << "\ndispersive_duration_us = " << format_number(est.duration_us) << "\n";
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericalExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalExit;
  }
  return 0;
}
