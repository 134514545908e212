/**
 * Copyright 2026 The mmqpt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: argument parsing, command dispatch, run manifests.

#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmqpt/circuit_dsl.hpp"
#include "mmqpt/fitting.hpp"
#include "mmqpt/io.hpp"
#include "mmqpt/mmqpt.hpp"
#include "mmqpt/synth.hpp"
#include "mmqpt/version.hpp"

namespace mmqpt::cli {

enum ExitCode : int { kOk = 0, kIoFailure = 1, kUsage = 2, kInvalid = 3, kNumerical = 4 };

inline constexpr const char* kSeedEnv = "MISMATCH_QPT_SEED";

class UsageError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Files and digests

/// 64-bit FNV-1a, hex encoded. Used to fingerprint inputs and outputs.
inline std::string digest(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline Json parse_json(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Argument helpers

inline std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  if (text.find_first_not_of(' ') == std::string::npos) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string cell = text.substr(pos, comma - pos);
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    while (!cell.empty() && cell.back() == ' ') cell.pop_back();
    double v = 0.0;
    auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size() || !std::isfinite(v)) {
      throw UsageError(std::string(what) + ": '" + cell + "' is not a finite number");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

inline std::vector<double> parse_tau(const std::string& text, int expected) {
  auto v = parse_list(text, "--tau");
  if (static_cast<int>(v.size()) != expected) {
    throw UsageError("--tau needs " + std::to_string(expected) + " comma-separated values, got " +
                     std::to_string(v.size()));
  }
  return v;
}

struct SeedChoice {
  std::uint64_t value = 0;
  std::string source;
};

inline SeedChoice resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return {*flag, "flag"};
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    const std::string_view s(env);
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) {
      throw UsageError(std::string(kSeedEnv) + "='" + env + "' is not an unsigned integer");
    }
    return {v, "env"};
  }
  return {0, "default"};
}

inline std::string fmt(double v) {
  if (v == 0.0) v = 0.0;
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// ---------------------------------------------------------------------------
// Run bookkeeping

struct Run {
  std::string command;
  std::ostringstream out;
  Json inputs = Json::array();
  Json outputs = Json::array();
  Json config = Json::object();
  std::optional<SeedChoice> seed;

  std::string load(const std::string& path) {
    std::string text = read_file(path);
    inputs.push_back(Json{{"path", path}, {"fnv1a64", digest(text)}});
    return text;
  }
  void save(const std::string& path, const std::string& text) {
    write_file(path, text);
    outputs.push_back(Json{{"path", path}, {"fnv1a64", digest(text)}});
  }
  /// Writes to `path` when given, otherwise to standard output.
  void emit(const std::optional<std::string>& path, const std::string& text) {
    if (path) {
      save(*path, text);
    } else {
      out << text;
    }
  }
};

inline Circuit load_circuit(Run& run, const std::optional<std::string>& file, const std::string& builtin) {
  if (file) return parse_circuit(run.load(*file));
  if (builtin == "cnot") return build_cnot();
  throw UsageError("unknown builtin circuit '" + builtin + "'");
}

inline std::string basis_name(Basis b) { return b == Basis::Z ? "z" : "x"; }

// ---------------------------------------------------------------------------
// Commands

struct SimulateArgs {
  std::optional<std::string> circuit;
  std::string builtin = "cnot";
  std::string tau;
  std::string input;
  std::string basis = "z";
  std::string format = "text";
  std::optional<std::string> out;
};

inline void cmd_simulate(const SimulateArgs& a, Run& run) {
  const Circuit c = load_circuit(run, a.circuit, a.builtin);
  const auto tau = parse_tau(a.tau, c.tau_count());
  const InputLabel input = InputLabel::parse(a.input);
  const Basis basis = a.basis == "z" ? Basis::Z : Basis::X;
  run.config = Json{{"circuit", a.circuit ? Json(*a.circuit) : Json(nullptr)},
                    {"builtin", a.circuit ? Json(nullptr) : Json(a.builtin)},
                    {"tau", tau},
                    {"input", input.to_string()},
                    {"basis", a.basis},
                    {"format", a.format}};
  const auto d = simulate(c, tau, input, basis);
  const char* z[] = {"00", "01", "10", "11"};
  const char* x[] = {"++", "+-", "-+", "--"};
  std::ostringstream os;
  if (a.format == "csv") {
    os << "outcome,probability\n";
    for (int k = 0; k < 4; ++k) os << (basis == Basis::Z ? z[k] : x[k]) << ',' << fmt(d.conditional[k]) << '\n';
    os << "success," << fmt(d.success) << '\n';
  } else {
    os << "input " << input.to_string() << ", basis " << a.basis << "\n";
    for (int k = 0; k < 4; ++k) {
      os << "  P(" << (basis == Basis::Z ? z[k] : x[k]) << ") = " << fmt(d.conditional[k]) << '\n';
    }
    os << "  success = " << fmt(d.success) << '\n';
  }
  run.emit(a.out, os.str());
}

struct FitArgs {
  std::string data;
  std::string mode = "global";
  std::optional<std::uint64_t> seed;
  int restarts = FitConfig{}.restarts;
  double bound = FitConfig{}.bound;
  double tolerance = FitConfig{}.tolerance;
  int max_iterations = FitConfig{}.max_iterations;
  int polish_rounds = FitConfig{}.polish_rounds;
  std::string mask = "full";
  std::optional<std::string> out;
};

inline void cmd_fit(const FitArgs& a, Run& run) {
  std::istringstream csv(run.load(a.data));
  const MeasMatrix data = read_meas_csv(csv);
  FitConfig cfg;
  run.seed = resolve_seed(a.seed);
  cfg.seed = run.seed->value;
  cfg.restarts = a.restarts;
  cfg.bound = a.bound;
  cfg.tolerance = a.tolerance;
  cfg.max_iterations = a.max_iterations;
  cfg.polish_rounds = a.polish_rounds;
  cfg.mode = a.mode == "global" ? FitMode::Global : FitMode::PerInput;
  cfg.mask = a.mask == "full" ? full_mask() : computational_mask();
  run.config = Json{{"mode", a.mode},          {"restarts", a.restarts},   {"bound", a.bound},
                    {"tolerance", a.tolerance}, {"max_iterations", a.max_iterations},
                    {"polish_rounds", a.polish_rounds}, {"mask", a.mask}};
  const FitResult r = fit(data, cfg);
  const std::string json = fit_result_to_json(r).dump(2) + "\n";
  if (a.out) {
    run.save(*a.out, json);
    run.out << "mode " << a.mode << ": e_max = " << fmt(r.achieved_e_max) << ", e_mean = " << fmt(r.achieved_e_mean)
            << ", evaluations = " << r.objective_evaluations << "\n";
  } else {
    run.out << json;
  }
}

struct QptArgs {
  std::optional<std::string> tau;
  std::optional<std::string> fit_result;
  std::string inputs = "standard";
  std::optional<std::string> out;
};

inline void cmd_qpt(const QptArgs& a, Run& run) {
  TauParams tau;
  if (a.tau) {
    tau = TauParams::from(parse_tau(*a.tau, 5));
  } else {
    const std::string& path = *a.fit_result;
    const FitResult r = fit_result_from_json(parse_json(run.load(path), path));
    if (r.mode != FitMode::Global) {
      throw ValidationError("a per-input fit has no single process; use a global fit result");
    }
    tau = r.tau[0];
  }
  run.config = Json{{"tau", tau.values}, {"inputs", a.inputs}};
  const auto inputs = a.inputs == "standard" ? standard_tomography_inputs() : overcomplete_tomography_inputs();
  const ChiMatrix chi = reconstruct_chi(tau, inputs);
  const double f = process_fidelity(chi, ideal_cnot_chi());
  std::ostringstream os;
  os << "process fidelity vs ideal CNOT = " << fmt(f) << "\n"
     << "chi trace = " << fmt(chi.trace()) << "\n"
     << "chi hermiticity error = " << fmt(chi.hermiticity_error()) << "\n"
     << "chi min eigenvalue = " << fmt(chi.min_eigenvalue()) << "\n"
     << "physical (Hermitian, eigenvalues >= -1e-9) = "
     << (chi.hermiticity_error() < kHermiticityTolerance && chi.min_eigenvalue() >= -kPsdTolerance ? "yes" : "no")
     << "\n";
  run.out << os.str();
  if (a.out) run.save(*a.out, chi_to_json(chi).dump(2) + "\n");
}

struct FidelityArgs {
  std::string first;
  std::string second;
};

inline void cmd_fidelity(const FidelityArgs& a, Run& run) {
  const ChiMatrix x = chi_from_json(parse_json(run.load(a.first), a.first));
  const ChiMatrix y = chi_from_json(parse_json(run.load(a.second), a.second));
  run.out << "process fidelity = " << fmt(process_fidelity(x, y)) << "\n";
}

struct SynthArgs {
  std::string tau;
  std::int64_t counts = 4600;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

inline void cmd_synth(const SynthArgs& a, Run& run) {
  const TauParams tau = TauParams::from(parse_tau(a.tau, 5));
  if (a.counts < 1) throw UsageError("--counts must be at least 1");
  run.seed = resolve_seed(a.seed);
  run.config = Json{{"tau", tau.values}, {"counts", a.counts}};
  const MeasMatrix m = synthesize(model_matrix(tau), a.counts, run.seed->value);
  std::ostringstream os;
  write_meas_csv(os, m);
  run.emit(a.out, os.str());
}

struct SweepArgs {
  std::string tau;
  std::optional<int> component;
  double from = 0.0;
  double to = 1.0;
  int steps = 11;
  std::optional<std::string> out;
};

inline void cmd_sweep(const SweepArgs& a, Run& run) {
  const TauParams base = TauParams::from(parse_tau(a.tau, 5));
  if (a.steps < 2) throw UsageError("--steps must be at least 2");
  if (a.component && (*a.component < 1 || *a.component > 5)) throw UsageError("--component must be 1..5");
  run.config = Json{{"tau", base.values},
                    {"component", a.component ? Json(*a.component) : Json(nullptr)},
                    {"from", a.from},
                    {"to", a.to},
                    {"steps", a.steps}};
  std::ostringstream os;
  os << (a.component ? "value" : "scale") << ",tau1,tau2,tau3,tau4,tau5,f_p,chi_min_eigenvalue\n";
  const ChiMatrix ideal = ideal_cnot_chi();
  for (int k = 0; k < a.steps; ++k) {
    const double v = a.from + (a.to - a.from) * k / (a.steps - 1);
    TauParams t = base;
    if (a.component) {
      t[static_cast<std::size_t>(*a.component - 1)] = v;
    } else {
      for (double& x : t.values) x *= v;
    }
    const ChiMatrix chi = reconstruct_chi(t);
    os << fmt(v);
    for (double x : t.values) os << ',' << fmt(x);
    os << ',' << fmt(process_fidelity(chi, ideal)) << ',' << fmt(chi.min_eigenvalue()) << '\n';
  }
  run.emit(a.out, os.str());
}

// ---------------------------------------------------------------------------
// Dispatch

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

namespace detail {

/// argv as given, minus any --manifest option, plus the resolved seed so that
/// a replay does not depend on the environment.
inline std::vector<std::string> resolved_argv(const std::vector<std::string>& args, const Run& run) {
  std::vector<std::string> r;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--manifest") {
      ++i;
      continue;
    }
    if (args[i].rfind("--manifest=", 0) == 0) continue;
    r.push_back(args[i]);
  }
  if (run.seed && run.seed->source != "flag") {
    r.push_back("--seed");
    r.push_back(std::to_string(run.seed->value));
  }
  return r;
}

inline int replay(const std::string& manifest_path, const std::optional<std::string>& manifest_out,
                  std::ostream& out, std::ostream& err) {
  const Json m = parse_json(read_file(manifest_path), manifest_path);
  std::vector<std::string> argv;
  std::string recorded_stdout;
  Json recorded_inputs, recorded_outputs;
  try {
    argv = m.at("resolved_argv").get<std::vector<std::string>>();
    recorded_stdout = m.at("stdout_fnv1a64").get<std::string>();
    recorded_inputs = m.at("inputs");
    recorded_outputs = m.at("outputs");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("'" + manifest_path + "' is not a run manifest: " + e.what());
  }
  if (argv.empty() || argv[0] == "replay") throw ValidationError("manifest does not describe a replayable command");
  for (const auto& in : recorded_inputs) {
    const std::string path = in.at("path").get<std::string>();
    if (digest(read_file(path)) != in.at("fnv1a64").get<std::string>()) {
      throw ValidationError("input '" + path + "' changed since the recorded run");
    }
  }
  argv.push_back("--manifest");
  argv.push_back(manifest_out.value_or(manifest_path + ".replay.json"));
  std::ostringstream captured;
  const int code = run_cli(argv, captured, err);
  out << captured.str();
  if (code != kOk) return code;

  bool same = digest(captured.str()) == recorded_stdout;
  if (!same) err << "mmqpt: replay: standard output differs\n";
  for (const auto& o : recorded_outputs) {
    const std::string path = o.at("path").get<std::string>();
    if (digest(read_file(path)) != o.at("fnv1a64").get<std::string>()) {
      err << "mmqpt: replay: output '" << path << "' differs\n";
      same = false;
    }
  }
  if (!same) return kInvalid;
  err << "mmqpt: replay reproduced " << recorded_outputs.size() << " output file(s) and standard output\n";
  return kOk;
}

inline std::string default_manifest(const std::string& command, const std::optional<std::string>& out) {
  return out ? *out + ".manifest.json" : "mmqpt_" + command + ".manifest.json";
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mode-mismatch model of a post-selected linear-optical CNOT gate", "mmqpt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  std::optional<std::string> manifest;
  auto add_manifest = [&](CLI::App* sub) {
    sub->add_option("--manifest", manifest, "Run manifest path (default: <out>.manifest.json)");
  };
  const std::vector<std::string> bases{"z", "x"};

  SimulateArgs sim;
  auto* s_sim = app.add_subcommand("simulate", "Conditional outcome probabilities for one input");
  auto* src = s_sim->add_option("--circuit", sim.circuit, "Circuit DSL file");
  s_sim->add_option("--builtin", sim.builtin, "Builtin circuit (cnot)")->excludes(src);
  s_sim->add_option("--tau", sim.tau, "Comma-separated tau values")->required()->allow_extra_args(false);
  s_sim->add_option("--input", sim.input, "Input label, e.g. 10, +-, 0R")->required();
  s_sim->add_option("--basis", sim.basis, "Measurement basis")->check(CLI::IsMember(bases));
  s_sim->add_option("--format", sim.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  s_sim->add_option("--out", sim.out, "Output file (default: stdout)");
  add_manifest(s_sim);

  FitArgs fa;
  auto* s_fit = app.add_subcommand("fit", "Fit tau parameters to a measurement matrix");
  s_fit->add_option("data", fa.data, "Measurement matrix CSV")->required();
  s_fit->add_option("--mode", fa.mode, "global or per-input")->check(CLI::IsMember({"global", "per-input"}));
  s_fit->add_option("--seed", fa.seed, std::string("RNG seed (fallback: $") + kSeedEnv + ", then 0)");
  s_fit->add_option("--restarts", fa.restarts, "Random restarts");
  s_fit->add_option("--bound", fa.bound, "Box bound |tau_i| <= bound");
  s_fit->add_option("--tolerance", fa.tolerance, "Simplex diameter tolerance");
  s_fit->add_option("--max-iterations", fa.max_iterations, "Simplex iterations per run");
  s_fit->add_option("--polish-rounds", fa.polish_rounds, "Simplex restarts from each optimum");
  s_fit->add_option("--mask", fa.mask, "full or computational")->check(CLI::IsMember({"full", "computational"}));
  s_fit->add_option("--out", fa.out, "FitResult JSON file (default: stdout)");
  add_manifest(s_fit);

  QptArgs qa;
  auto* s_qpt = app.add_subcommand("qpt", "Process tomography of the gate model");
  auto* q_tau = s_qpt->add_option("--tau", qa.tau, "Comma-separated tau values");
  auto* q_fit = s_qpt->add_option("--fit-result", qa.fit_result, "Global FitResult JSON");
  q_tau->excludes(q_fit);
  s_qpt->add_option("--inputs", qa.inputs, "standard (16) or overcomplete (36)")
      ->check(CLI::IsMember({"standard", "overcomplete"}));
  s_qpt->add_option("--out", qa.out, "chi JSON file");
  add_manifest(s_qpt);

  FidelityArgs fid;
  auto* s_fid = app.add_subcommand("fidelity", "Process fidelity of two chi JSON files");
  s_fid->add_option("first", fid.first, "chi JSON")->required();
  s_fid->add_option("second", fid.second, "chi JSON")->required();
  add_manifest(s_fid);

  SynthArgs sa;
  auto* s_syn = app.add_subcommand("synth", "Synthetic measurement matrix with counting noise");
  s_syn->add_option("--tau", sa.tau, "Comma-separated tau values")->required();
  s_syn->add_option("--counts", sa.counts, "Counts per (input, basis) block");
  s_syn->add_option("--seed", sa.seed, std::string("RNG seed (fallback: $") + kSeedEnv + ", then 0)");
  s_syn->add_option("--out", sa.out, "CSV file (default: stdout)");
  add_manifest(s_syn);

  SweepArgs sw;
  auto* s_swp = app.add_subcommand("sweep", "Process fidelity along a line in tau space");
  s_swp->add_option("--tau", sw.tau, "Base tau values")->required();
  s_swp->add_option("--component", sw.component, "Vary only this component (1-5); default scales all");
  s_swp->add_option("--from", sw.from, "First grid value");
  s_swp->add_option("--to", sw.to, "Last grid value");
  s_swp->add_option("--steps", sw.steps, "Grid points");
  s_swp->add_option("--out", sw.out, "CSV file (default: stdout)");
  add_manifest(s_swp);

  std::string replay_path;
  auto* s_rep = app.add_subcommand("replay", "Re-run a manifest and compare outputs");
  s_rep->add_option("manifest_file", replay_path, "Run manifest")->required();
  add_manifest(s_rep);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "mmqpt: usage error: " << e.what() << "\n";
    return kUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  Run run;
  try {
    std::optional<std::string> primary_out;
    if (s_sim->parsed()) {
      run.command = "simulate";
      primary_out = sim.out;
      cmd_simulate(sim, run);
    } else if (s_fit->parsed()) {
      run.command = "fit";
      primary_out = fa.out;
      cmd_fit(fa, run);
    } else if (s_qpt->parsed()) {
      run.command = "qpt";
      primary_out = qa.out;
      if (!qa.tau && !qa.fit_result) throw UsageError("qpt needs --tau or --fit-result");
      cmd_qpt(qa, run);
    } else if (s_fid->parsed()) {
      run.command = "fidelity";
      cmd_fidelity(fid, run);
    } else if (s_syn->parsed()) {
      run.command = "synth";
      primary_out = sa.out;
      cmd_synth(sa, run);
    } else if (s_swp->parsed()) {
      run.command = "sweep";
      primary_out = sw.out;
      cmd_sweep(sw, run);
    } else {
      return detail::replay(replay_path, manifest, out, err);
    }

    const std::string printed = run.out.str();
    out << printed;
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    Json m{{"tool", "mmqpt"},
           {"version", kVersion},
           {"command", run.command},
           {"argv", args},
           {"resolved_argv", detail::resolved_argv(args, run)},
           {"config", run.config},
           {"seed", run.seed ? Json(run.seed->value) : Json(nullptr)},
           {"seed_source", run.seed ? Json(run.seed->source) : Json(nullptr)},
           {"inputs", run.inputs},
           {"outputs", run.outputs},
           {"stdout_fnv1a64", digest(printed)},
           {"working_directory", std::filesystem::current_path().string()},
           {"started_at", utc_timestamp()},
           {"wall_time_seconds", seconds}};
    write_file(manifest.value_or(detail::default_manifest(run.command, primary_out)), m.dump(2) + "\n");
    return kOk;
  } catch (const UsageError& e) {
    err << "mmqpt: usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "mmqpt: I/O error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const ValidationError& e) {
    err << "mmqpt: invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const NumericalError& e) {
    err << "mmqpt: numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "mmqpt: error: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace mmqpt::cli
