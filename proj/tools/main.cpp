// Command-line front end: configures experiments, runs them through the
// spinsim core library, and writes CSV results with JSON manifests.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "output.hpp"
#include "spinsim/ensemble.hpp"
#include "spinsim/evolve.hpp"
#include "spinsim/protocols.hpp"
#include "spinsim/spectral.hpp"

namespace {

using nlohmann::json;
using namespace spinsim;
using cli::format_value;
using cli::OutputWriter;
using cli::Table;

constexpr int kMaxSites = 20;

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit fit;
  const std::size_t n = x.size();
  if (n < 2) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double dn = static_cast<double>(n);
  const double den = dn * sxx - sx * sx;
  if (den == 0.0) return fit;
  fit.slope = (dn * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / dn;
  const double ss_res_den = (dn * syy - sy * sy);
  fit.r2 = ss_res_den > 0.0 ? (dn * sxy - sx * sy) * (dn * sxy - sx * sy) /
                                  (den * ss_res_den)
                            : 1.0;
  return fit;
}

/// Flags shared by every subcommand that runs dynamics.
struct RunOptions {
  int n = 10;
  double ramp_time = 0.0;
  double dt = 0.01;
  std::string backend = "auto";
  double delta = 0.0;
  double eta = 0.0;
  double bnuc = 0.0;
  int realizations = 100;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out_dir = ".";
  bool emit_plot = false;
  std::string stem;
  double t_end = -1.0;
  int observe_every = 1;
};

Backend parse_backend(const std::string& name) {
  if (name == "dense") return Backend::Dense;
  if (name == "krylov") return Backend::Krylov;
  return Backend::Auto;
}

Payload parse_payload(const std::string& name) {
  if (name == "singlet") return Payload::Singlet;
  if (name == "superposition") return Payload::Superposition;
  return Payload::Triplet;
}

PropagatorConfig make_config(const RunOptions& opt) {
  PropagatorConfig cfg;
  cfg.backend = parse_backend(opt.backend);
  cfg.dt = opt.dt;
  cfg.observe_every = opt.observe_every;
  return cfg;
}

json disorder_json(const DisorderSpec& d) {
  return json{{"delta", d.delta},
              {"eta", d.eta},
              {"b_nuc", d.b_nuc},
              {"n_realizations", d.n_realizations},
              {"master_seed", d.master_seed}};
}

void add_run_flags(CLI::App* cmd, RunOptions& opt, bool with_disorder = true) {
  cmd->add_option("--n", opt.n, "number of sites (even)");
  cmd->add_option("--dt", opt.dt, "integration step (units 1/J)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--backend", opt.backend, "propagation backend")
      ->check(CLI::IsMember({"auto", "dense", "krylov"}));
  if (with_disorder) {
    cmd->add_option("--delta", opt.delta, "static exchange disorder half-width")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--eta", opt.eta, "white coupling-noise strength")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--bnuc", opt.bnuc, "random-field standard deviation")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--realizations", opt.realizations,
                    "disorder realizations per ensemble")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt.seed, "master seed");
    cmd->add_option("--workers", opt.workers,
                    "worker threads (0 = hardware)");
  }
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_flag("--emit-plot", opt.emit_plot, "also write a gnuplot script");
  cmd->add_option("--stem", opt.stem,
                  "output file stem (default: <command>-<timestamp>)");
  cmd->add_option("--observe-every", opt.observe_every,
                  "trajectory sampling stride in steps")
      ->check(CLI::PositiveNumber);
}

void require_even_n(int n) {
  if (n < 4 || n % 2 != 0) {
    throw CLI::ValidationError("--n must be an even number of at least 4");
  }
  if (n > kMaxSites) {
    throw CLI::ValidationError("--n must be at most " + std::to_string(kMaxSites));
  }
}

std::string trajectory_plot(const std::string& csv, const std::string& ylabel) {
  std::string s;
  s += "set datafile separator ','\n";
  s += "set xlabel 'Jt'\n";
  s += "set ylabel '" + ylabel + "'\n";
  s += "set yrange [0:1.05]\n";
  s += "set grid\n";
  s += "plot '" + csv + "' skip 1 using 1:2 with lines title '" + ylabel + "'\n";
  return s;
}

// ---------------------------------------------------------------- gap ----

int cmd_gap(const std::vector<int>& n_values, const std::string& mode,
            const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  OutputWriter writer(opt.out_dir, cli::make_stem("gap", opt.stem));
  try {
    Table table;
    table.header = {"N", "inv_N", "gap", "status"};
    std::vector<double> xs, ys;
    for (int n : n_values) {
      std::vector<std::string> row{std::to_string(n),
                                   format_value(n > 0 ? 1.0 / n : 0.0), "", ""};
      try {
        if (n < 4 || n % 2 != 0) {
          throw std::invalid_argument("N must be even and at least 4");
        }
        if (n > kMaxSites) {
          throw std::invalid_argument("N above configured maximum " +
                                      std::to_string(kMaxSites));
        }
        auto basis = build_basis(n, 0);
        CouplingProfile profile;
        profile.j.assign(static_cast<std::size_t>(n - 1), 1.0);
        if (mode == "dimerized") {
          for (int k = 2; k <= n - 1; k += 2) profile.j[k - 1] = 0.0;
        }
        const SparseOperator h =
            build_hamiltonian(basis, profile, FieldConfig::zeros(n));
        const double gap = energy_gap(h);
        row[2] = format_value(gap);
        row[3] = "ok";
        xs.push_back(1.0 / n);
        ys.push_back(gap);
      } catch (const std::exception& e) {
        row[3] = std::string("error: ") + e.what();
      }
      table.rows.push_back(std::move(row));
    }
    writer.write_csv(table);

    json params{{"n", n_values}, {"mode", mode}};
    if (mode == "uniform" && xs.size() >= 2) {
      const LinearFit fit = fit_line(xs, ys);
      params["fit"] = json{{"slope", fit.slope},
                           {"intercept", fit.intercept},
                           {"r2", fit.r2}};
      std::cout << "gap fit vs 1/N: slope=" << format_value(fit.slope)
                << " intercept=" << format_value(fit.intercept)
                << " r2=" << format_value(fit.r2) << "\n";
    }
    if (opt.emit_plot) {
      std::string plot;
      plot += "set datafile separator ','\n";
      plot += "set xlabel '1/N'\nset ylabel 'gap (J)'\nset grid\n";
      plot += "plot '" + writer.csv_path().filename().string() +
              "' skip 1 using 2:3 with points pt 7 title 'gap'\n";
      writer.write_gnuplot(plot);
    }
    const double dur = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    writer.write_manifest("gap", params, 0, dur);
    std::cout << "wrote " << writer.csv_path().string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    writer.discard();
    std::cerr << "gap: " << e.what() << "\n";
    return 1;
  }
}

// ------------------------------------------------- prepare / transfer ----

int run_protocol_command(const std::string& command, RampKind kind,
                         Payload payload, const RunOptions& opt,
                         bool ensemble_requested) {
  const auto t0 = std::chrono::steady_clock::now();
  OutputWriter writer(opt.out_dir, cli::make_stem(command, opt.stem));
  try {
    require_even_n(opt.n);
    if (!(opt.ramp_time > 0.0)) {
      throw CLI::ValidationError("--ramp-time must be positive");
    }
    const bool any_disorder =
        opt.delta > 0.0 || opt.eta > 0.0 || opt.bnuc > 0.0;
    const bool ensemble = any_disorder || ensemble_requested;
    const PropagatorConfig cfg = make_config(opt);

    ProtocolSpec protocol{kind, opt.n, opt.ramp_time, payload, opt.t_end};
    DisorderSpec disorder;
    disorder.delta = opt.delta;
    disorder.eta = opt.eta;
    disorder.b_nuc = opt.bnuc;
    disorder.n_realizations = ensemble ? opt.realizations : 1;
    disorder.master_seed = opt.seed;

    json params{{"command", command},
                {"n", opt.n},
                {"ramp_time", opt.ramp_time},
                {"dt", opt.dt},
                {"backend", opt.backend},
                {"t_end", protocol.resolved_t_end()},
                {"payload", command == "transfer"
                                ? (payload == Payload::Singlet ? "singlet"
                                   : payload == Payload::Triplet
                                       ? "triplet"
                                       : "superposition")
                                : "none"},
                {"disorder", disorder_json(disorder)},
                {"mode", ensemble ? "ensemble" : "single"}};

    const char* flabel = kind == RampKind::GroundPrep ? "F_g" : "F_c";
    if (ensemble) {
      const EnsembleStats stats =
          run_ensemble(protocol, disorder, cfg, opt.workers);
      Table table;
      table.header = {"eta", "delta", "b_nuc", "mean", "std_error"};
      table.rows.push_back({format_value(disorder.eta),
                            format_value(disorder.delta),
                            format_value(disorder.b_nuc),
                            format_value(stats.mean_fidelity),
                            format_value(stats.std_error)});
      writer.write_csv(table);
      params["mean_fidelity"] = stats.mean_fidelity;
      params["std_error"] = stats.std_error;
      if (kind == RampKind::Transfer) {
        params["mean_peak"] = stats.mean_peak;
        params["peak_std_error"] = stats.peak_std_error;
      }
      std::cout << command << ": mean " << flabel << "(T)="
                << format_value(stats.mean_fidelity)
                << " se=" << format_value(stats.std_error) << " over "
                << disorder.n_realizations << " realizations\n";
    } else {
      auto basis = build_basis(opt.n, 0);
      const ProtocolStates states = protocol_states(basis, kind, payload);
      const RampSchedule schedule{kind, opt.n, opt.ramp_time, 1.0};
      DisorderRealization clean;
      const Trajectory traj =
          run_protocol(states.initial, schedule, clean, states.target, cfg,
                       protocol.resolved_t_end());
      Table table;
      table.header = {"Jt", flabel};
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        table.rows.push_back(
            {format_value(traj.times[i]), format_value(traj.fidelities[i])});
      }
      writer.write_csv(table);
      params["fidelity_at_T"] = traj.fidelity_at_ramp_end;
      params["peak_fidelity"] = traj.peak_fidelity;
      params["peak_time"] = traj.peak_time;
      std::cout << command << ": " << flabel << "(T)="
                << format_value(traj.fidelity_at_ramp_end);
      if (protocol.resolved_t_end() > opt.ramp_time) {
        std::cout << " peak=" << format_value(traj.peak_fidelity) << " at Jt="
                  << format_value(traj.peak_time);
      }
      std::cout << "\n";
      if (opt.emit_plot) {
        writer.write_gnuplot(
            trajectory_plot(writer.csv_path().filename().string(), flabel));
      }
    }
    const double dur = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    writer.write_manifest(command, params, disorder.master_seed, dur);
    std::cout << "wrote " << writer.csv_path().string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    writer.discard();
    std::cerr << command << ": " << e.what() << "\n";
    return 1;
  }
}

// --------------------------------------------------------------- tmin ----

int cmd_tmin(const std::vector<int>& n_values, const std::string& protocol,
             double threshold, double resolution, double t_max,
             const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  OutputWriter writer(opt.out_dir, cli::make_stem("tmin", opt.stem));
  try {
    const RampKind kind =
        protocol == "transfer" ? RampKind::Transfer : RampKind::GroundPrep;
    Table table;
    table.header = {"N", "N_squared", "JT_min", "status"};
    std::vector<double> xs, ys;
    for (int n : n_values) {
      std::vector<std::string> row{std::to_string(n),
                                   std::to_string(n * n), "", ""};
      try {
        if (n < 4 || n % 2 != 0) {
          throw std::invalid_argument("N must be even and at least 4");
        }
        if (n > kMaxSites) {
          throw std::invalid_argument("N above configured maximum " +
                                      std::to_string(kMaxSites));
        }
        TminOptions topt;
        topt.t_max = t_max;
        topt.prop.dt = opt.dt > 0.0 ? std::max(opt.dt, 0.02) : 0.02;
        topt.prop.backend = parse_backend(opt.backend);
        const double tmin = find_tmin(kind, n, threshold, resolution, topt);
        row[2] = format_value(tmin);
        row[3] = "ok";
        xs.push_back(static_cast<double>(n) * n);
        ys.push_back(tmin);
        std::cout << "tmin " << protocol << " N=" << n << ": JT_min="
                  << format_value(tmin) << "\n";
      } catch (const std::exception& e) {
        row[3] = std::string("error: ") + e.what();
      }
      table.rows.push_back(std::move(row));
    }
    writer.write_csv(table);
    json params{{"n", n_values},
                {"protocol", protocol},
                {"threshold", threshold},
                {"resolution", resolution},
                {"t_max", t_max}};
    if (xs.size() >= 2) {
      const LinearFit fit = fit_line(xs, ys);
      params["fit"] = json{{"slope", fit.slope},
                           {"intercept", fit.intercept},
                           {"r2", fit.r2}};
      std::cout << "JT_min fit vs N^2: slope=" << format_value(fit.slope)
                << " intercept=" << format_value(fit.intercept)
                << " r2=" << format_value(fit.r2) << "\n";
    }
    if (opt.emit_plot) {
      std::string plot;
      plot += "set datafile separator ','\n";
      plot += "set xlabel 'N^2'\nset ylabel 'J T_min'\nset grid\n";
      plot += "plot '" + writer.csv_path().filename().string() +
              "' skip 1 using 2:3 with linespoints pt 7 title 'J T_min'\n";
      writer.write_gnuplot(plot);
    }
    const double dur = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    writer.write_manifest("tmin", params, 0, dur);
    std::cout << "wrote " << writer.csv_path().string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    writer.discard();
    std::cerr << "tmin: " << e.what() << "\n";
    return 1;
  }
}

// ---------------------------------------------------------- timescale ----

/// Pulls JT_min for a given N out of a CSV previously written by `tmin`.
double lookup_tmin(const std::string& csv_file, int n) {
  std::ifstream in(csv_file);
  if (!in) {
    throw std::runtime_error("cannot open " + csv_file);
  }
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
      line.pop_back();
    }
    if (first) {  // header row
      first = false;
      continue;
    }
    std::istringstream ss(line);
    std::string n_field, n2_field, jt_field;
    if (!std::getline(ss, n_field, ',') || !std::getline(ss, n2_field, ',') ||
        !std::getline(ss, jt_field, ',')) {
      continue;
    }
    try {
      if (std::stoi(n_field) == n && !jt_field.empty()) {
        return std::stod(jt_field);
      }
    } catch (const std::exception&) {
      continue;
    }
  }
  throw std::runtime_error("no JT_min row for N=" + std::to_string(n) +
                           " in " + csv_file);
}

int cmd_timescale(double j_hz, double jt, const std::string& tmin_csv, int n,
                  const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  OutputWriter writer(opt.out_dir, cli::make_stem("timescale", opt.stem));
  try {
    if (!(j_hz > 0.0)) {
      throw CLI::ValidationError("--j-hz must be positive");
    }
    if (!tmin_csv.empty()) {
      jt = lookup_tmin(tmin_csv, n);
    }
    if (!(jt > 0.0)) {
      throw CLI::ValidationError("--jt must be positive (or pass --tmin-csv)");
    }
    const double seconds = jt / j_hz;
    Table table;
    table.header = {"J_Hz", "JT", "time_seconds", "time_nanoseconds"};
    table.rows.push_back({format_value(j_hz), format_value(jt),
                          format_value(seconds), format_value(seconds * 1e9)});
    writer.write_csv(table);
    std::cout << "JT=" << format_value(jt) << " at J=" << format_value(j_hz)
              << " Hz -> " << format_value(seconds * 1e9) << " ns\n";
    json params{{"j_hz", j_hz}, {"jt", jt}, {"seconds", seconds}};
    const double dur = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    writer.write_manifest("timescale", params, 0, dur);
    std::cout << "wrote " << writer.csv_path().string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    writer.discard();
    std::cerr << "timescale: " << e.what() << "\n";
    return 1;
  }
}

// -------------------------------------------------------------- sweep ----

int cmd_sweep(const std::string& protocol, const std::string& payload_name,
              std::vector<double> deltas, std::vector<double> etas,
              std::vector<double> bnucs, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  OutputWriter writer(opt.out_dir, cli::make_stem("sweep", opt.stem));
  try {
    require_even_n(opt.n);
    if (!(opt.ramp_time > 0.0)) {
      throw CLI::ValidationError("--ramp-time must be positive");
    }
    if (deltas.empty()) deltas = {0.0};
    if (etas.empty()) etas = {0.0};
    if (bnucs.empty()) bnucs = {0.0};
    const RampKind kind =
        protocol == "transfer" ? RampKind::Transfer : RampKind::GroundPrep;
    const Payload payload = parse_payload(payload_name);
    const PropagatorConfig cfg = make_config(opt);

    Table table;
    table.header = {"eta", "delta", "b_nuc", "mean", "std_error"};
    for (double bnuc : bnucs) {
      for (double delta : deltas) {
        for (double eta : etas) {
          ProtocolSpec prot{kind, opt.n, opt.ramp_time, payload, opt.t_end};
          DisorderSpec dis;
          dis.delta = delta;
          dis.eta = eta;
          dis.b_nuc = bnuc;
          dis.n_realizations = opt.realizations;
          dis.master_seed = opt.seed;
          const EnsembleStats stats = run_ensemble(prot, dis, cfg, opt.workers);
          table.rows.push_back(
              {format_value(eta), format_value(delta), format_value(bnuc),
               format_value(stats.mean_fidelity),
               format_value(stats.std_error)});
          std::cout << "sweep eta=" << format_value(eta)
                    << " delta=" << format_value(delta)
                    << " b_nuc=" << format_value(bnuc) << ": mean="
                    << format_value(stats.mean_fidelity)
                    << " se=" << format_value(stats.std_error) << "\n";
        }
      }
    }
    writer.write_csv(table);
    json params{{"protocol", protocol}, {"payload", payload_name},
                {"n", opt.n},           {"ramp_time", opt.ramp_time},
                {"dt", opt.dt},         {"delta", deltas},
                {"eta", etas},          {"b_nuc", bnucs},
                {"realizations", opt.realizations},
                {"t_end", opt.t_end}};
    if (opt.emit_plot) {
      std::string plot;
      plot += "set datafile separator ','\n";
      plot += "set xlabel 'eta'\nset ylabel 'mean fidelity'\nset grid\n";
      plot += "plot '" + writer.csv_path().filename().string() +
              "' skip 1 using 1:4 with linespoints pt 7 title 'mean'\n";
      writer.write_gnuplot(plot);
    }
    const double dur = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    writer.write_manifest("sweep", params, opt.seed, dur);
    std::cout << "wrote " << writer.csv_path().string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    writer.discard();
    std::cerr << "sweep: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic protocols on open Heisenberg spin-1/2 chains"};
  app.require_subcommand(1);
  app.set_config("--config", "", "plain-text key=value config file");
  app.allow_config_extras(CLI::config_extras_mode::ignore_all);

  // gap
  RunOptions gap_opt;
  std::vector<int> gap_n;
  std::string gap_mode = "dimerized";
  auto* gap_cmd = app.add_subcommand("gap", "energy gap of the chain");
  gap_cmd->add_option("--n", gap_n, "site counts (repeatable)");
  gap_cmd->add_option("--mode", gap_mode, "coupling pattern")
      ->check(CLI::IsMember({"dimerized", "uniform"}));
  gap_cmd->add_option("--out", gap_opt.out_dir, "output directory");
  gap_cmd->add_flag("--emit-plot", gap_opt.emit_plot, "write a gnuplot script");
  gap_cmd->add_option("--stem", gap_opt.stem, "output file stem");

  // prepare
  RunOptions prep_opt;
  auto* prep_cmd =
      app.add_subcommand("prepare", "adiabatic ground-state preparation");
  add_run_flags(prep_cmd, prep_opt);
  auto* prep_ramp =
      prep_cmd->add_option("--ramp-time", prep_opt.ramp_time, "ramp time T (1/J)");
  auto* prep_real_opt = prep_cmd->get_option("--realizations");
  prep_cmd->add_option("--t-end", prep_opt.t_end,
                       "simulation end time (default: T)");

  // transfer
  RunOptions tr_opt;
  std::string tr_payload = "triplet";
  auto* tr_cmd = app.add_subcommand("transfer", "adiabatic pair-state transfer");
  add_run_flags(tr_cmd, tr_opt);
  auto* tr_ramp =
      tr_cmd->add_option("--ramp-time", tr_opt.ramp_time, "ramp time T (1/J)");
  tr_cmd->add_option("--payload", tr_payload, "pair state to transfer")
      ->check(CLI::IsMember({"singlet", "triplet", "superposition"}));
  auto* tr_real_opt = tr_cmd->get_option("--realizations");
  tr_cmd->add_option("--t-end", tr_opt.t_end,
                     "simulation end time (default: T + 5/J)");

  // tmin
  RunOptions tmin_opt;
  std::vector<int> tmin_n;
  std::string tmin_protocol = "prepare";
  double tmin_threshold = 0.99;
  double tmin_resolution = 0.05;
  double tmin_tmax = 400.0;
  auto* tmin_cmd =
      app.add_subcommand("tmin", "minimal ramp time reaching a fidelity threshold");
  tmin_cmd->add_option("--n", tmin_n, "site counts (repeatable)");
  tmin_cmd->add_option("--protocol", tmin_protocol, "which protocol")
      ->check(CLI::IsMember({"prepare", "transfer"}));
  tmin_cmd->add_option("--threshold", tmin_threshold, "fidelity threshold");
  tmin_cmd->add_option("--resolution", tmin_resolution, "ramp-time resolution");
  tmin_cmd->add_option("--t-max", tmin_tmax, "give up above this ramp time");
  tmin_cmd->add_option("--dt", tmin_opt.dt, "integration step");
  tmin_cmd->add_option("--backend", tmin_opt.backend, "propagation backend")
      ->check(CLI::IsMember({"auto", "dense", "krylov"}));
  tmin_cmd->add_option("--out", tmin_opt.out_dir, "output directory");
  tmin_cmd->add_flag("--emit-plot", tmin_opt.emit_plot, "write a gnuplot script");
  tmin_cmd->add_option("--stem", tmin_opt.stem, "output file stem");

  // timescale
  RunOptions ts_opt;
  double ts_jhz = 0.0;
  double ts_jt = 0.0;
  std::string ts_csv;
  int ts_n = 0;
  auto* ts_cmd = app.add_subcommand(
      "timescale", "convert a dimensionless JT to physical time");
  ts_cmd->add_option("--j-hz", ts_jhz, "exchange coupling J in Hz")->required();
  ts_cmd->add_option("--jt", ts_jt, "dimensionless ramp time JT");
  ts_cmd->add_option("--tmin-csv", ts_csv,
                     "look JT up in a CSV written by the tmin command");
  ts_cmd->add_option("--n", ts_n, "site count selecting the CSV row");
  ts_cmd->add_option("--out", ts_opt.out_dir, "output directory");
  ts_cmd->add_option("--stem", ts_opt.stem, "output file stem");

  // sweep
  RunOptions sweep_opt;
  std::string sweep_protocol = "prepare";
  std::string sweep_payload = "triplet";
  std::vector<double> sweep_delta, sweep_eta, sweep_bnuc;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "disorder-strength grid of ensembles (cartesian product)");
  sweep_cmd->add_option("--protocol", sweep_protocol, "which protocol")
      ->check(CLI::IsMember({"prepare", "transfer"}));
  sweep_cmd->add_option("--payload", sweep_payload, "pair state for transfer")
      ->check(CLI::IsMember({"singlet", "triplet", "superposition"}));
  sweep_cmd->add_option("--n", sweep_opt.n, "number of sites (even)");
  sweep_cmd->add_option("--ramp-time", sweep_opt.ramp_time, "ramp time T (1/J)");
  sweep_cmd->add_option("--dt", sweep_opt.dt, "integration step")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--backend", sweep_opt.backend, "propagation backend")
      ->check(CLI::IsMember({"auto", "dense", "krylov"}));
  sweep_cmd->add_option("--delta", sweep_delta, "static disorder values");
  sweep_cmd->add_option("--eta", sweep_eta, "white-noise values");
  sweep_cmd->add_option("--bnuc", sweep_bnuc, "random-field values");
  sweep_cmd->add_option("--realizations", sweep_opt.realizations,
                        "realizations per grid point")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sweep_opt.seed, "master seed");
  sweep_cmd->add_option("--workers", sweep_opt.workers, "worker threads");
  sweep_cmd->add_option("--t-end", sweep_opt.t_end, "simulation end time");
  sweep_cmd->add_option("--out", sweep_opt.out_dir, "output directory");
  sweep_cmd->add_flag("--emit-plot", sweep_opt.emit_plot,
                      "write a gnuplot script");
  sweep_cmd->add_option("--stem", sweep_opt.stem, "output file stem");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gap_cmd->parsed()) return cmd_gap(gap_n, gap_mode, gap_opt);
    if (prep_cmd->parsed()) {
      if (prep_ramp->count() == 0) {
        std::cerr << "prepare: --ramp-time is required\n";
        return 1;
      }
      const bool ensemble_requested =
          prep_real_opt->count() > 0 && prep_opt.realizations > 1;
      return run_protocol_command("prepare", RampKind::GroundPrep,
                                  Payload::Triplet, prep_opt,
                                  ensemble_requested);
    }
    if (tr_cmd->parsed()) {
      if (tr_ramp->count() == 0) {
        std::cerr << "transfer: --ramp-time is required\n";
        return 1;
      }
      const bool ensemble_requested =
          tr_real_opt->count() > 0 && tr_opt.realizations > 1;
      return run_protocol_command("transfer", RampKind::Transfer,
                                  parse_payload(tr_payload), tr_opt,
                                  ensemble_requested);
    }
    if (tmin_cmd->parsed()) {
      return cmd_tmin(tmin_n, tmin_protocol, tmin_threshold, tmin_resolution,
                      tmin_tmax, tmin_opt);
    }
    if (ts_cmd->parsed()) {
      return cmd_timescale(ts_jhz, ts_jt, ts_csv, ts_n, ts_opt);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(sweep_protocol, sweep_payload, sweep_delta, sweep_eta,
                       sweep_bnuc, sweep_opt);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
