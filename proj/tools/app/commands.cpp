#include "app/commands.hpp"

#include "iondfs/decoherence.hpp"
#include "iondfs/dfs.hpp"
#include "iondfs/dynamics.hpp"
#include "iondfs/hilbert.hpp"
#include "iondfs/modes.hpp"
#include "iondfs/pulse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace iondfs::app {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
      return 2;
    case ErrorCode::DimensionGuard:
    case ErrorCode::CutoffGuard:
    case ErrorCode::AdiabaticityViolated:
    case ErrorCode::ResolutionGuard:
    case ErrorCode::IncommensurateModes:
    case ErrorCode::LeakageAboveThreshold:
    case ErrorCode::RefocusPremiseViolated:
      return 4;
    default:
      return 3;
  }
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Cell integer(std::size_t v) { return static_cast<std::int64_t>(v); }

IonPair pair_of(const RunConfig& c) { return {c.targets[0], c.targets[1]}; }

HilbertSpace space_for(const RunConfig& c, const ModeSpectrum& modes) {
  return HilbertSpace::uniform(c.n_ions, modes.n_modes(), c.fock_cutoff);
}

PropagationOptions propagation_options(const RunConfig& c) {
  PropagationOptions o;
  o.steps = c.steps;
  return o;
}

LogicalEncoding encoding_for(const RunConfig& c) {
  if (c.n_ions % 2 != 0) {
    throw Error(ErrorCode::ConfigError, "array.n_ions: noise studies need an even number of ions");
  }
  return LogicalEncoding::adjacent_pairs(c.n_ions / 2);
}

Report modes_report(const RunConfig& c) {
  const auto modes = selected_modes(c);
  Report r;
  Table spectrum{"modes", {"k", "omega"}, {}, false};
  for (Eigen::Index k = 0; k < modes.frequencies.size(); ++k) {
    spectrum.rows.push_back({integer(static_cast<std::size_t>(k)), modes.frequencies(k)});
  }
  Table matrix{"mode_matrix", {"ion"}, {}, false};
  for (std::size_t k = 0; k < modes.n_modes(); ++k) matrix.columns.push_back("mode_" + std::to_string(k));
  for (Eigen::Index i = 0; i < modes.mode_matrix.rows(); ++i) {
    std::vector<Cell> row{integer(static_cast<std::size_t>(i))};
    for (Eigen::Index k = 0; k < modes.mode_matrix.cols(); ++k) row.emplace_back(modes.mode_matrix(i, k));
    matrix.rows.push_back(std::move(row));
  }
  r.tables = {std::move(spectrum), std::move(matrix)};
  r.summary = "modes: " + std::to_string(modes.n_modes()) + " modes, omega in [" + fmt(modes.min_frequency()) +
              ", " + fmt(modes.max_frequency()) + "]";
  return r;
}

Report design_report(const RunConfig& c) {
  const auto modes = selected_modes(c);
  const auto s = build_schedule(c, modes, c.periods, c.cycles);
  const auto phase = coupling_phase(s, modes, pair_of(c));
  Report r;
  Table design{"design",
               {"phase", "phase_adiabatic", "max_abs_eta", "adiabaticity", "amplitude", "duration", "cycles",
                "steps_per_cycle"},
               {},
               false};
  design.rows.push_back({phase.phase_total, phase.phase_adiabatic, phase.max_abs_eta(), phase.adiabaticity,
                         s.amplitude, s.duration, integer(s.cycles), integer(s.steps_per_cycle)});
  Table plot{"eta", {"t", "abs_eta"}, {}, true};
  const auto traj = eta_trajectory(s, modes.min_frequency());
  for (std::size_t i = 0; i < traj.times.size(); ++i) plot.rows.push_back({traj.times[i], std::abs(traj.eta[i])});
  Table record{"schedule", {"key", "value"}, {}, false};
  std::string text = to_record(s);
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    const std::string line = text.substr(start, end - start);
    start = end == std::string::npos ? text.size() : end + 1;
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) record.rows.push_back({line.substr(0, eq), line.substr(eq + 3)});
  }
  r.tables = {std::move(design), std::move(record), std::move(plot)};
  r.summary = "design: phi=" + fmt(phase.phase_total) + " amplitude=" + fmt(s.amplitude) +
              " max|eta|=" + fmt(phase.max_abs_eta());
  return r;
}

Report simulate_report(const RunConfig& c) {
  const auto modes = selected_modes(c);
  const auto s = build_schedule(c, modes, c.periods, c.cycles);
  const auto space = space_for(c, modes);
  const auto oracle = run_oracle(s, modes, space, pair_of(c), c.fock_states, propagation_options(c));
  Report r;
  Table t{"simulate", {"phase", "max_abs_eta", "global_phase", "steps", "step_change", "tail_population"}, {}, false};
  std::vector<Cell> row{oracle.phase.phase_total, oracle.phase.max_abs_eta(), oracle.phase.global_phase.value_or(0.0),
                        integer(oracle.propagation.steps), oracle.propagation.step_change,
                        oracle.propagation.tail_population};
  for (std::size_t i = 0; i < c.fock_states.size(); ++i) {
    t.columns.push_back("fidelity_n" + std::to_string(c.fock_states[i]));
    row.emplace_back(oracle.fidelities[i]);
  }
  const auto [lo, hi] = std::minmax_element(oracle.fidelities.begin(), oracle.fidelities.end());
  t.columns.push_back("fidelity_spread");
  row.emplace_back(*hi - *lo);
  t.rows.push_back(std::move(row));
  r.tables = {std::move(t)};
  r.summary = "simulate: phi=" + fmt(oracle.phase.phase_total) + " max|eta|=" + fmt(oracle.phase.max_abs_eta()) +
              " min fidelity=" + fmt(*lo);
  return r;
}

Report noise_scan_report(const RunConfig& c) {
  const auto modes = selected_modes(c);
  const auto s = build_schedule(c, modes, c.periods, c.cycles);
  const auto space = space_for(c, modes);
  const auto enc = encoding_for(c);
  std::vector<double> grid = c.sigma_grid;
  if (grid.empty()) grid.push_back(c.noise.sigma);
  Report r;
  Table t{"noise_scan", {"beta", "mean_infidelity", "std"}, {}, false};
  Table plot{"noise_scan_plot", {"beta", "mean_infidelity"}, {}, true};
  for (double sigma : grid) {
    DephasingModel model = c.noise;
    model.sigma = sigma;
    const auto report = noise_report(s, modes, space, enc, model, propagation_options(c));
    t.rows.push_back({sigma, report.mean_infidelity(), report.std_fidelity});
    plot.rows.push_back({sigma, report.mean_infidelity()});
  }
  r.summary = "noise-scan: " + std::to_string(grid.size()) + " sigma values, last mean infidelity=" +
              fmt(std::get<double>(t.rows.back()[1]));
  r.tables = {std::move(t), std::move(plot)};
  return r;
}

Report refocus_report(const RunConfig& c) {
  const auto modes = selected_modes(c);
  const std::size_t cycles = std::size_t{1} << c.refocus_levels;
  if (c.periods % cycles != 0) {
    throw Error(ErrorCode::ConfigError, "pulse.periods: must split evenly into " + std::to_string(cycles) + " cycles");
  }
  const auto single = build_schedule(c, modes, c.periods, 1);
  const auto refocused = build_schedule(c, modes, c.periods, cycles);
  const auto space = space_for(c, modes);
  const auto enc = encoding_for(c);
  const auto cmp = refocus_compare(single, refocused, modes, space, enc, c.noise, propagation_options(c));
  Report r;
  Table t{"refocus", {"cycles", "mean_infidelity", "std", "phase"}, {}, false};
  Table plot{"refocus_plot", {"cycles", "mean_infidelity"}, {}, true};
  for (const auto* rep : {&cmp.single, &cmp.refocused}) {
    t.rows.push_back({integer(rep->cycles), rep->mean_infidelity(), rep->std_fidelity, rep->phase});
    plot.rows.push_back({integer(rep->cycles), rep->mean_infidelity()});
  }
  Table m{"refocus_moments", {"eta_first", "eta_third", "sin_norm", "ratio"}, {}, false};
  m.rows.push_back({cmp.moments.first, cmp.moments.third, cmp.moments.sin_norm, cmp.ratio()});
  r.tables = {std::move(t), std::move(m), std::move(plot)};
  r.summary = "refocus: infidelity " + fmt(cmp.single.mean_infidelity()) + " (1 cycle) vs " +
              fmt(cmp.refocused.mean_infidelity()) + " (" + std::to_string(cycles) + " cycles), ratio " +
              fmt(cmp.ratio());
  return r;
}

Report thermal_report(const RunConfig& c) {
  const auto modes = selected_modes(c);
  const auto s = build_schedule(c, modes, c.periods, c.cycles);
  const auto space = space_for(c, modes);
  const auto scan = thermal_insensitivity_scan(s, modes, space, c.fock_states, {}, propagation_options(c));
  Report r;
  Table t{"thermal_scan", {"n", "fidelity"}, {}, false};
  Table plot{"thermal_scan_plot", {"n", "fidelity"}, {}, true};
  for (std::size_t i = 0; i < scan.fock_states.size(); ++i) {
    t.rows.push_back({integer(scan.fock_states[i]), scan.fidelities[i]});
    plot.rows.push_back({integer(scan.fock_states[i]), scan.fidelities[i]});
  }
  r.tables = {std::move(t), std::move(plot)};
  r.summary = "thermal-scan: " + std::to_string(scan.fock_states.size()) + " Fock states, spread=" + fmt(scan.spread);
  return r;
}

}  // namespace

ModeSpectrum selected_modes(const RunConfig& config) {
  const auto modes = analyze_modes(config.array());
  return config.sideband_modes == 0 ? modes : modes.lowest(config.sideband_modes);
}

ForceSchedule build_schedule(const RunConfig& c, const ModeSpectrum& modes, std::size_t periods,
                             std::size_t cycles) {
  if (periods % cycles != 0) throw Error(ErrorCode::ConfigError, "pulse.periods: must be a multiple of cycles");
  const std::size_t per_cycle = periods / cycles;
  const IonPair pair = pair_of(c);

  if (c.target_phase) {
    if (c.shape == PulseShape::SmoothBump) {
      if (cycles != 1) throw Error(ErrorCode::ConfigError, "pulse.cycles: smooth_bump designs a single cycle");
      if (c.axes[0] != c.axes[1]) throw Error(ErrorCode::ConfigError, "pulse.axes: smooth_bump uses one axis");
      return design_adiabatic_schedule(modes, pair, *c.target_phase, per_cycle, c.axes[0]);
    }
    if (!std::has_single_bit(cycles)) throw Error(ErrorCode::ConfigError, "pulse.cycles: must be a power of two");
    return design_refocused_schedule(modes, pair, *c.target_phase, per_cycle,
                                     static_cast<std::size_t>(std::countr_zero(cycles)), c.axes[0], c.axes[1]);
  }
  if (!c.amplitude) throw Error(ErrorCode::ConfigError, "pulse.target_phase: missing required key (or amplitude)");

  ForceSchedule s;
  s.shape = c.shape;
  s.amplitude = *c.amplitude;
  s.duration = static_cast<double>(per_cycle) * 2.0 * std::numbers::pi / modes.min_frequency();
  s.cycles = cycles;
  if (cycles > 1) {
    s.reversal.resize(cycles);
    for (std::size_t k = 0; k < cycles; ++k) s.reversal[k] = (std::popcount(k) % 2 == 0) ? 1 : -1;
  }
  s.targets = {{c.targets[0], c.axes[0], c.weights[0]}, {c.targets[1], c.axes[1], c.weights[1]}};
  s.steps_per_cycle = design_steps(modes, s.duration);
  s.validate();
  return s;
}

Report run_command(const RunConfig& config) {
  Report r;
  switch (config.command) {
    case Command::Modes:
      r = modes_report(config);
      break;
    case Command::Design:
      r = design_report(config);
      break;
    case Command::Simulate:
      r = simulate_report(config);
      break;
    case Command::NoiseScan:
      r = noise_scan_report(config);
      break;
    case Command::Refocus:
      r = refocus_report(config);
      break;
    case Command::ThermalScan:
      r = thermal_report(config);
      break;
  }
  r.command = config.command;
  return r;
}

}  // namespace iondfs::app
