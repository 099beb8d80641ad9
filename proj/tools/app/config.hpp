#pragma once

#include "iondfs/decoherence.hpp"
#include "iondfs/modes.hpp"
#include "iondfs/schedule.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace iondfs::app {

enum class Command { Modes, Design, Simulate, NoiseScan, Refocus, ThermalScan };

std::string to_string(Command c);
Command parse_command(const std::string& text);

enum class OutputFormat { Csv, Json, Both };

/// Flat INI configuration. See README for the grammar and every key.
struct RunConfig {
  Command command = Command::Simulate;

  // [array]
  std::size_t n_ions = 2;
  double omega0 = 0.0;
  double kappa = 0.0;
  double spacing = 1.0;
  double mass = 1.0;
  Topology topology = Topology::Chain;
  CouplingRange range = CouplingRange::NearestNeighbor;

  // [pulse]
  PulseShape shape = PulseShape::SmoothBump;
  std::optional<double> amplitude;
  std::optional<double> target_phase;
  std::size_t periods = 100;  // total duration in periods of the slowest mode
  std::size_t cycles = 1;
  std::vector<std::size_t> targets{0, 1};
  std::vector<PauliAxis> axes{PauliAxis::Z, PauliAxis::Z};
  std::vector<double> weights{1.0, 1.0};  // amplitude route only
  std::size_t sideband_modes = 0;         // 0: every mode
  std::size_t refocus_levels = 1;

  // [space]
  std::size_t fock_cutoff = 10;
  std::size_t steps = 0;
  std::vector<std::size_t> fock_states{0, 1, 2};

  // [noise]
  DephasingModel noise;
  std::vector<double> sigma_grid;  // noise-scan; empty: noise.sigma alone

  // [output]
  std::string directory = ".";
  std::string prefix;  // empty: the command name
  OutputFormat format = OutputFormat::Both;
  bool metadata = false;

  IonArrayConfig array() const;
};

/// Parses INI text, then applies `overrides` ("section.key=value"). Throws
/// Error(ConfigError) naming the offending key.
RunConfig parse_config(std::istream& in, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace iondfs::app
