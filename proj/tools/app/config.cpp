#include "app/config.hpp"

#include "iondfs/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace iondfs::app {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"", {"command"}},
      {"array", {"n_ions", "omega0", "kappa", "spacing", "mass", "topology", "range"}},
      {"pulse",
       {"shape", "amplitude", "target_phase", "periods", "cycles", "targets", "axes", "weights", "sideband_modes",
        "refocus_levels"}},
      {"space", {"fock_cutoff", "steps", "fock_states"}},
      {"noise", {"kind", "sigma_B", "samples", "seed", "sigma_grid", "bath_coupling", "bath_frequency", "bath_cutoff"}},
      {"output", {"directory", "prefix", "format", "metadata"}},
  };
  return keys;
}

[[noreturn]] void fail(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::ConfigError, key + ": " + why);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) fail(key, "expected a real number, got '" + text + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(key, "expected a non-negative integer, got '" + text + "'");
  return v;
}

std::size_t to_size(const std::string& key, const std::string& text) {
  return static_cast<std::size_t>(to_unsigned(key, text));
}

std::size_t to_positive(const std::string& key, const std::string& text) {
  const auto v = to_size(key, text);
  if (v == 0) fail(key, "must be positive");
  return v;
}

double to_positive_double(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (!(v > 0.0)) fail(key, "must be > 0");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  fail(key, "expected true or false, got '" + text + "'");
}

PauliAxis to_axis(const std::string& key, const std::string& text) {
  try {
    return parse_axis(text);
  } catch (const Error&) {
    fail(key, "expected x, y or z, got '" + text + "'");
  }
}

void apply_override(pt::ptree& tree, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos) fail(item, "override must look like section.key=value");
  const std::string path = trim(item.substr(0, eq));
  const std::string value = trim(item.substr(eq + 1));
  const auto dot = path.find('.');
  if (dot == std::string::npos) {
    tree.put(pt::ptree::path_type(path, '/'), value);
  } else {
    tree.put(pt::ptree::path_type(path.substr(0, dot) + "/" + path.substr(dot + 1), '/'), value);
  }
}

void check_known(const pt::ptree& tree) {
  const auto& keys = known_keys();
  for (const auto& [name, node] : tree) {
    if (node.empty() && node.data().empty() && keys.count(name) && !name.empty()) continue;
    if (node.empty()) {
      if (!keys.at("").count(name)) fail(name, "unknown key");
      continue;
    }
    const auto section = keys.find(name);
    if (section == keys.end() || name.empty()) fail(name, "unknown section");
    for (const auto& [key, child] : node) {
      if (!section->second.count(key)) fail(name + "." + key, "unknown key");
      if (!child.empty()) fail(name + "." + key, "nested values are not allowed");
    }
  }
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Modes:
      return "modes";
    case Command::Design:
      return "design";
    case Command::Simulate:
      return "simulate";
    case Command::NoiseScan:
      return "noise-scan";
    case Command::Refocus:
      return "refocus";
    case Command::ThermalScan:
      return "thermal-scan";
  }
  return "?";
}

Command parse_command(const std::string& text) {
  for (auto c : {Command::Modes, Command::Design, Command::Simulate, Command::NoiseScan, Command::Refocus,
                 Command::ThermalScan}) {
    if (to_string(c) == text) return c;
  }
  fail("command", "unknown command '" + text + "'");
}

IonArrayConfig RunConfig::array() const {
  IonArrayConfig cfg = IonArrayConfig::uniform(n_ions, omega0, kappa, spacing, mass);
  cfg.topology = topology;
  cfg.range = range;
  return cfg;
}

RunConfig parse_config(std::istream& in, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigError, "line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& item : overrides) apply_override(tree, item);
  check_known(tree);

  auto get = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
    const auto node = section.empty() ? tree.get_child_optional(pt::ptree::path_type(key, '/'))
                                      : tree.get_child_optional(pt::ptree::path_type(section + "/" + key, '/'));
    if (!node) return std::nullopt;
    return trim(node->data());
  };
  auto require = [&](const std::string& section, const std::string& key) {
    auto v = get(section, key);
    if (!v || v->empty()) fail(section + "." + key, "missing required key");
    return *v;
  };

  RunConfig c;
  if (auto v = get("", "command")) c.command = parse_command(*v);

  c.n_ions = to_positive("array.n_ions", require("array", "n_ions"));
  c.omega0 = to_positive_double("array.omega0", require("array", "omega0"));
  if (auto v = get("array", "kappa")) c.kappa = to_double("array.kappa", *v);
  if (auto v = get("array", "spacing")) c.spacing = to_positive_double("array.spacing", *v);
  if (auto v = get("array", "mass")) c.mass = to_positive_double("array.mass", *v);
  if (auto v = get("array", "topology")) {
    if (*v == "chain") {
      c.topology = Topology::Chain;
    } else if (*v == "ring") {
      c.topology = Topology::Ring;
    } else {
      fail("array.topology", "expected chain or ring, got '" + *v + "'");
    }
  }
  if (auto v = get("array", "range")) {
    if (*v == "nearest") {
      c.range = CouplingRange::NearestNeighbor;
    } else if (*v == "long") {
      c.range = CouplingRange::LongRange;
    } else {
      fail("array.range", "expected nearest or long, got '" + *v + "'");
    }
  }

  if (auto v = get("pulse", "shape")) {
    try {
      c.shape = parse_shape(*v);
    } catch (const Error&) {
      fail("pulse.shape", "unknown shape '" + *v + "'");
    }
    if (c.shape != PulseShape::SmoothBump && c.shape != PulseShape::Constant) {
      fail("pulse.shape", "the CLI designs smooth_bump or constant pulses only");
    }
  }
  if (auto v = get("pulse", "amplitude")) c.amplitude = to_double("pulse.amplitude", *v);
  if (auto v = get("pulse", "target_phase")) c.target_phase = to_double("pulse.target_phase", *v);
  if (c.amplitude && c.target_phase) fail("pulse.amplitude", "give either amplitude or target_phase, not both");
  if (auto v = get("pulse", "periods")) c.periods = to_positive("pulse.periods", *v);
  if (auto v = get("pulse", "cycles")) c.cycles = to_positive("pulse.cycles", *v);
  if (c.periods % c.cycles != 0) fail("pulse.periods", "must be a multiple of pulse.cycles");
  if (auto v = get("pulse", "targets")) {
    c.targets.clear();
    for (const auto& s : split_list(*v)) c.targets.push_back(to_size("pulse.targets", s));
  }
  if (c.targets.size() != 2) fail("pulse.targets", "exactly two target ions are required");
  if (c.targets[0] == c.targets[1]) fail("pulse.targets", "target ions must differ");
  for (auto t : c.targets) {
    if (t >= c.n_ions) fail("pulse.targets", "ion " + std::to_string(t) + " is not in the array");
  }
  if (auto v = get("pulse", "axes")) {
    c.axes.clear();
    for (const auto& s : split_list(*v)) c.axes.push_back(to_axis("pulse.axes", s));
    if (c.axes.size() == 1) c.axes.push_back(c.axes[0]);
  }
  if (c.axes.size() != 2) fail("pulse.axes", "one axis, or one per target");
  if (auto v = get("pulse", "weights")) {
    c.weights.clear();
    for (const auto& s : split_list(*v)) c.weights.push_back(to_double("pulse.weights", s));
  }
  if (c.weights.size() != 2) fail("pulse.weights", "one weight per target");
  if (auto v = get("pulse", "sideband_modes")) c.sideband_modes = to_size("pulse.sideband_modes", *v);
  if (c.sideband_modes > c.n_ions) fail("pulse.sideband_modes", "more modes than ions");
  if (auto v = get("pulse", "refocus_levels")) c.refocus_levels = to_positive("pulse.refocus_levels", *v);

  if (auto v = get("space", "fock_cutoff")) c.fock_cutoff = to_positive("space.fock_cutoff", *v);
  if (auto v = get("space", "steps")) c.steps = to_size("space.steps", *v);
  if (auto v = get("space", "fock_states")) {
    c.fock_states.clear();
    for (const auto& s : split_list(*v)) c.fock_states.push_back(to_size("space.fock_states", s));
    if (c.fock_states.empty()) fail("space.fock_states", "list at least one state");
  }
  for (auto n : c.fock_states) {
    if (n > c.fock_cutoff) fail("space.fock_states", "state " + std::to_string(n) + " is above the cutoff");
  }

  if (auto v = get("noise", "kind")) {
    try {
      c.noise.kind = parse_noise_kind(*v);
    } catch (const Error&) {
      fail("noise.kind", "expected quasi_static_scalar or single_bath_mode, got '" + *v + "'");
    }
  }
  if (auto v = get("noise", "sigma_B")) {
    c.noise.sigma = to_double("noise.sigma_B", *v);
    if (c.noise.sigma < 0.0) fail("noise.sigma_B", "must be >= 0");
  }
  c.noise.samples = 200;
  c.noise.seed = 1;
  if (auto v = get("noise", "samples")) c.noise.samples = to_positive("noise.samples", *v);
  if (auto v = get("noise", "seed")) c.noise.seed = to_unsigned("noise.seed", *v);
  if (auto v = get("noise", "sigma_grid")) {
    for (const auto& s : split_list(*v)) c.sigma_grid.push_back(to_positive_double("noise.sigma_grid", s));
  }
  if (auto v = get("noise", "bath_coupling")) c.noise.bath_coupling = to_double("noise.bath_coupling", *v);
  if (auto v = get("noise", "bath_frequency")) {
    c.noise.bath_frequency = to_positive_double("noise.bath_frequency", *v);
  }
  if (auto v = get("noise", "bath_cutoff")) c.noise.bath_cutoff = to_positive("noise.bath_cutoff", *v);

  if (auto v = get("output", "directory")) c.directory = *v;
  if (auto v = get("output", "prefix")) c.prefix = *v;
  if (auto v = get("output", "format")) {
    if (*v == "csv") {
      c.format = OutputFormat::Csv;
    } else if (*v == "json") {
      c.format = OutputFormat::Json;
    } else if (*v == "both") {
      c.format = OutputFormat::Both;
    } else {
      fail("output.format", "expected csv, json or both, got '" + *v + "'");
    }
  }
  if (auto v = get("output", "metadata")) c.metadata = to_bool("output.metadata", *v);
  if (c.prefix.empty()) c.prefix = to_string(c.command);
  return c;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file '" + path + "'");
  return parse_config(in, overrides);
}

}  // namespace iondfs::app
