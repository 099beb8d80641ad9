#include "iondfs/schedule.hpp"

#include "iondfs/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace iondfs {

std::string_view to_string(PauliAxis axis) noexcept {
  switch (axis) {
    case PauliAxis::X: return "x";
    case PauliAxis::Y: return "y";
    case PauliAxis::Z: return "z";
  }
  return "?";
}

std::string_view to_string(PulseShape shape) noexcept {
  switch (shape) {
    case PulseShape::SmoothBump: return "smooth_bump";
    case PulseShape::Constant: return "constant";
    case PulseShape::KickTrain: return "kick_train";
    case PulseShape::Sampled: return "sampled";
  }
  return "?";
}

PauliAxis parse_axis(std::string_view text) {
  if (text == "x") return PauliAxis::X;
  if (text == "y") return PauliAxis::Y;
  if (text == "z") return PauliAxis::Z;
  throw Error(ErrorCode::ConfigError, "unknown Pauli axis '" + std::string(text) + "'");
}

PulseShape parse_shape(std::string_view text) {
  for (auto shape : {PulseShape::SmoothBump, PulseShape::Constant, PulseShape::KickTrain,
                     PulseShape::Sampled}) {
    if (text == to_string(shape)) return shape;
  }
  throw Error(ErrorCode::ConfigError, "unknown pulse shape '" + std::string(text) + "'");
}

void ForceSchedule::validate() const {
  if (!(duration > 0.0)) throw Error(ErrorCode::InvalidArgument, "duration must be > 0");
  if (cycles < 1) throw Error(ErrorCode::InvalidArgument, "cycles must be >= 1");
  if (!reversal.empty()) {
    if (reversal.size() != cycles) {
      throw Error(ErrorCode::InvalidArgument, "reversal flags must list one sign per cycle");
    }
    for (int s : reversal) {
      if (s != 1 && s != -1) throw Error(ErrorCode::InvalidArgument, "reversal flags must be +1 or -1");
    }
  }
  std::set<std::size_t> seen;
  for (const auto& t : targets) {
    if (!seen.insert(t.ion).second) {
      throw Error(ErrorCode::InvalidArgument, "ion " + std::to_string(t.ion) + " targeted twice");
    }
  }
  if (shape == PulseShape::KickTrain && levels.empty()) {
    throw Error(ErrorCode::InvalidArgument, "kick_train needs at least one segment level");
  }
  if (shape == PulseShape::Sampled && levels.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "sampled shape needs at least two samples");
  }
  if (steps_per_cycle < 2 || steps_per_cycle % grid_alignment() != 0) {
    throw Error(ErrorCode::InvalidArgument,
                "steps_per_cycle must be a positive multiple of " + std::to_string(grid_alignment()));
  }
}

int ForceSchedule::reversal_sign(std::size_t cycle) const {
  return reversal.empty() ? 1 : reversal.at(cycle);
}

std::size_t ForceSchedule::grid_alignment() const {
  switch (shape) {
    case PulseShape::KickTrain: return levels.size();
    case PulseShape::Sampled: return levels.size() - 1;
    default: return 1;
  }
}

std::vector<Piece> ForceSchedule::pieces() const {
  std::size_t per_cycle = 1;
  if (shape == PulseShape::KickTrain) per_cycle = levels.size();
  if (shape == PulseShape::Sampled) per_cycle = levels.size() - 1;

  std::vector<Piece> out;
  out.reserve(per_cycle * cycles);
  const double width = duration / static_cast<double>(per_cycle);
  for (std::size_t c = 0; c < cycles; ++c) {
    const double start = duration * static_cast<double>(c);
    for (std::size_t s = 0; s < per_cycle; ++s) {
      Piece p;
      p.cycle = c;
      p.segment = s;
      p.begin = start + width * static_cast<double>(s);
      p.end = (s + 1 == per_cycle) ? duration * static_cast<double>(c + 1)
                                   : start + width * static_cast<double>(s + 1);
      out.push_back(p);
    }
  }
  return out;
}

double ForceSchedule::profile_on(const Piece& piece, double t) const {
  const double sign = reversal_sign(piece.cycle);
  const double local = t - duration * static_cast<double>(piece.cycle);
  switch (shape) {
    case PulseShape::SmoothBump: {
      // sin(π min(τ, T−τ)/T) makes both cycle ends exactly zero.
      const double tau = std::clamp(local, 0.0, duration);
      const double s = std::sin(std::numbers::pi * std::min(tau, duration - tau) / duration);
      return sign * amplitude * s * s;
    }
    case PulseShape::Constant:
      return sign * amplitude;
    case PulseShape::KickTrain:
      return sign * amplitude * levels[piece.segment];
    case PulseShape::Sampled: {
      const double width = duration / static_cast<double>(levels.size() - 1);
      const double x = std::clamp((local - width * static_cast<double>(piece.segment)) / width, 0.0, 1.0);
      const double v = levels[piece.segment] * (1.0 - x) + levels[piece.segment + 1] * x;
      return sign * amplitude * v;
    }
  }
  return 0.0;
}

double ForceSchedule::derivative_on(const Piece& piece, double t) const {
  const double sign = reversal_sign(piece.cycle);
  const double local = t - duration * static_cast<double>(piece.cycle);
  switch (shape) {
    case PulseShape::SmoothBump:
      return sign * amplitude * (std::numbers::pi / duration) *
             std::sin(2.0 * std::numbers::pi * local / duration);
    case PulseShape::Sampled: {
      const double width = duration / static_cast<double>(levels.size() - 1);
      return sign * amplitude * (levels[piece.segment + 1] - levels[piece.segment]) / width;
    }
    default:
      return 0.0;
  }
}

double ForceSchedule::profile(double t) const {
  const auto ps = pieces();
  if (t <= 0.0) return profile_on(ps.front(), 0.0);
  for (const auto& p : ps) {
    if (t < p.end) return profile_on(p, t);
  }
  return profile_on(ps.back(), std::min(t, total_duration()));
}

double ForceSchedule::max_jump() const {
  const auto ps = pieces();
  double jump = std::abs(profile_on(ps.front(), ps.front().begin));
  for (std::size_t i = 1; i < ps.size(); ++i) {
    jump = std::max(jump, std::abs(profile_on(ps[i], ps[i].begin) - profile_on(ps[i - 1], ps[i - 1].end)));
  }
  return std::max(jump, std::abs(profile_on(ps.back(), ps.back().end)));
}

double ForceSchedule::max_slope() const {
  if (amplitude == 0.0) return 0.0;
  if (max_jump() > 0.0) return std::numeric_limits<double>::infinity();
  switch (shape) {
    case PulseShape::SmoothBump:
      return std::abs(amplitude) * std::numbers::pi / duration;
    case PulseShape::Sampled: {
      double slope = 0.0;
      for (const auto& p : pieces()) slope = std::max(slope, std::abs(derivative_on(p, p.begin)));
      return slope;
    }
    default:
      return 0.0;
  }
}

const ForceTarget* ForceSchedule::find_target(std::size_t ion) const {
  for (const auto& t : targets) {
    if (t.ion == ion) return &t;
  }
  return nullptr;
}

double ForceSchedule::weight_of(std::size_t ion) const {
  const auto* t = find_target(ion);
  return t ? t->weight : 0.0;
}

void check_resolution(const ForceSchedule& schedule, double max_frequency) {
  const double limit = (2.0 * std::numbers::pi / max_frequency) / 40.0;
  if (schedule.time_step() > limit * (1.0 + 1e-12)) {
    throw Error(ErrorCode::ResolutionGuard,
                "time step " + std::to_string(schedule.time_step()) + " exceeds " + std::to_string(limit));
  }
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ConfigError, "bad number for '" + std::string(key) + "': " + std::string(text));
  }
  return v;
}

long long parse_int(std::string_view key, std::string_view text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ConfigError, "bad integer for '" + std::string(key) + "': " + std::string(text));
  }
  return v;
}

}  // namespace

std::string to_record(const ForceSchedule& s) {
  std::ostringstream out;
  out << "shape = " << to_string(s.shape) << '\n';
  out << "amplitude = " << format_double(s.amplitude) << '\n';
  out << "duration = " << format_double(s.duration) << '\n';
  out << "cycles = " << s.cycles << '\n';
  out << "reversal = ";
  for (std::size_t c = 0; c < s.cycles; ++c) out << (c ? "," : "") << s.reversal_sign(c);
  out << '\n';
  out << "steps_per_cycle = " << s.steps_per_cycle << '\n';
  out << "targets = ";
  for (std::size_t i = 0; i < s.targets.size(); ++i) {
    const auto& t = s.targets[i];
    out << (i ? "," : "") << t.ion << ':' << to_string(t.axis) << ':' << format_double(t.weight);
  }
  out << '\n';
  if (!s.levels.empty()) {
    out << "levels = ";
    for (std::size_t i = 0; i < s.levels.size(); ++i) out << (i ? "," : "") << format_double(s.levels[i]);
    out << '\n';
  }
  return out.str();
}

ForceSchedule from_record(std::string_view text) {
  ForceSchedule s;
  s.reversal.clear();
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ConfigError, "expected 'key = value': " + std::string(line));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "shape") {
      s.shape = parse_shape(value);
    } else if (key == "amplitude") {
      s.amplitude = parse_double(key, value);
    } else if (key == "duration") {
      s.duration = parse_double(key, value);
    } else if (key == "cycles") {
      s.cycles = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "reversal") {
      for (auto part : split(value, ',')) s.reversal.push_back(static_cast<int>(parse_int(key, part)));
    } else if (key == "steps_per_cycle") {
      s.steps_per_cycle = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "targets") {
      for (auto part : split(value, ',')) {
        const auto fields = split(part, ':');
        if (fields.size() != 3) throw Error(ErrorCode::ConfigError, "target must be ion:axis:weight");
        s.targets.push_back({static_cast<std::size_t>(parse_int(key, fields[0])), parse_axis(fields[1]),
                             parse_double(key, fields[2])});
      }
    } else if (key == "levels") {
      for (auto part : split(value, ',')) s.levels.push_back(parse_double(key, part));
    } else {
      throw Error(ErrorCode::ConfigError, "unknown schedule key '" + std::string(key) + "'");
    }
  }
  s.validate();
  return s;
}

}  // namespace iondfs
