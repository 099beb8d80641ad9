#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iondfs {

enum class PauliAxis { X, Y, Z };

enum class PulseShape {
  SmoothBump,  // A sin²(π τ / T) per cycle
  Constant,    // A per cycle
  KickTrain,   // A · levels[s] on equal-width segments
  Sampled,     // A · linear interpolation of levels on a uniform grid over the cycle
};

std::string_view to_string(PauliAxis axis) noexcept;
std::string_view to_string(PulseShape shape) noexcept;
PauliAxis parse_axis(std::string_view text);
PulseShape parse_shape(std::string_view text);

/// A state-dependent force F_μ(t) = weight · f(t) · σ_axis on one ion.
struct ForceTarget {
  std::size_t ion = 0;
  PauliAxis axis = PauliAxis::Z;
  double weight = 1.0;
};

/// Interval of the schedule on which the profile is smooth.
struct Piece {
  double begin = 0.0;
  double end = 0.0;
  std::size_t cycle = 0;
  std::size_t segment = 0;
};

/// Time-dependent force profile shared by all targets (each scaled by its
/// weight). Cycle c covers [c T, (c+1) T] and is multiplied by reversal[c].
struct ForceSchedule {
  std::vector<ForceTarget> targets;
  PulseShape shape = PulseShape::SmoothBump;
  double amplitude = 0.0;
  double duration = 1.0;
  std::size_t cycles = 1;
  std::vector<int> reversal;   // per cycle, ±1; empty means all +1
  std::vector<double> levels;  // kick-train segment levels or sampled values
  std::size_t steps_per_cycle = 64;

  void validate() const;

  double total_duration() const { return duration * static_cast<double>(cycles); }
  double time_step() const { return duration / static_cast<double>(steps_per_cycle); }
  int reversal_sign(std::size_t cycle) const;

  /// Smooth pieces in time order; their union is [0, total_duration()].
  std::vector<Piece> pieces() const;

  /// Profile value inside `piece` (one-sided limits at its ends).
  double profile_on(const Piece& piece, double t) const;
  double derivative_on(const Piece& piece, double t) const;

  /// Right-continuous profile; the final instant uses the left limit.
  double profile(double t) const;

  /// Largest jump of f(t) across piece boundaries, including f(0⁻) = f(end⁺) = 0.
  double max_jump() const;

  /// max |ḟ|; +∞ when the profile is discontinuous.
  double max_slope() const;

  /// Grid step counts per cycle must be a multiple of this so that every
  /// piece boundary lands on a grid node.
  std::size_t grid_alignment() const;

  const ForceTarget* find_target(std::size_t ion) const;
  double weight_of(std::size_t ion) const;
};

/// Throws ResolutionGuard unless Δt ≤ (2π/ω_max)/40.
void check_resolution(const ForceSchedule& schedule, double max_frequency);

/// Line-oriented `key = value` record (see README for the field list).
std::string to_record(const ForceSchedule& schedule);
ForceSchedule from_record(std::string_view text);

}  // namespace iondfs
