#pragma once

#include "iondfs/linalg.hpp"
#include "iondfs/modes.hpp"
#include "iondfs/quadrature.hpp"
#include "iondfs/schedule.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace iondfs {

struct IonPair {
  std::size_t first = 0;
  std::size_t second = 1;
};

struct PhaseReport {
  ComplexMatrix eta;  // (target, mode) → η_μ^k at the end of the schedule
  double phase_total = 0.0;
  RealVector phase_per_mode;
  double phase_adiabatic = 0.0;
  std::optional<double> global_phase;  // set by the propagation oracle
  double adiabaticity = 0.0;           // max|ḟ| / ω_min

  double max_abs_eta() const { return max_abs(eta); }
};

/// g_μ^k(t) = D̃_{μk} f_μ(t). Zero for ions the schedule does not target.
double eval_g(const ForceSchedule& schedule, const ModeSpectrum& modes, std::size_t ion,
              std::size_t mode, double t);

/// ∫ f(t) e^{-iω t} dt over the whole schedule for every mode (profile only,
/// without D̃ or target weights).
ComplexVector profile_transform(const ForceSchedule& schedule, const RealVector& omegas,
                                const QuadratureOptions& opts = {});

/// The same transform over [0, t_end].
ComplexVector profile_transform_until(const ForceSchedule& schedule, const RealVector& omegas, double t_end,
                                      const QuadratureOptions& opts = {});

/// η_μ^k(T) = ∫_0^T g_μ^k(t) e^{-iω_k t} dt; rows follow `schedule.targets`.
ComplexMatrix residual_eta(const ForceSchedule& schedule, const ModeSpectrum& modes,
                           const QuadratureOptions& opts = {});

/// Per-mode Φ_k = ∫_0^T J_ij^k(t) dt and the reductions in PhaseReport.
PhaseReport coupling_phase(const ForceSchedule& schedule, const ModeSpectrum& modes, IonPair pair,
                           const QuadratureOptions& opts = {});

/// Closed-form slow-pulse phase −Σ_k (2/ω_k) ∫ g_i^k g_j^k dt.
double adiabatic_phase(const ForceSchedule& schedule, const ModeSpectrum& modes, IonPair pair,
                       const QuadratureOptions& opts = {});

/// Grid resolution used by the designers: steps per period of the fastest mode.
inline constexpr std::size_t kDesignStepsPerPeriod = 64;
inline constexpr double kAdiabaticityBound = 0.1;

/// Grid size for one cycle of `duration`: kDesignStepsPerPeriod per started
/// period of the fastest mode.
std::size_t design_steps(const ModeSpectrum& modes, double duration);

/// Single sin² bump lasting `periods` periods of the slowest mode whose
/// adiabatic phase equals `target_phase`. A negative weight on the second
/// ion fixes the sign of the phase.
ForceSchedule design_adiabatic_schedule(const ModeSpectrum& modes, IonPair pair, double target_phase,
                                        std::size_t periods, PauliAxis axis = PauliAxis::Z);

/// Constant-force cycles of `cycle_periods` periods each, 2^refocus_levels
/// cycles with Thue–Morse reversal signs (+ − for two cycles, + − − + for
/// four). Every mode must complete an integer number of periods per cycle.
/// `refocus_levels = 0` gives the unrefocused single-cycle pulse.
ForceSchedule design_refocused_schedule(const ModeSpectrum& modes, IonPair pair, double target_phase,
                                        std::size_t cycle_periods, std::size_t refocus_levels = 1,
                                        PauliAxis first_axis = PauliAxis::Z,
                                        PauliAxis second_axis = PauliAxis::Z);

struct AdiabaticWindow {
  double max_slope = 0.0;
  double lowest_frequency = 0.0;
  double relaxation_rate = 0.0;
  bool slow_enough = false;  // max|ḟ| < 0.1 ω_l
  bool fast_enough = false;  // max|ḟ| > τ_rel⁻¹
};

AdiabaticWindow check_adiabatic_window(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                       double relaxation_rate);

/// η(t) = ∫_0^t f(τ) e^{-iωτ} dτ on the schedule's own grid (one node per
/// step, starting at t = 0), for the bare profile.
struct EtaTrajectory {
  std::vector<double> times;
  std::vector<Complex> eta;
};
EtaTrajectory eta_trajectory(const ForceSchedule& schedule, double omega);

}  // namespace iondfs
