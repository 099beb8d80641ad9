#include "iondfs/pulse.hpp"

#include "iondfs/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace iondfs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_ion(const ModeSpectrum& modes, std::size_t ion) {
  if (ion >= modes.n_ions()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "ion " + std::to_string(ion) + " outside array of " + std::to_string(modes.n_ions()));
  }
}

void check_pair(const ForceSchedule& schedule, const ModeSpectrum& modes, IonPair pair) {
  check_ion(modes, pair.first);
  check_ion(modes, pair.second);
  if (pair.first == pair.second) throw Error(ErrorCode::InvalidArgument, "pair must name two ions");
  if (schedule.targets.size() != 2 || !schedule.find_target(pair.first) ||
      !schedule.find_target(pair.second)) {
    throw Error(ErrorCode::InvalidArgument, "schedule must target exactly the two ions of the pair");
  }
}

double step_at(const ForceSchedule& schedule, int level) {
  return std::ldexp(schedule.time_step(), -level);
}

// ∫ f² dt over the schedule (Simpson on one grid level).
double profile_square_integral(const ForceSchedule& schedule, int level) {
  const double h = step_at(schedule, level);
  double sum = 0.0;
  for (const auto& piece : schedule.pieces()) {
    const std::size_t n = even_intervals(piece.end - piece.begin, h);
    const double hp = (piece.end - piece.begin) / static_cast<double>(n);
    for (std::size_t m = 0; m <= n; ++m) {
      const double f = schedule.profile_on(piece, piece.begin + hp * static_cast<double>(m));
      sum += simpson_weight(m, n, hp) * f * f;
    }
  }
  return sum;
}

// Σ_k D̃_ik D̃_jk / ω_k.
double pair_mode_sum(const ModeSpectrum& modes, IonPair pair) {
  double sum = 0.0;
  for (std::size_t k = 0; k < modes.n_modes(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    sum += modes.coupling(static_cast<Eigen::Index>(pair.first), kk) *
           modes.coupling(static_cast<Eigen::Index>(pair.second), kk) / modes.frequencies(kk);
  }
  return sum;
}

}  // namespace

std::size_t design_steps(const ModeSpectrum& modes, double duration) {
  const double periods = duration * modes.max_frequency() / kTwoPi;
  return static_cast<std::size_t>(std::ceil(periods - 1e-9)) * kDesignStepsPerPeriod;
}

double eval_g(const ForceSchedule& schedule, const ModeSpectrum& modes, std::size_t ion,
              std::size_t mode, double t) {
  check_ion(modes, ion);
  if (mode >= modes.n_modes()) {
    throw Error(ErrorCode::IndexOutOfRange, "mode " + std::to_string(mode) + " out of range");
  }
  if (t < 0.0 || t > schedule.total_duration()) {
    throw Error(ErrorCode::InvalidArgument, "time outside schedule support");
  }
  const double w = schedule.weight_of(ion);
  if (w == 0.0) return 0.0;
  return modes.coupling(static_cast<Eigen::Index>(ion), static_cast<Eigen::Index>(mode)) * w *
         schedule.profile(t);
}

ComplexVector profile_transform(const ForceSchedule& schedule, const RealVector& omegas,
                                const QuadratureOptions& opts) {
  return profile_transform_until(schedule, omegas, schedule.total_duration(), opts);
}

ComplexVector profile_transform_until(const ForceSchedule& schedule, const RealVector& omegas, double t_end,
                                      const QuadratureOptions& opts) {
  schedule.validate();
  if (!(t_end >= 0.0) || t_end > schedule.total_duration() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "time outside the schedule");
  }
  std::vector<Piece> pieces;
  for (auto piece : schedule.pieces()) {
    if (piece.begin >= t_end) break;
    piece.end = std::min(piece.end, t_end);
    pieces.push_back(piece);
  }
  auto estimate = [&](int level) {
    const double h = step_at(schedule, level);
    ComplexVector value = ComplexVector::Zero(omegas.size());
    double magnitude = 0.0;
    for (const auto& piece : pieces) {
      const std::size_t n = even_intervals(piece.end - piece.begin, h);
      const double hp = (piece.end - piece.begin) / static_cast<double>(n);
      for (std::size_t m = 0; m <= n; ++m) {
        const double t = piece.begin + hp * static_cast<double>(m);
        const double wf = simpson_weight(m, n, hp) * schedule.profile_on(piece, t);
        magnitude += std::abs(wf);
        for (Eigen::Index k = 0; k < omegas.size(); ++k) {
          value(k) += wf * std::polar(1.0, -omegas(k) * t);
        }
      }
    }
    return std::pair{value, RealVector::Constant(omegas.size(), magnitude).eval()};
  };
  return integrate_to_tolerance(estimate, opts, "residual eta").value;
}

ComplexMatrix residual_eta(const ForceSchedule& schedule, const ModeSpectrum& modes,
                           const QuadratureOptions& opts) {
  for (const auto& t : schedule.targets) check_ion(modes, t.ion);
  const ComplexVector transform = profile_transform(schedule, modes.frequencies, opts);
  ComplexMatrix eta(static_cast<Eigen::Index>(schedule.targets.size()), transform.size());
  for (std::size_t r = 0; r < schedule.targets.size(); ++r) {
    const auto& target = schedule.targets[r];
    const auto row = static_cast<Eigen::Index>(r);
    for (Eigen::Index k = 0; k < transform.size(); ++k) {
      eta(row, k) = modes.coupling(static_cast<Eigen::Index>(target.ion), k) * target.weight * transform(k);
    }
  }
  return eta;
}

double adiabatic_phase(const ForceSchedule& schedule, const ModeSpectrum& modes, IonPair pair,
                       const QuadratureOptions& opts) {
  check_pair(schedule, modes, pair);
  auto estimate = [&](int level) {
    const double v = profile_square_integral(schedule, level);
    return std::pair{RealVector::Constant(1, v).eval(), RealVector::Constant(1, std::abs(v)).eval()};
  };
  const double square = integrate_to_tolerance(estimate, opts, "adiabatic phase").value(0);
  const double weights = schedule.weight_of(pair.first) * schedule.weight_of(pair.second);
  return -2.0 * pair_mode_sum(modes, pair) * weights * square;
}

PhaseReport coupling_phase(const ForceSchedule& schedule, const ModeSpectrum& modes, IonPair pair,
                           const QuadratureOptions& opts) {
  check_pair(schedule, modes, pair);
  schedule.validate();
  const auto pieces = schedule.pieces();
  const RealVector& omega = modes.frequencies;
  const Eigen::Index n_modes = omega.size();

  // Q_k = ∫_0^T f(t) ∫_0^t f(t') sin ω_k(t' − t) dt' dt, using
  // sin ω(t'−t) = sin ωt' cos ωt − cos ωt' sin ωt so the inner integral is a
  // running sum. Inner increments use Simpson on each interval with its
  // midpoint, the outer integral composite Simpson on the nodes.
  auto estimate = [&](int level) {
    const double h = step_at(schedule, level);
    RealVector running_cos = RealVector::Zero(n_modes);
    RealVector running_sin = RealVector::Zero(n_modes);
    RealVector q = RealVector::Zero(n_modes);
    double square = 0.0;
    for (const auto& piece : pieces) {
      const std::size_t n = even_intervals(piece.end - piece.begin, h);
      const double hp = (piece.end - piece.begin) / static_cast<double>(n);
      double f_prev = 0.0;
      double t_prev = piece.begin;
      for (std::size_t m = 0; m <= n; ++m) {
        const double t = piece.begin + hp * static_cast<double>(m);
        const double f = schedule.profile_on(piece, t);
        const double weight = simpson_weight(m, n, hp);
        square += weight * f * f;
        double f_mid = 0.0;
        if (m > 0) f_mid = schedule.profile_on(piece, 0.5 * (t_prev + t));
        for (Eigen::Index k = 0; k < n_modes; ++k) {
          const double w = omega(k);
          if (m > 0) {
            const double tm = 0.5 * (t_prev + t);
            running_cos(k) += hp / 6.0 *
                              (f_prev * std::cos(w * t_prev) + 4.0 * f_mid * std::cos(w * tm) + f * std::cos(w * t));
            running_sin(k) += hp / 6.0 *
                              (f_prev * std::sin(w * t_prev) + 4.0 * f_mid * std::sin(w * tm) + f * std::sin(w * t));
          }
          q(k) += weight * f * (std::cos(w * t) * running_sin(k) - std::sin(w * t) * running_cos(k));
        }
        f_prev = f;
        t_prev = t;
      }
    }
    RealVector scale(n_modes);
    for (Eigen::Index k = 0; k < n_modes; ++k) scale(k) = square / omega(k);
    return std::pair{q, scale};
  };
  const RealVector q = integrate_to_tolerance(estimate, opts, "coupling phase").value;

  PhaseReport report;
  const double weights = schedule.weight_of(pair.first) * schedule.weight_of(pair.second);
  report.phase_per_mode.resize(n_modes);
  for (Eigen::Index k = 0; k < n_modes; ++k) {
    report.phase_per_mode(k) = 2.0 * modes.coupling(static_cast<Eigen::Index>(pair.first), k) *
                               modes.coupling(static_cast<Eigen::Index>(pair.second), k) * weights * q(k);
  }
  report.phase_total = 0.0;
  for (Eigen::Index k = 0; k < n_modes; ++k) report.phase_total += report.phase_per_mode(k);
  report.eta = residual_eta(schedule, modes, opts);
  report.phase_adiabatic = adiabatic_phase(schedule, modes, pair, opts);
  report.adiabaticity = schedule.max_slope() / modes.min_frequency();
  return report;
}

ForceSchedule design_adiabatic_schedule(const ModeSpectrum& modes, IonPair pair, double target_phase,
                                        std::size_t periods, PauliAxis axis) {
  if (target_phase == 0.0) throw Error(ErrorCode::InvalidArgument, "target phase must be non-zero");
  if (periods == 0) throw Error(ErrorCode::InvalidArgument, "periods must be >= 1");
  check_ion(modes, pair.first);
  check_ion(modes, pair.second);
  const double mode_sum = pair_mode_sum(modes, pair);
  if (mode_sum == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "pair has no net coupling through the given modes");
  }

  ForceSchedule s;
  s.shape = PulseShape::SmoothBump;
  s.duration = static_cast<double>(periods) * kTwoPi / modes.min_frequency();
  s.cycles = 1;
  s.steps_per_cycle = design_steps(modes, s.duration);

  // Φ_ad = −2 K w A² ∫ sin⁴ = −(3T/4) K w A² with w = ±1 on the second ion.
  const double sign = (target_phase * mode_sum > 0.0) ? -1.0 : 1.0;
  s.amplitude = std::sqrt(std::abs(target_phase) / (0.75 * s.duration * std::abs(mode_sum)));
  s.targets = {{pair.first, axis, 1.0}, {pair.second, axis, sign}};

  const double adiabaticity = s.max_slope() / modes.min_frequency();
  if (adiabaticity >= kAdiabaticityBound) {
    throw Error(ErrorCode::AdiabaticityViolated,
                "max|df/dt|/omega_min = " + std::to_string(adiabaticity) + " with " +
                    std::to_string(periods) + " periods");
  }
  return s;
}

ForceSchedule design_refocused_schedule(const ModeSpectrum& modes, IonPair pair, double target_phase,
                                        std::size_t cycle_periods, std::size_t refocus_levels,
                                        PauliAxis first_axis, PauliAxis second_axis) {
  if (target_phase == 0.0) throw Error(ErrorCode::InvalidArgument, "target phase must be non-zero");
  if (cycle_periods == 0) throw Error(ErrorCode::InvalidArgument, "cycle periods must be >= 1");
  if (refocus_levels > 16) throw Error(ErrorCode::InvalidArgument, "too many refocusing levels");
  check_ion(modes, pair.first);
  check_ion(modes, pair.second);

  const double duration = static_cast<double>(cycle_periods) * kTwoPi / modes.min_frequency();
  for (Eigen::Index k = 0; k < modes.frequencies.size(); ++k) {
    const double turns = modes.frequencies(k) * duration / kTwoPi;
    if (std::abs(turns - std::round(turns)) > 1e-9 * std::max(1.0, turns)) {
      throw Error(ErrorCode::IncommensurateModes,
                  "mode " + std::to_string(k) + " completes " + std::to_string(turns) + " periods per cycle");
    }
  }
  const double mode_sum = pair_mode_sum(modes, pair);
  if (mode_sum == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "pair has no net coupling through the given modes");
  }

  ForceSchedule s;
  s.shape = PulseShape::Constant;
  s.duration = duration;
  s.cycles = std::size_t{1} << refocus_levels;
  s.reversal.resize(s.cycles);
  for (std::size_t c = 0; c < s.cycles; ++c) s.reversal[c] = (std::popcount(c) % 2 == 0) ? 1 : -1;
  s.steps_per_cycle = design_steps(modes, duration);

  // A closed cycle contributes Φ_1 = −2 K w A² T; cycles add because η
  // returns to zero at every cycle boundary.
  const double sign = (target_phase * mode_sum > 0.0) ? -1.0 : 1.0;
  s.amplitude = std::sqrt(std::abs(target_phase) /
                          (2.0 * std::abs(mode_sum) * duration * static_cast<double>(s.cycles)));
  s.targets = {{pair.first, first_axis, 1.0}, {pair.second, second_axis, sign}};
  return s;
}

AdiabaticWindow check_adiabatic_window(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                       double relaxation_rate) {
  AdiabaticWindow w;
  w.max_slope = schedule.max_slope();
  w.lowest_frequency = modes.min_frequency();
  w.relaxation_rate = relaxation_rate;
  w.slow_enough = w.max_slope < kAdiabaticityBound * w.lowest_frequency;
  w.fast_enough = w.max_slope > relaxation_rate;
  return w;
}

EtaTrajectory eta_trajectory(const ForceSchedule& schedule, double omega) {
  schedule.validate();
  const auto pieces = schedule.pieces();
  const std::size_t per_piece = schedule.steps_per_cycle / schedule.grid_alignment();
  EtaTrajectory out;
  out.times.reserve(pieces.size() * per_piece + 1);
  out.eta.reserve(pieces.size() * per_piece + 1);
  out.times.push_back(0.0);
  out.eta.push_back(0.0);
  Complex running = 0.0;
  for (const auto& piece : pieces) {
    const double hp = (piece.end - piece.begin) / static_cast<double>(per_piece);
    for (std::size_t m = 1; m <= per_piece; ++m) {
      const double a = piece.begin + hp * static_cast<double>(m - 1);
      const double b = piece.begin + hp * static_cast<double>(m);
      const double mid = 0.5 * (a + b);
      running += hp / 6.0 *
                 (schedule.profile_on(piece, a) * std::polar(1.0, -omega * a) +
                  4.0 * schedule.profile_on(piece, mid) * std::polar(1.0, -omega * mid) +
                  schedule.profile_on(piece, b) * std::polar(1.0, -omega * b));
      out.times.push_back(b);
      out.eta.push_back(running);
    }
  }
  return out;
}

}  // namespace iondfs
