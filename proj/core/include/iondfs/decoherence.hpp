#pragma once

#include "iondfs/dfs.hpp"
#include "iondfs/dynamics.hpp"
#include "iondfs/hilbert.hpp"
#include "iondfs/modes.hpp"
#include "iondfs/schedule.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace iondfs {

enum class NoiseKind { QuasiStaticScalar, SingleBathMode };

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view text);

/// Collective dephasing Σ_i Z_i ⊗ B. The scalar model replaces B by a
/// Gaussian β ~ N(0, σ_B²), fixed within a run. The bath-mode model uses
/// B = b(a_b e^{-iω_b t} + h.c.) on an extra ladder of its own cutoff.
struct DephasingModel {
  NoiseKind kind = NoiseKind::QuasiStaticScalar;
  double sigma = 0.0;
  double bath_coupling = 0.0;
  double bath_frequency = 1.0;
  std::size_t bath_cutoff = 10;
  std::size_t samples = 1;
  std::uint64_t seed = 0;

  void validate() const;

  /// β_s = σ_B z_s with z_s standard normal draws from mt19937_64(seed).
  std::vector<double> betas() const;
};

struct NoiseReport {
  std::size_t cycles = 1;
  double phase = 0.0;
  std::vector<double> betas;
  std::vector<double> fidelities;
  double mean_fidelity = 1.0;
  double std_fidelity = 0.0;
  std::size_t steps = 0;

  double mean_infidelity() const;
};

/// Driven Hamiltonian plus the dephasing term. For the bath-mode model
/// `space` must carry the bath as its last ladder; `beta` is ignored.
TimeDependentHamiltonian noisy_hamiltonian(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                           const HilbertSpace& space, const DephasingModel& model, double beta);

/// The space the model propagates in: `space` itself, or `space` with the
/// bath ladder appended.
HilbertSpace noise_space(const HilbertSpace& space, const DephasingModel& model);

/// Propagates noisy_hamiltonian on noise_space(space, model).
Propagation total_propagate(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& space,
                            const DephasingModel& model, double beta, const std::vector<std::size_t>& columns = {},
                            const PropagationOptions& opts = {});

/// G(t) = exp{i Σ_k Σ_μ [η_μ^k(t) a_k + h.c.] σ_α^{(μ)}}, α the axis of
/// target μ. Dense; the space must be small enough for dense work.
ComplexMatrix gauge_operator(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& space,
                             double t);

/// G(T) for the whole schedule.
ComplexMatrix residual_noise_operator(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                      const HilbertSpace& space);

/// Z̃(t) = G⁻¹(t) Z G(t) in closed form for one mode:
/// Σ_μ cos(2θ̂_μ) σ_z^{(μ)} − i sin(2θ̂_μ) σ_α^{(μ)} σ_z^{(μ)} with
/// θ̂_μ = D̃_μ w_μ (η(t) a + η*(t) a†); σ_z^{(μ)} stays bare on z-axis and
/// untargeted ions. Throws ModelMismatch unless the targets couple with
/// equal strength |D̃_μ w_μ|.
ComplexMatrix gauged_dephasing_operator(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                        const HilbertSpace& space, double t);

/// Code ⊗ vacuum gate fidelity |tr(T_L† K)| / 2^L at one β, with T_L the
/// restriction of the analytic gate at the quadrature phase.
double code_fidelity(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& space,
                     const LogicalEncoding& enc, const DephasingModel& model, double beta,
                     const PropagationOptions& opts = {});

/// Monte Carlo over model.betas(); the step count is settled on the
/// largest-|β| sample and reused for the rest.
NoiseReport noise_report(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& space,
                         const LogicalEncoding& enc, const DephasingModel& model,
                         const PropagationOptions& opts = {});

struct RefocusMoments {
  double first = 0.0;     // max over (target, mode) of |∫ η dt|
  double third = 0.0;     // max over (target, mode) of |∫ η³ dt|
  double sin_norm = 0.0;  // Σ_k ‖∫ sin(2θ̂_k(t)) dt‖_max
};

RefocusMoments refocus_moments(const ForceSchedule& schedule, const ModeSpectrum& modes,
                               const HilbertSpace& space);

struct RefocusReport {
  NoiseReport single;
  NoiseReport refocused;
  RefocusMoments moments;
  double ratio() const;  // refocused / single mean infidelity
};

/// Throws InvalidArgument if the two phases differ by more than 1e-8
/// relative and RefocusPremiseViolated if the refocused odd moments exceed
/// 1e-10.
RefocusReport refocus_compare(const ForceSchedule& single, const ForceSchedule& refocused, const ModeSpectrum& modes,
                              const HilbertSpace& space, const LogicalEncoding& enc, const DephasingModel& model,
                              const PropagationOptions& opts = {});

struct ThermalReport {
  std::vector<std::size_t> fock_states;
  std::vector<double> fidelities;
  double spread = 0.0;
};

/// Gate fidelity for every initial Fock state (same in all modes),
/// restricted by `projector` on the spins (empty: all spin states).
ThermalReport thermal_insensitivity_scan(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                         const HilbertSpace& space, const std::vector<std::size_t>& fock_states,
                                         const ComplexMatrix& projector = {}, const PropagationOptions& opts = {});

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace iondfs
