#include "iondfs/decoherence.hpp"

#include "iondfs/errors.hpp"
#include "iondfs/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace iondfs {

std::string to_string(NoiseKind kind) {
  return kind == NoiseKind::QuasiStaticScalar ? "quasi_static_scalar" : "single_bath_mode";
}

NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "quasi_static_scalar") return NoiseKind::QuasiStaticScalar;
  if (text == "single_bath_mode") return NoiseKind::SingleBathMode;
  throw Error(ErrorCode::InvalidArgument, "unknown noise kind '" + std::string(text) + "'");
}

void DephasingModel::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::InvalidArgument, "sigma_B must be >= 0");
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  if (kind == NoiseKind::SingleBathMode) {
    if (!(bath_frequency > 0.0)) throw Error(ErrorCode::InvalidArgument, "bath frequency must be > 0");
    if (bath_cutoff < 1) throw Error(ErrorCode::InvalidArgument, "bath cutoff must be >= 1");
    if (!std::isfinite(bath_coupling)) throw Error(ErrorCode::InvalidArgument, "bath coupling must be finite");
  }
}

std::vector<double> DephasingModel::betas() const {
  validate();
  if (kind == NoiseKind::SingleBathMode) return {0.0};
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(samples);
  for (auto& b : out) b = sigma * normal(gen);
  return out;
}

double NoiseReport::mean_infidelity() const {
  double sum = 0.0;
  for (double f : fidelities) sum += 1.0 - f;
  return fidelities.empty() ? 0.0 : sum / static_cast<double>(fidelities.size());
}

HilbertSpace noise_space(const HilbertSpace& space, const DephasingModel& model) {
  return model.kind == NoiseKind::SingleBathMode ? space.with_extra_mode(model.bath_cutoff) : space;
}

TimeDependentHamiltonian noisy_hamiltonian(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                           const HilbertSpace& space, const DephasingModel& model, double beta) {
  model.validate();
  auto h = driven_hamiltonian(schedule, modes, space);
  const SparseOperator z = space.collective_z();
  if (model.kind == NoiseKind::QuasiStaticScalar) {
    if (beta != 0.0) h.add_static(z, beta);
    return h;
  }
  if (space.n_modes() != modes.n_modes() + 1) {
    throw Error(ErrorCode::DimensionMismatch, "bath model needs one ladder beyond the motional modes");
  }
  const SparseOperator lowering = model.bath_coupling * (z * space.annihilation(space.n_modes() - 1));
  const SparseOperator raising = SparseOperator(lowering.adjoint());
  const double w = model.bath_frequency;
  h.add(lowering, [w](double t) { return std::polar(1.0, -w * t); });
  h.add(raising, [w](double t) { return std::polar(1.0, w * t); });
  return h;
}

namespace {

double propagation_frequency(const ModeSpectrum& modes, const DephasingModel& model) {
  double w = modes.n_modes() > 0 ? modes.max_frequency() : 0.0;
  if (model.kind == NoiseKind::SingleBathMode) w = std::max(w, model.bath_frequency);
  return w;
}

void check_dense(const HilbertSpace& space) {
  if (space.dimension() > PropagationOptions{}.max_dense_dimension) {
    throw Error(ErrorCode::DimensionGuard, "dense operator of dimension " + std::to_string(space.dimension()));
  }
}

// |θ̂| scale per (target, mode).
double weighted_coupling(const ModeSpectrum& modes, const ForceTarget& target, std::size_t mode) {
  return modes.coupling(static_cast<Eigen::Index>(target.ion), static_cast<Eigen::Index>(mode)) * target.weight;
}

ComplexMatrix ladder(std::size_t cutoff) {
  const auto n = static_cast<Eigen::Index>(cutoff + 1);
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

// Precomputed pieces of a code-space gate study.
struct CodeStudy {
  HilbertSpace space;
  ComplexMatrix target;  // logical
  std::vector<std::size_t> columns;
  double phase = 0.0;

  CodeStudy(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& system,
            const LogicalEncoding& enc, const DephasingModel& model)
      : space(noise_space(system, model)) {
    if (enc.n_physical() != system.n_qubits()) {
      throw Error(ErrorCode::DimensionMismatch, "encoding and space disagree on the qubit count");
    }
    const auto spin_dim = static_cast<Eigen::Index>(system.spin_dimension());
    ComplexMatrix gate = ComplexMatrix::Identity(spin_dim, spin_dim);
    if (schedule.targets.size() == 2 && schedule.amplitude != 0.0) {
      phase = coupling_phase(schedule, modes, {schedule.targets[0].ion, schedule.targets[1].ion}).phase_total;
      gate = analytic_gate(phase, gate_axes(schedule), system.n_qubits());
    }
    const ComplexMatrix v = enc.isometry();
    target = v.adjoint() * gate * v;
    const std::vector<std::size_t> vacuum(space.n_modes(), 0);
    for (std::size_t l = 0; l < enc.logical_dimension(); ++l) {
      columns.push_back(space.index(enc.physical_index(l), vacuum));
    }
  }

  double fidelity(const ComplexMatrix& propagated) const {
    const auto n = static_cast<Eigen::Index>(columns.size());
    ComplexMatrix k(n, n);
    for (Eigen::Index r = 0; r < n; ++r) k.row(r) = propagated.row(static_cast<Eigen::Index>(columns[static_cast<std::size_t>(r)]));
    return std::abs((target.adjoint() * k).trace()) / static_cast<double>(n);
  }
};

}  // namespace

Propagation total_propagate(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& space,
                            const DephasingModel& model, double beta, const std::vector<std::size_t>& columns,
                            const PropagationOptions& opts) {
  const HilbertSpace full = noise_space(space, model);
  const auto h = noisy_hamiltonian(schedule, modes, full, model, beta);
  return propagate_hamiltonian(h, full, schedule.total_duration(), propagation_frequency(modes, model),
                               step_alignment(schedule), columns, opts);
}

ComplexMatrix gauge_operator(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& space,
                             double t) {
  check_dense(space);
  if (space.n_modes() < modes.n_modes()) throw Error(ErrorCode::DimensionMismatch, "space lacks motional ladders");
  const ComplexVector eta = profile_transform_until(schedule, modes.frequencies, t);
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  SparseOperator generator(dim, dim);
  for (std::size_t k = 0; k < modes.n_modes(); ++k) {
    const SparseOperator a = space.annihilation(k);
    const Complex e = eta(static_cast<Eigen::Index>(k));
    const SparseOperator x = e * a + std::conj(e) * SparseOperator(a.adjoint());
    for (const auto& target : schedule.targets) {
      if (target.ion >= space.n_qubits()) throw Error(ErrorCode::DimensionMismatch, "target ion has no qubit");
      const double c = weighted_coupling(modes, target, k);
      if (c != 0.0) generator += Complex(c, 0.0) * (x * space.pauli(target.ion, target.axis));
    }
  }
  return expm(kI * ComplexMatrix(generator));
}

ComplexMatrix residual_noise_operator(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                      const HilbertSpace& space) {
  return gauge_operator(schedule, modes, space, schedule.total_duration());
}

ComplexMatrix gauged_dephasing_operator(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                        const HilbertSpace& space, double t) {
  check_dense(space);
  if (modes.n_modes() != 1 || space.n_modes() != 1) {
    throw Error(ErrorCode::ModelMismatch, "closed form needs exactly one mode");
  }
  double strength = -1.0;
  for (const auto& target : schedule.targets) {
    if (target.axis == PauliAxis::Z) continue;
    const double c = std::abs(weighted_coupling(modes, target, 0));
    if (strength < 0.0) {
      strength = c;
    } else if (std::abs(c - strength) > 1e-12 * std::max(c, strength)) {
      throw Error(ErrorCode::ModelMismatch, "targets couple to the mode with unequal strength");
    }
  }

  const auto dim = static_cast<Eigen::Index>(space.dimension());
  ComplexMatrix z = ComplexMatrix::Zero(dim, dim);
  for (std::size_t q = 0; q < space.n_qubits(); ++q) z += ComplexMatrix(space.pauli(q, PauliAxis::Z));
  if (strength < 0.0) return z;

  const Complex eta = profile_transform_until(schedule, modes.frequencies, t)(0);
  const SparseOperator a = space.annihilation(0);
  const ComplexMatrix x = ComplexMatrix(eta * a + std::conj(eta) * SparseOperator(a.adjoint()));
  for (const auto& target : schedule.targets) {
    if (target.axis == PauliAxis::Z) continue;
    const double c = weighted_coupling(modes, target, 0);
    const ComplexMatrix cosine = hermitian_function(x, [c](double v) { return Complex(std::cos(2.0 * c * v), 0.0); });
    const ComplexMatrix sine = hermitian_function(x, [c](double v) { return Complex(std::sin(2.0 * c * v), 0.0); });
    const ComplexMatrix sz = ComplexMatrix(space.pauli(target.ion, PauliAxis::Z));
    const ComplexMatrix mixing = ComplexMatrix(space.pauli(target.ion, target.axis)) * sz;
    z += cosine * sz - sz - kI * (sine * mixing);
  }
  return z;
}

double code_fidelity(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& space,
                     const LogicalEncoding& enc, const DephasingModel& model, double beta,
                     const PropagationOptions& opts) {
  const CodeStudy study(schedule, modes, space, enc, model);
  const auto prop = total_propagate(schedule, modes, space, model, beta, study.columns, opts);
  return study.fidelity(prop.op);
}

NoiseReport noise_report(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& space,
                         const LogicalEncoding& enc, const DephasingModel& model, const PropagationOptions& opts) {
  const CodeStudy study(schedule, modes, space, enc, model);
  NoiseReport report;
  report.cycles = schedule.cycles;
  report.phase = study.phase;
  report.betas = model.betas();
  report.fidelities.assign(report.betas.size(), 0.0);

  std::size_t largest = 0;
  for (std::size_t s = 1; s < report.betas.size(); ++s) {
    if (std::abs(report.betas[s]) > std::abs(report.betas[largest])) largest = s;
  }
  const auto first = total_propagate(schedule, modes, space, model, report.betas[largest], study.columns, opts);
  report.fidelities[largest] = study.fidelity(first.op);
  report.steps = first.steps;

  PropagationOptions fixed = opts;
  fixed.steps = first.steps;
  fixed.max_doublings = 0;
  for (std::size_t s = 0; s < report.betas.size(); ++s) {
    if (s == largest) continue;
    const auto prop = total_propagate(schedule, modes, space, model, report.betas[s], study.columns, fixed);
    report.fidelities[s] = study.fidelity(prop.op);
  }

  double sum = 0.0;
  for (double f : report.fidelities) sum += f;
  const auto n = static_cast<double>(report.fidelities.size());
  report.mean_fidelity = sum / n;
  double var = 0.0;
  for (double f : report.fidelities) var += (f - report.mean_fidelity) * (f - report.mean_fidelity);
  report.std_fidelity = report.fidelities.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  return report;
}

RefocusMoments refocus_moments(const ForceSchedule& schedule, const ModeSpectrum& modes,
                               const HilbertSpace& space) {
  if (space.n_modes() < modes.n_modes()) throw Error(ErrorCode::DimensionMismatch, "space lacks motional ladders");
  RefocusMoments out;
  for (std::size_t k = 0; k < modes.n_modes(); ++k) {
    double c = 0.0;
    for (const auto& target : schedule.targets) c = std::max(c, std::abs(weighted_coupling(modes, target, k)));
    if (c == 0.0) continue;
    const auto traj = eta_trajectory(schedule, modes.frequencies(static_cast<Eigen::Index>(k)));
    const ComplexMatrix a = ladder(space.cutoff(k));
    Complex first = 0.0;
    Complex third = 0.0;
    ComplexMatrix sine_sum = ComplexMatrix::Zero(a.rows(), a.cols());
    ComplexMatrix previous;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const Complex e = traj.eta[i];
      const ComplexMatrix x = e * a + std::conj(e) * a.adjoint();
      ComplexMatrix sine = hermitian_function(x, [c](double v) { return Complex(std::sin(2.0 * c * v), 0.0); });
      if (i > 0) {
        const double h = traj.times[i] - traj.times[i - 1];
        const Complex e0 = traj.eta[i - 1];
        first += 0.5 * h * (e0 + e);
        third += 0.5 * h * (e0 * e0 * e0 + e * e * e);
        sine_sum += 0.5 * h * (previous + sine);
      }
      previous = std::move(sine);
    }
    out.first = std::max(out.first, c * std::abs(first));
    out.third = std::max(out.third, c * c * c * std::abs(third));
    out.sin_norm += max_abs(sine_sum);
  }
  return out;
}

double RefocusReport::ratio() const {
  const double base = single.mean_infidelity();
  return base > 0.0 ? refocused.mean_infidelity() / base : 0.0;
}

RefocusReport refocus_compare(const ForceSchedule& single, const ForceSchedule& refocused, const ModeSpectrum& modes,
                              const HilbertSpace& space, const LogicalEncoding& enc, const DephasingModel& model,
                              const PropagationOptions& opts) {
  RefocusReport out;
  out.moments = refocus_moments(refocused, modes, space);
  if (out.moments.first > 1e-10 || out.moments.third > 1e-10) {
    throw Error(ErrorCode::RefocusPremiseViolated,
                "odd moments " + std::to_string(out.moments.first) + ", " + std::to_string(out.moments.third));
  }
  out.single = noise_report(single, modes, space, enc, model, opts);
  out.refocused = noise_report(refocused, modes, space, enc, model, opts);
  const double a = out.single.phase;
  const double b = out.refocused.phase;
  if (std::abs(a - b) > 1e-8 * std::max(std::abs(a), std::abs(b))) {
    throw Error(ErrorCode::InvalidArgument, "schedules reach different phases");
  }
  return out;
}

ThermalReport thermal_insensitivity_scan(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                         const HilbertSpace& space, const std::vector<std::size_t>& fock_states,
                                         const ComplexMatrix& projector, const PropagationOptions& opts) {
  if (fock_states.empty()) throw Error(ErrorCode::InvalidArgument, "no Fock states to scan");
  ThermalReport out;
  out.fock_states = fock_states;
  const auto spin_dim = static_cast<Eigen::Index>(space.spin_dimension());
  if (schedule.targets.size() != 2 || schedule.amplitude == 0.0) {
    // Nothing drives the spins: every block must be the identity.
    const auto h = driven_hamiltonian(schedule, modes, space);
    std::vector<std::size_t> columns;
    for (std::size_t n : fock_states) {
      const auto cols = fock_columns(space, std::vector<std::size_t>(space.n_modes(), n));
      columns.insert(columns.end(), cols.begin(), cols.end());
    }
    const auto prop = propagate_hamiltonian(h, space, schedule.total_duration(),
                                            modes.n_modes() > 0 ? modes.max_frequency() : 0.0,
                                            step_alignment(schedule), columns, opts);
    const ComplexMatrix p = projector.size() == 0 ? ComplexMatrix::Identity(spin_dim, spin_dim) : projector;
    for (std::size_t i = 0; i < fock_states.size(); ++i) {
      const auto block = spin_block_columns(prop.op, space, std::vector<std::size_t>(space.n_modes(), fock_states[i]),
                                            i * space.spin_dimension());
      out.fidelities.push_back(fidelity_mod_phase(ComplexMatrix::Identity(spin_dim, spin_dim), block, p).fidelity);
    }
  } else {
    const auto oracle = run_oracle(schedule, modes, space, {schedule.targets[0].ion, schedule.targets[1].ion},
                                   fock_states, opts);
    for (const auto& block : oracle.blocks) {
      out.fidelities.push_back(projector.size() == 0 ? fidelity_mod_phase(oracle.target, block,
                                                                          ComplexMatrix::Identity(spin_dim, spin_dim))
                                                             .fidelity
                                                     : fidelity_mod_phase(oracle.target, block, projector).fidelity);
    }
  }
  const auto [lo, hi] = std::minmax_element(out.fidelities.begin(), out.fidelities.end());
  out.spread = *hi - *lo;
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "need two or more points");
  double mx = 0.0, my = 0.0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "log-log fit needs positive data");
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "x values are all equal");
  return sxy / sxx;
}

}  // namespace iondfs
