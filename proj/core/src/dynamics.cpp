#include "iondfs/dynamics.hpp"

#include "iondfs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

namespace iondfs {

void TimeDependentHamiltonian::add(SparseOperator op, Coefficient coefficient) {
  if (static_cast<std::size_t>(op.rows()) != dimension_ || static_cast<std::size_t>(op.cols()) != dimension_) {
    throw Error(ErrorCode::DimensionMismatch, "Hamiltonian term has the wrong dimension");
  }
  op.makeCompressed();
  const double norm = one_norm(op);
  Eigen::SparseMatrix<Complex, Eigen::RowMajor> rows = op;
  rows.makeCompressed();
  terms_.push_back({std::move(rows), norm, std::move(coefficient)});
}

void TimeDependentHamiltonian::add_static(SparseOperator op, double scale) {
  add(std::move(op), [scale](double) { return Complex(scale, 0.0); });
}

std::vector<Complex> TimeDependentHamiltonian::coefficients(double t) const {
  std::vector<Complex> c;
  c.reserve(terms_.size());
  for (const auto& term : terms_) c.push_back(term.coefficient(t));
  return c;
}

void TimeDependentHamiltonian::apply(const std::vector<Complex>& coefficients, const Block& x, Block& out) const {
  const Eigen::Index cols = x.cols();
  out.setZero(x.rows(), cols);
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    if (coefficients[j] == Complex(0.0, 0.0)) continue;
    const auto& op = terms_[j].op;
    for (Eigen::Index r = 0; r < op.outerSize(); ++r) {
      auto* dst = reinterpret_cast<double*>(out.data() + r * cols);
      for (decltype(terms_[j].op)::InnerIterator it(op, r); it; ++it) {
        // Spelled out in reals: std::complex products take the slow
        // NaN-checking path.
        const Complex v = coefficients[j] * it.value();
        const double vr = v.real();
        const double vi = v.imag();
        const auto* src = reinterpret_cast<const double*>(x.data() + it.col() * cols);
        for (Eigen::Index k = 0; k < cols; ++k) {
          const double xr = src[2 * k];
          const double xi = src[2 * k + 1];
          dst[2 * k] += vr * xr - vi * xi;
          dst[2 * k + 1] += vr * xi + vi * xr;
        }
      }
    }
  }
}

double TimeDependentHamiltonian::norm_bound(const std::vector<Complex>& coefficients) const {
  double bound = 0.0;
  for (std::size_t j = 0; j < terms_.size(); ++j) bound += std::abs(coefficients[j]) * terms_[j].norm;
  return bound;
}

ComplexMatrix TimeDependentHamiltonian::dense(double t) const {
  const auto n = static_cast<Eigen::Index>(dimension_);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (const auto& term : terms_) h += term.coefficient(t) * ComplexMatrix(SparseOperator(term.op));
  return h;
}

namespace {

// Profile lookup with the piece list computed once.
std::function<double(double)> profile_function(const ForceSchedule& schedule) {
  auto shared = std::make_shared<const ForceSchedule>(schedule);
  auto pieces = std::make_shared<const std::vector<Piece>>(schedule.pieces());
  return [shared, pieces](double t) {
    auto it = std::upper_bound(pieces->begin(), pieces->end(), t,
                               [](double value, const Piece& p) { return value < p.end; });
    if (it == pieces->end()) it = std::prev(pieces->end());
    return shared->profile_on(*it, t);
  };
}

void check_targets(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& space) {
  if (space.n_modes() < modes.n_modes()) {
    throw Error(ErrorCode::DimensionMismatch, "space has " + std::to_string(space.n_modes()) +
                                                  " ladders for " + std::to_string(modes.n_modes()) + " modes");
  }
  for (const auto& t : schedule.targets) {
    if (t.ion >= space.n_qubits() || t.ion >= modes.n_ions()) {
      throw Error(ErrorCode::DimensionMismatch, "target ion " + std::to_string(t.ion) + " has no qubit");
    }
  }
}

// exp(−i H Δt) x by a Taylor series, sub-stepped so each series argument
// has norm ≤ 1/2.
struct Stepper {
  using Block = TimeDependentHamiltonian::Block;
  const TimeDependentHamiltonian& h;
  Block term, next, acc;

  static double largest(const Block& b) { return b.size() == 0 ? 0.0 : b.cwiseAbs().maxCoeff(); }

  void exponential(const std::vector<Complex>& coefficients, double dt, Block& x) {
    const double nu = h.norm_bound(coefficients) * dt;
    const int substeps = std::max(1, static_cast<int>(std::ceil(nu / 0.5)));
    const double sub_dt = dt / substeps;
    for (int s = 0; s < substeps; ++s) {
      acc = x;
      term = x;
      for (int k = 1; k <= 40; ++k) {
        h.apply(coefficients, term, next);
        term = next * Complex(0.0, -sub_dt / k);
        acc += term;
        if (largest(term) <= 1e-18 * largest(acc)) break;
      }
      x.swap(acc);
    }
  }

  // Fourth-order commutator-free Magnus step over [t, t + dt].
  void step(double t, double dt, Block& x) {
    constexpr double offset = 0.28867513459481288225;  // √3/6
    constexpr double heavy = 0.25 + offset;
    constexpr double light = 0.25 - offset;
    const auto early = h.coefficients(t + (0.5 - offset) * dt);
    const auto late = h.coefficients(t + (0.5 + offset) * dt);
    std::vector<Complex> mix(early.size());
    for (std::size_t j = 0; j < mix.size(); ++j) mix[j] = heavy * early[j] + light * late[j];
    exponential(mix, dt, x);
    for (std::size_t j = 0; j < mix.size(); ++j) mix[j] = light * early[j] + heavy * late[j];
    exponential(mix, dt, x);
  }
};

}  // namespace

TimeDependentHamiltonian driven_hamiltonian(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                            const HilbertSpace& space) {
  schedule.validate();
  check_targets(schedule, modes, space);
  TimeDependentHamiltonian h(space.dimension());
  const auto f = profile_function(schedule);
  for (std::size_t k = 0; k < modes.n_modes(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    SparseOperator spin_sum(static_cast<Eigen::Index>(space.dimension()),
                            static_cast<Eigen::Index>(space.dimension()));
    for (const auto& t : schedule.targets) {
      const double c = modes.coupling(static_cast<Eigen::Index>(t.ion), kk) * t.weight;
      if (c != 0.0) spin_sum += Complex(c, 0.0) * space.pauli(t.ion, t.axis);
    }
    const SparseOperator lowering = spin_sum * space.annihilation(k);
    const SparseOperator raising = SparseOperator(lowering.adjoint());
    const double w = modes.frequencies(kk);
    h.add(lowering, [f, w](double t) { return -f(t) * std::polar(1.0, -w * t); });
    h.add(raising, [f, w](double t) { return -f(t) * std::polar(1.0, w * t); });
  }
  return h;
}

ComplexMatrix build_hamiltonian(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                const HilbertSpace& space, double t) {
  return driven_hamiltonian(schedule, modes, space).dense(t);
}

std::size_t step_alignment(const ForceSchedule& schedule) {
  return schedule.cycles * schedule.grid_alignment();
}

Propagation propagate_hamiltonian(const TimeDependentHamiltonian& hamiltonian, const HilbertSpace& space,
                                  double duration, double max_frequency, std::size_t alignment,
                                  const std::vector<std::size_t>& columns, const PropagationOptions& opts) {
  if (hamiltonian.dimension() != space.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "Hamiltonian and space dimensions differ");
  }
  if (columns.empty() && space.dimension() > opts.max_dense_dimension) {
    throw Error(ErrorCode::DimensionGuard, "full propagator of dimension " + std::to_string(space.dimension()) +
                                               " exceeds " + std::to_string(opts.max_dense_dimension));
  }
  if (!(duration > 0.0)) throw Error(ErrorCode::InvalidArgument, "duration must be > 0");
  alignment = std::max<std::size_t>(alignment, 1);

  const double periods = max_frequency > 0.0 ? duration * max_frequency / (2.0 * std::numbers::pi) : 1.0;
  const auto minimum = static_cast<std::size_t>(std::ceil(periods * static_cast<double>(opts.min_steps_per_period) - 1e-9));
  if (opts.steps != 0 && opts.steps < minimum) {
    throw Error(ErrorCode::InvalidArgument, std::to_string(opts.steps) + " steps is below " +
                                                std::to_string(opts.min_steps_per_period) + " per shortest period");
  }
  const auto automatic =
      static_cast<std::size_t>(std::ceil(periods * static_cast<double>(opts.base_steps_per_period) - 1e-9));
  std::size_t steps = opts.steps != 0 ? opts.steps : std::max(automatic, minimum);
  steps = ((steps + alignment - 1) / alignment) * alignment;

  const auto dim = static_cast<Eigen::Index>(space.dimension());
  ComplexMatrix initial;
  std::vector<std::size_t> basis = columns;
  if (basis.empty()) {
    initial = ComplexMatrix::Identity(dim, dim);
    basis.resize(space.dimension());
    for (std::size_t i = 0; i < basis.size(); ++i) basis[i] = i;
  } else {
    initial = ComplexMatrix::Zero(dim, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t c = 0; c < basis.size(); ++c) {
      if (basis[c] >= space.dimension()) throw Error(ErrorCode::IndexOutOfRange, "initial basis state");
      initial(static_cast<Eigen::Index>(basis[c]), static_cast<Eigen::Index>(c)) = 1.0;
    }
  }

  // Rows in the two highest Fock levels of any mode, and the columns that
  // start low in every ladder.
  std::vector<Eigen::Index> tail_rows;
  std::vector<Eigen::Index> guarded;
  if (opts.check_tail && space.n_modes() > 0) {
    for (std::size_t r = 0; r < space.dimension(); ++r) {
      for (std::size_t m = 0; m < space.n_modes(); ++m) {
        const std::size_t c = space.cutoff(m);
        if (space.occupation(r, m) + 1 >= c) {
          tail_rows.push_back(static_cast<Eigen::Index>(r));
          break;
        }
      }
    }
    for (std::size_t c = 0; c < basis.size(); ++c) {
      bool low = true;
      for (std::size_t m = 0; m < space.n_modes(); ++m) {
        const std::size_t n = space.occupation(basis[c], m);
        if (n > opts.guard_max_occupation || n + 2 >= space.cutoff(m)) low = false;
      }
      if (low) guarded.push_back(static_cast<Eigen::Index>(c));
    }
  }

  auto run = [&](std::size_t n_steps, double& tail) {
    TimeDependentHamiltonian::Block x = initial;
    Stepper stepper{hamiltonian, {}, {}, {}};
    const double dt = duration / static_cast<double>(n_steps);
    tail = 0.0;
    for (std::size_t s = 0; s < n_steps; ++s) {
      stepper.step(static_cast<double>(s) * dt, dt, x);
      for (Eigen::Index c : guarded) {
        double p = 0.0;
        for (Eigen::Index r : tail_rows) p += std::norm(x(r, c));
        tail = std::max(tail, p);
      }
    }
    return x;
  };

  auto accept = [&](ComplexMatrix op, double change, double tail) {
    if (tail > opts.tail_tolerance) {
      throw Error(ErrorCode::CutoffGuard, "top Fock levels reach population " + std::to_string(tail) +
                                              "; raise the Fock cutoff");
    }
    return Propagation{std::move(op), steps, change, tail};
  };

  double tail = 0.0;
  ComplexMatrix coarse = run(steps, tail);
  if (opts.max_doublings == 0) return accept(std::move(coarse), 0.0, tail);
  for (int d = 0; d < opts.max_doublings; ++d) {
    steps *= 2;
    ComplexMatrix fine = run(steps, tail);
    const double change = max_abs(fine - coarse);
    if (change < opts.tolerance) return accept(std::move(fine), change, tail);
    coarse = std::move(fine);
  }
  throw Error(ErrorCode::NotConverged,
              "propagator still changing after " + std::to_string(opts.max_doublings) + " step doublings");
}

Propagation propagate(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& space,
                      const PropagationOptions& opts) {
  const auto h = driven_hamiltonian(schedule, modes, space);
  return propagate_hamiltonian(h, space, schedule.total_duration(), modes.max_frequency(),
                               step_alignment(schedule), {}, opts);
}

ComplexMatrix analytic_gate(double phase, const GateAxes& axes, std::size_t n_qubits) {
  if (axes.first_qubit == axes.second_qubit) {
    throw Error(ErrorCode::InvalidArgument, "gate needs two distinct qubits");
  }
  const ComplexMatrix product =
      spin_pauli(n_qubits, axes.first_qubit, axes.first_axis) * spin_pauli(n_qubits, axes.second_qubit, axes.second_axis);
  const auto dim = product.rows();
  return std::cos(phase) * ComplexMatrix::Identity(dim, dim) - kI * std::sin(phase) * product;
}

GateAxes gate_axes(const ForceSchedule& schedule) {
  if (schedule.targets.size() != 2) throw Error(ErrorCode::InvalidArgument, "gate needs exactly two targets");
  return {schedule.targets[0].ion, schedule.targets[0].axis, schedule.targets[1].ion, schedule.targets[1].axis};
}

PhaseFidelity fidelity_mod_phase(const ComplexMatrix& u, const ComplexMatrix& v, const ComplexMatrix& projector) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || projector.rows() != u.cols() ||
      projector.cols() != u.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "fidelity operands differ in shape");
  }
  const double trace_p = projector.trace().real();
  if (std::abs(trace_p) < 1e-14) throw Error(ErrorCode::ZeroTrace, "projector has zero trace");
  const Complex overlap = (projector * u.adjoint() * v * projector).trace();
  return {std::abs(overlap) / trace_p, std::arg(overlap)};
}

ComplexMatrix spin_block(const ComplexMatrix& op, const HilbertSpace& space,
                         const std::vector<std::size_t>& occupations) {
  if (static_cast<std::size_t>(op.rows()) != space.dimension() ||
      static_cast<std::size_t>(op.cols()) != space.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "operator does not act on this space");
  }
  const auto s = static_cast<Eigen::Index>(space.spin_dimension());
  ComplexMatrix block(s, s);
  for (Eigen::Index r = 0; r < s; ++r) {
    const auto row = static_cast<Eigen::Index>(space.index(static_cast<std::size_t>(r), occupations));
    for (Eigen::Index c = 0; c < s; ++c) {
      block(r, c) = op(row, static_cast<Eigen::Index>(space.index(static_cast<std::size_t>(c), occupations)));
    }
  }
  return block;
}

std::vector<std::size_t> fock_columns(const HilbertSpace& space, const std::vector<std::size_t>& occupations) {
  std::vector<std::size_t> cols(space.spin_dimension());
  for (std::size_t s = 0; s < cols.size(); ++s) cols[s] = space.index(s, occupations);
  return cols;
}

ComplexMatrix spin_block_columns(const ComplexMatrix& columns, const HilbertSpace& space,
                                 const std::vector<std::size_t>& occupations, std::size_t first_column) {
  const auto s = static_cast<Eigen::Index>(space.spin_dimension());
  if (static_cast<std::size_t>(columns.rows()) != space.dimension() ||
      static_cast<Eigen::Index>(first_column) + s > columns.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "column block does not fit");
  }
  const auto rows = fock_columns(space, occupations);
  ComplexMatrix block(s, s);
  for (Eigen::Index r = 0; r < s; ++r) {
    block.row(r) = columns.row(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)]))
                       .segment(static_cast<Eigen::Index>(first_column), s);
  }
  return block;
}

OracleResult run_oracle(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& space,
                        IonPair pair, const std::vector<std::size_t>& fock_states, const PropagationOptions& opts) {
  OracleResult result;
  result.phase = coupling_phase(schedule, modes, pair);
  std::vector<std::size_t> columns;
  for (std::size_t n : fock_states) {
    for (std::size_t m = 0; m < space.n_modes(); ++m) {
      if (n >= space.cutoff(m)) throw Error(ErrorCode::IndexOutOfRange, "Fock state above the cutoff");
    }
    const auto cols = fock_columns(space, std::vector<std::size_t>(space.n_modes(), n));
    columns.insert(columns.end(), cols.begin(), cols.end());
  }
  const auto h = driven_hamiltonian(schedule, modes, space);
  result.propagation = propagate_hamiltonian(h, space, schedule.total_duration(), modes.max_frequency(),
                                             step_alignment(schedule), columns, opts);
  result.target = analytic_gate(result.phase.phase_total, gate_axes(schedule), space.n_qubits());
  const auto s = static_cast<Eigen::Index>(space.spin_dimension());
  const ComplexMatrix all = ComplexMatrix::Identity(s, s);
  result.fock_states = fock_states;
  for (std::size_t i = 0; i < fock_states.size(); ++i) {
    const std::vector<std::size_t> occupations(space.n_modes(), fock_states[i]);
    const auto block = spin_block_columns(result.propagation.op, space, occupations,
                                          i * space.spin_dimension());
    const auto fid = fidelity_mod_phase(result.target, block, all);
    result.fidelities.push_back(fid.fidelity);
    result.blocks.push_back(block);
    if (i == 0) result.phase.global_phase = fid.phase;
  }
  return result;
}

}  // namespace iondfs
