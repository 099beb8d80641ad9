#pragma once

#include "iondfs/hilbert.hpp"
#include "iondfs/linalg.hpp"
#include "iondfs/modes.hpp"
#include "iondfs/pulse.hpp"
#include "iondfs/schedule.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace iondfs {

/// H(t) = Σ_j c_j(t) O_j over fixed sparse operators. Callers add both a
/// term and its adjoint (with conjugate coefficient) to keep H Hermitian.
class TimeDependentHamiltonian {
 public:
  using Coefficient = std::function<Complex(double)>;
  /// Propagated columns, stored by rows so each basis state is contiguous.
  using Block = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  explicit TimeDependentHamiltonian(std::size_t dimension) : dimension_(dimension) {}

  void add(SparseOperator op, Coefficient coefficient);
  void add_static(SparseOperator op, double scale = 1.0);

  std::size_t dimension() const { return dimension_; }
  std::size_t term_count() const { return terms_.size(); }

  std::vector<Complex> coefficients(double t) const;
  /// out = H x for coefficients previously obtained at some t.
  void apply(const std::vector<Complex>& coefficients, const Block& x, Block& out) const;
  double norm_bound(const std::vector<Complex>& coefficients) const;
  ComplexMatrix dense(double t) const;

 private:
  struct Term {
    Eigen::SparseMatrix<Complex, Eigen::RowMajor> op;
    double norm;
    Coefficient coefficient;
  };
  std::size_t dimension_;
  std::vector<Term> terms_;
};

/// H(t) = −Σ_k Σ_μ g_μ^k(t) σ_α^{(μ)} (a_k e^{−iω_k t} + a_k† e^{iω_k t}) in the
/// frame rotating with the free phonon Hamiltonian. Qubit q carries ion q;
/// the space must hold one ladder per mode of `modes`.
TimeDependentHamiltonian driven_hamiltonian(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                            const HilbertSpace& space);

ComplexMatrix build_hamiltonian(const ForceSchedule& schedule, const ModeSpectrum& modes,
                                const HilbertSpace& space, double t);

struct PropagationOptions {
  std::size_t steps = 0;  // initial step count; 0 picks base_steps_per_period
  std::size_t min_steps_per_period = 40;  // floor enforced on explicit `steps`
  std::size_t base_steps_per_period = 48;  // automatic starting grid
  double tolerance = 1e-6;  // ‖U_2N − U_N‖_max
  int max_doublings = 6;  // 0: one pass at `steps`, no convergence check
  double tail_tolerance = 1e-8;
  bool check_tail = true;
  std::size_t guard_max_occupation = 2;  // columns watched by the tail guard
  std::size_t max_dense_dimension = std::size_t{1} << 12;
};

struct Propagation {
  ComplexMatrix op;             // dimension × (number of propagated columns)
  std::size_t steps = 0;        // accepted step count
  double step_change = 0.0;     // ‖U_N − U_{N/2}‖_max at acceptance
  double tail_population = 0.0; // max top-two-level population seen on guarded columns
};

/// Time-ordered propagator from fourth-order commutator-free Magnus steps
/// (two exponentials at the Gauss points per step), doubling the step count
/// until successive results agree.
///
/// `columns` lists the basis states to propagate (empty: all, giving the full
/// propagator). `alignment` forces step counts to multiples of it so force
/// discontinuities land on step boundaries. The tail guard watches columns
/// whose every mode occupation is ≤ guard_max_occupation and throws CutoffGuard
/// when the population of the two highest Fock levels exceeds the tolerance.
Propagation propagate_hamiltonian(const TimeDependentHamiltonian& hamiltonian, const HilbertSpace& space,
                                  double duration, double max_frequency, std::size_t alignment,
                                  const std::vector<std::size_t>& columns, const PropagationOptions& opts);

/// Full propagator of the driven Hamiltonian over the whole schedule.
Propagation propagate(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& space,
                      const PropagationOptions& opts = {});

/// Step count alignment that puts every piece boundary of `schedule` on the grid.
std::size_t step_alignment(const ForceSchedule& schedule);

/// exp(−iΦ σ_α^{(i)} σ_α'^{(j)}) on an n-qubit register (closed form).
struct GateAxes {
  std::size_t first_qubit = 0;
  PauliAxis first_axis = PauliAxis::Z;
  std::size_t second_qubit = 1;
  PauliAxis second_axis = PauliAxis::Z;
};
ComplexMatrix analytic_gate(double phase, const GateAxes& axes, std::size_t n_qubits = 2);

/// Gate axes implied by a two-target schedule.
GateAxes gate_axes(const ForceSchedule& schedule);

struct PhaseFidelity {
  double fidelity = 0.0;
  double phase = 0.0;
};

/// |tr(P U† V P)| / tr(P) and arg tr(P U† V P). Throws ZeroTrace if tr P = 0.
PhaseFidelity fidelity_mod_phase(const ComplexMatrix& u, const ComplexMatrix& v, const ComplexMatrix& projector);

/// Spin block ⟨n|U|n⟩ for a fixed phonon configuration `occupations`.
ComplexMatrix spin_block(const ComplexMatrix& op, const HilbertSpace& space,
                         const std::vector<std::size_t>& occupations);

/// Basis indices |s⟩|n⟩ for every spin state s, in spin order.
std::vector<std::size_t> fock_columns(const HilbertSpace& space, const std::vector<std::size_t>& occupations);

/// Spin block of a column-propagated operator whose columns start at
/// `first_column` and follow fock_columns(space, occupations).
ComplexMatrix spin_block_columns(const ComplexMatrix& columns, const HilbertSpace& space,
                                 const std::vector<std::size_t>& occupations, std::size_t first_column);

struct OracleResult {
  PhaseReport phase;
  Propagation propagation;
  std::vector<std::size_t> fock_states;
  std::vector<double> fidelities;  // per fock state, vs analytic_gate(Φ)
  std::vector<ComplexMatrix> blocks;
  ComplexMatrix target;
};

/// Propagates the schedule and compares every listed Fock state (same
/// occupation in all modes) with the analytic gate at the quadrature phase.
/// Fills PhaseReport::global_phase from the n = first Fock state.
OracleResult run_oracle(const ForceSchedule& schedule, const ModeSpectrum& modes, const HilbertSpace& space,
                        IonPair pair, const std::vector<std::size_t>& fock_states,
                        const PropagationOptions& opts = {});

}  // namespace iondfs
