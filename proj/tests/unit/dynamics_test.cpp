#include "iondfs/dfs.hpp"
#include "iondfs/dynamics.hpp"
#include "iondfs/errors.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>

namespace iondfs {
namespace {

constexpr double kPi = std::numbers::pi;

ForceSchedule constant_zz(double amplitude, double duration, PauliAxis axis = PauliAxis::Z) {
  ForceSchedule s;
  s.shape = PulseShape::Constant;
  s.amplitude = amplitude;
  s.duration = duration;
  s.steps_per_cycle = 64;
  s.targets = {{0, axis, 1.0}, {1, axis, 1.0}};
  return s;
}

ModeSpectrum one_mode(double omega = 1.0) { return ModeSpectrum::single_mode(omega, {std::sqrt(0.5), std::sqrt(0.5)}); }

ComplexMatrix ladder(std::size_t cutoff) {
  const auto n = static_cast<Eigen::Index>(cutoff + 1);
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

// Interaction-frame propagator at T from the time-independent lab-frame
// Hamiltonian ω a†a − g Σ_μ σ_α^μ (a + a†), both ions sharing one mode.
ComplexMatrix lab_frame_reference(double omega, double g, char axis, std::size_t cutoff, double duration) {
  using testing::kron;
  const ComplexMatrix a = ladder(cutoff);
  const ComplexMatrix x = a + a.adjoint();
  const ComplexMatrix number = a.adjoint() * a;
  const ComplexMatrix spins = testing::two_qubit(axis, '1') + testing::two_qubit('1', axis);
  const ComplexMatrix h = omega * kron(number, ComplexMatrix::Identity(4, 4)) - g * kron(x, spins);
  const ComplexMatrix lab = (Complex(0.0, -duration) * h).exp();
  const ComplexMatrix frame = (Complex(0.0, omega * duration) * kron(number, ComplexMatrix::Identity(4, 4))).exp();
  return frame * lab;
}

TEST(Hamiltonian, ZeroForceIsZero) {
  const auto space = HilbertSpace::uniform(2, 1, 3);
  const auto h = build_hamiltonian(constant_zz(0.0, 2 * kPi), one_mode(), space, 0.7);
  EXPECT_EQ(max_abs(h), 0.0);
}

TEST(Hamiltonian, SingleQubitDefinition) {
  ForceSchedule s;
  s.shape = PulseShape::Constant;
  s.amplitude = std::sqrt(2.0);  // D̃ = 1/√2, so g = 1
  s.duration = 2 * kPi;
  s.targets = {{0, PauliAxis::Z, 1.0}};
  const auto modes = ModeSpectrum::single_mode(1.0, {1.0});
  const auto h = build_hamiltonian(s, modes, HilbertSpace::uniform(1, 1, 1), 0.0);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  // index = spin + 2 n; σ_z = +1 on spin 0
  expected(0, 2) = expected(2, 0) = -1.0;
  expected(1, 3) = expected(3, 1) = 1.0;
  EXPECT_LT(max_abs(h - expected), 1e-14);
}

TEST(Hamiltonian, HermitianAtRandomTimes) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto modes = analyze_modes(IonArrayConfig::uniform(3, 1.0, 0.1));
  const auto space = HilbertSpace::uniform(3, 3, 2);
  for (int trial = 0; trial < 5; ++trial) {
    ForceSchedule s;
    s.shape = PulseShape::SmoothBump;
    s.amplitude = u(rng);
    s.duration = 5.0 + 10.0 * u(rng);
    s.targets = {{0, PauliAxis::X, u(rng) - 0.5}, {2, PauliAxis::Y, u(rng) - 0.5}};
    const auto h = build_hamiltonian(s, modes, space, s.duration * u(rng));
    EXPECT_LT(max_abs(h - h.adjoint()), 1e-15);
    EXPECT_GT(max_abs(h), 0.0);
  }
}

TEST(Expm, MatchesEigenMatrixFunctions) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (double scale : {0.1, 1.0, 20.0}) {
    ComplexMatrix a(6, 6);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex(n(rng), n(rng)) * scale;
    const ComplexMatrix reference = a.exp();
    EXPECT_LT(max_abs(expm(a) - reference), 1e-12 * std::max(1.0, max_abs(reference)));
  }
}

TEST(Propagate, ZeroScheduleIsIdentity) {
  const auto space = HilbertSpace::uniform(2, 1, 3);
  const auto p = propagate(constant_zz(0.0, 2 * kPi), one_mode(), space);
  ASSERT_EQ(p.op.rows(), 16);
  EXPECT_LT(max_abs(p.op - ComplexMatrix::Identity(16, 16)), 1e-14);
}

TEST(Propagate, MatchesLabFrameExponential) {
  const std::size_t cutoff = 8;
  const auto space = HilbertSpace::uniform(2, 1, cutoff);
  PropagationOptions opts;
  opts.check_tail = false;
  for (double duration : {2 * kPi, kPi}) {
    for (char axis : {'z', 'x'}) {
      const auto s = constant_zz(0.3, duration, axis == 'z' ? PauliAxis::Z : PauliAxis::X);
      const auto p = propagate(s, one_mode(), space, opts);
      const auto reference = lab_frame_reference(1.0, 0.5 * 0.3, axis, cutoff, duration);
      EXPECT_LT(max_abs(p.op - reference), 1e-6) << "axis " << axis << " T " << duration;
      EXPECT_LT(unitarity_defect(p.op), 1e-10);
    }
  }
}

TEST(Propagate, ColumnsMatchFullOperator) {
  const auto space = HilbertSpace::uniform(2, 1, 6);
  const auto s = constant_zz(0.3, kPi);
  PropagationOptions opts;
  opts.check_tail = false;
  const auto full = propagate(s, one_mode(), space, opts);
  const auto h = driven_hamiltonian(s, one_mode(), space);
  const auto cols = fock_columns(space, {2});
  const auto part = propagate_hamiltonian(h, space, s.total_duration(), 1.0, step_alignment(s), cols, opts);
  ASSERT_EQ(part.op.cols(), 4);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    EXPECT_LT(max_abs(part.op.col(static_cast<Eigen::Index>(c)) - full.op.col(static_cast<Eigen::Index>(cols[c]))),
              1e-12);
  }
  EXPECT_LT(max_abs(spin_block_columns(part.op, space, {2}, 0) - spin_block(full.op, space, {2})), 1e-12);
}

TEST(Propagate, DimensionGuard) {
  const auto modes = analyze_modes(IonArrayConfig::uniform(2, 1.0, 0.1));
  const auto space = HilbertSpace::uniform(2, 2, 40);
  try {
    propagate(constant_zz(0.1, 2 * kPi), modes, space);
    FAIL() << "expected DimensionGuard";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionGuard);
  }
}

TEST(Propagate, CutoffGuard) {
  const auto space = HilbertSpace::uniform(2, 1, 3);
  try {
    propagate(constant_zz(3.0, kPi), one_mode(), space);
    FAIL() << "expected CutoffGuard";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CutoffGuard);
  }
}

TEST(Propagate, ExplicitStepsBelowFloor) {
  const auto space = HilbertSpace::uniform(2, 1, 3);
  PropagationOptions opts;
  opts.steps = 10;
  EXPECT_THROW(propagate(constant_zz(0.1, 2 * kPi), one_mode(), space, opts), Error);
}

TEST(Propagate, NotConvergedWithoutDoublings) {
  const auto space = HilbertSpace::uniform(2, 1, 10);
  PropagationOptions opts;
  opts.steps = 40;
  opts.max_doublings = 1;
  opts.tolerance = 1e-15;
  opts.check_tail = false;
  try {
    propagate(constant_zz(1.0, 2 * kPi), one_mode(), space, opts);
    FAIL() << "expected NotConverged";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotConverged);
  }
}

TEST(AnalyticGate, ZeroPhaseIsIdentity) {
  EXPECT_LT(max_abs(analytic_gate(0.0, {}) - ComplexMatrix::Identity(4, 4)), 1e-15);
}

TEST(AnalyticGate, QuarterTurnZz) {
  ComplexVector d(4);
  d << -kI, kI, kI, -kI;
  EXPECT_LT(max_abs(analytic_gate(kPi / 2, {}) - ComplexMatrix(d.asDiagonal())), 1e-15);
}

TEST(AnalyticGate, MatchesExponentialOfGenerator) {
  const ComplexMatrix gen = testing::two_qubit('y', 'x');
  const ComplexMatrix reference = (Complex(0.0, -0.37) * gen).exp();
  EXPECT_LT(max_abs(analytic_gate(0.37, {0, PauliAxis::Y, 1, PauliAxis::X}) - reference), 1e-14);
}

TEST(AnalyticGate, ZzOnCodeIsLogicalPhase) {
  const auto enc = LogicalEncoding::adjacent_pairs(2);
  const auto u = analytic_gate(kPi / 4, {0, PauliAxis::Z, 2, PauliAxis::Z}, 4);
  const double phi = -kPi / 4;
  ComplexVector d(4);
  d << std::exp(kI * phi), std::exp(-kI * phi), std::exp(-kI * phi), std::exp(kI * phi);
  const ComplexMatrix target = d.asDiagonal();
  const auto r = extract_logical_gate(u, enc, target);
  EXPECT_LT(max_abs(r.logical - target), 1e-15);
  EXPECT_NEAR(r.fidelity, 1.0, 1e-15);
}

TEST(FidelityModPhase, Basics) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix g(4, 4);
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = Complex(n(rng), n(rng));
  const ComplexMatrix u = (kI * (g + g.adjoint())).exp();
  const ComplexMatrix p = ComplexMatrix::Identity(4, 4);
  auto same = fidelity_mod_phase(u, u, p);
  EXPECT_NEAR(same.fidelity, 1.0, 1e-14);
  EXPECT_NEAR(same.phase, 0.0, 1e-14);
  auto shifted = fidelity_mod_phase(u, std::exp(kI * 0.4) * u, p);
  EXPECT_NEAR(shifted.fidelity, 1.0, 1e-14);
  EXPECT_NEAR(shifted.phase, 0.4, 1e-14);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix h(4, 4);
    for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = Complex(n(rng), n(rng));
    const ComplexMatrix v = (kI * (h + h.adjoint())).exp();
    EXPECT_LT(fidelity_mod_phase(u, v, p).fidelity, 1.0);
  }
  EXPECT_THROW(fidelity_mod_phase(u, u, ComplexMatrix::Zero(4, 4)), Error);
}

TEST(Oracle, ClosedConstantPulseFactorizes) {
  const auto modes = one_mode();
  const auto space = HilbertSpace::uniform(2, 1, 18);
  const auto r = run_oracle(constant_zz(0.3, 2 * kPi), modes, space, {0, 1}, {0, 1, 2});
  ASSERT_EQ(r.fidelities.size(), 3u);
  for (double f : r.fidelities) EXPECT_GE(f, 1.0 - 1e-6);
  EXPECT_LT(r.phase.max_abs_eta(), 1e-10);
  EXPECT_TRUE(r.phase.global_phase.has_value());
}

TEST(Oracle, OpenLoopLeavesEntanglement) {
  const auto modes = one_mode();
  const auto space = HilbertSpace::uniform(2, 1, 18);
  const auto r = run_oracle(constant_zz(0.3, kPi), modes, space, {0, 1}, {0});
  EXPECT_LT(r.fidelities[0], 1.0 - 1e-3);
}

TEST(Oracle, RejectsFockStateAtCutoff) {
  const auto space = HilbertSpace::uniform(2, 1, 4);
  EXPECT_THROW(run_oracle(constant_zz(0.3, 2 * kPi), one_mode(), space, {0, 1}, {4}), Error);
}

}  // namespace
}  // namespace iondfs
