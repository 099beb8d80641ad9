#include "iondfs/errors.hpp"
#include "iondfs/pulse.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

namespace iondfs {
namespace {

constexpr double kPi = std::numbers::pi;

ModeSpectrum one_mode(double omega = 1.0) { return ModeSpectrum::single_mode(omega, {std::sqrt(0.5), std::sqrt(0.5)}); }

ForceSchedule constant_schedule(double amplitude, double duration, PauliAxis axis = PauliAxis::Z) {
  ForceSchedule s;
  s.shape = PulseShape::Constant;
  s.amplitude = amplitude;
  s.duration = duration;
  s.steps_per_cycle = 64;
  s.targets = {{0, axis, 1.0}, {1, axis, 1.0}};
  return s;
}

ForceSchedule bump_schedule(double amplitude, double duration) {
  auto s = constant_schedule(amplitude, duration);
  s.shape = PulseShape::SmoothBump;
  s.steps_per_cycle = 6400;
  return s;
}

// RK4 for C' = f cos ωt, S' = f sin ωt, q' = f (S cos ωt − C sin ωt): the
// bare-profile double integral ∫ f(t) ∫_0^t f(t') sin ω(t' − t) dt' dt.
double rk4_phase_integral(const std::function<double(double)>& f, double omega, double duration, std::size_t steps) {
  auto rhs = [&](double t, const Eigen::Vector3d& y) {
    const double c = std::cos(omega * t), s = std::sin(omega * t), ft = f(t);
    return Eigen::Vector3d(ft * c, ft * s, ft * (y(1) * c - y(0) * s));
  };
  Eigen::Vector3d y = Eigen::Vector3d::Zero();
  const double h = duration / static_cast<double>(steps);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = h * static_cast<double>(n);
    const Eigen::Vector3d k1 = rhs(t, y);
    const Eigen::Vector3d k2 = rhs(t + h / 2, y + h / 2 * k1);
    const Eigen::Vector3d k3 = rhs(t + h / 2, y + h / 2 * k2);
    const Eigen::Vector3d k4 = rhs(t + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y(2);
}

TEST(EvalG, Definition) {
  const auto modes = one_mode();
  auto s = constant_schedule(0.0, 2 * kPi);
  EXPECT_EQ(eval_g(s, modes, 0, 0, 1.0), 0.0);
  s.amplitude = 0.3;
  EXPECT_NEAR(eval_g(s, modes, 0, 0, 1.0), 0.5 * 0.3, 1e-15);
  auto b = bump_schedule(0.3, 10.0);
  EXPECT_NEAR(eval_g(b, modes, 1, 0, 5.0), 0.5 * 0.3, 1e-15);
  EXPECT_THROW(eval_g(b, modes, 2, 0, 5.0), Error);
}

TEST(ResidualEta, FullPeriodCloses) {
  const double a = 0.7;
  const auto eta = residual_eta(constant_schedule(a, 2 * kPi), one_mode());
  EXPECT_LT(std::abs(eta(0, 0)), 1e-10 * a * 0.5);
  EXPECT_LT(std::abs(eta(1, 0)), 1e-10 * a * 0.5);
}

TEST(ResidualEta, HalfPeriodClosedForm) {
  const double a = 0.7, w = 1.3;
  const auto modes = one_mode(w);
  const double dt = modes.coupling(0, 0);
  const auto eta = residual_eta(constant_schedule(a, kPi / w), modes);
  const Complex expected = -2.0 * kI * dt * a / w;
  EXPECT_LT(std::abs(eta(0, 0) - expected), 1e-8 * std::abs(expected));
}

TEST(ResidualEta, SlowBumpIsSuppressed) {
  const double a = 0.2;
  const auto eta = residual_eta(bump_schedule(a, 100 * 2 * kPi), one_mode());
  EXPECT_LT(std::abs(eta(0, 0)), 1e-3 * a * 0.5);
}

TEST(ResidualEta, MatchesGaussLegendre) {
  const auto modes = analyze_modes(IonArrayConfig::uniform(2, 1.0, 0.1));
  auto s = bump_schedule(0.4, 7.3);
  s.steps_per_cycle = 256;
  const auto eta = residual_eta(s, modes);
  for (Eigen::Index k = 0; k < 2; ++k) {
    const double w = modes.frequencies(k);
    auto integrand = [&](double t) {
      const double f = 0.4 * std::pow(std::sin(kPi * t / 7.3), 2);
      return f * std::exp(Complex(0.0, -w * t));
    };
    const Complex bare = testing::gauss_legendre(integrand, 0.0, 7.3, 200);
    for (Eigen::Index mu = 0; mu < 2; ++mu) {
      EXPECT_LT(std::abs(eta(mu, k) - modes.coupling(mu, k) * bare), 1e-10);
    }
  }
}

TEST(CouplingPhase, ZeroForce) {
  const auto r = coupling_phase(constant_schedule(0.0, 2 * kPi), one_mode(), {0, 1});
  EXPECT_EQ(r.phase_total, 0.0);
  EXPECT_EQ(r.max_abs_eta(), 0.0);
}

TEST(CouplingPhase, ConstantFullPeriod) {
  const double a = 0.4, w = 1.0;
  const auto modes = one_mode(w);
  const double g = modes.coupling(0, 0) * a;
  const double duration = 2 * kPi / w;
  const auto r = coupling_phase(constant_schedule(a, duration), modes, {0, 1});
  const double expected = -2.0 * g * g * duration / w;
  EXPECT_LT(std::abs(r.phase_total - expected), 1e-8 * std::abs(expected));
  EXPECT_LT(std::abs(r.phase_adiabatic - expected), 1e-12 * std::abs(expected));
}

TEST(CouplingPhase, MatchesIndependentOdeIntegral) {
  const auto modes = analyze_modes(IonArrayConfig::uniform(2, 1.0, 0.1));
  const double a = 0.3, duration = 9.1;
  auto s = bump_schedule(a, duration);
  s.steps_per_cycle = 512;
  const auto r = coupling_phase(s, modes, {0, 1});
  double expected = 0.0;
  for (Eigen::Index k = 0; k < 2; ++k) {
    auto f = [&](double t) { return a * std::pow(std::sin(kPi * t / duration), 2); };
    const double q = rk4_phase_integral(f, modes.frequencies(k), duration, 20000);
    expected += 2.0 * modes.coupling(0, k) * modes.coupling(1, k) * q;
  }
  EXPECT_LT(std::abs(r.phase_total - expected), 1e-9 * std::abs(expected));
}

TEST(CouplingPhase, SlowBumpNearAdiabatic) {
  const auto modes = one_mode();
  const double a = 0.05, duration = 100 * 2 * kPi;
  const auto r = coupling_phase(bump_schedule(a, duration), modes, {0, 1});
  // −(2/ω) D̃² A² ∫ sin⁴ = −(2/ω) D̃² A² (3T/8)
  const double closed = -2.0 * 0.25 * a * a * 3.0 * duration / 8.0;
  EXPECT_LT(std::abs(r.phase_adiabatic - closed), 1e-10 * std::abs(closed));
  EXPECT_LT(std::abs(r.phase_total - r.phase_adiabatic), 0.01 * std::abs(r.phase_total));
}

TEST(CouplingPhase, TwoModeSumOfTerms) {
  const auto modes = analyze_modes(IonArrayConfig::uniform(2, 1.0, 0.1));
  ASSERT_NEAR(modes.frequencies(1), std::sqrt(1.2), 1e-12);
  const auto r = coupling_phase(bump_schedule(0.05, 100 * 2 * kPi), modes, {0, 1});
  EXPECT_NEAR(r.phase_per_mode.sum(), r.phase_total, 1e-15);
  EXPECT_LT(std::abs(r.phase_total - r.phase_adiabatic), 0.01 * std::abs(r.phase_total));
}

TEST(Designer, AdiabaticRoundTrip) {
  const auto modes = one_mode();
  const auto s = design_adiabatic_schedule(modes, {0, 1}, -kPi / 4, 100);
  const auto r = coupling_phase(s, modes, {0, 1});
  EXPECT_NEAR(r.phase_total, -kPi / 4, 1e-4);
  EXPECT_LT(r.adiabaticity, kAdiabaticityBound);
}

TEST(Designer, RejectsZeroTarget) {
  EXPECT_THROW(design_adiabatic_schedule(one_mode(), {0, 1}, 0.0, 100), Error);
  EXPECT_THROW(design_refocused_schedule(one_mode(), {0, 1}, 0.0, 1), Error);
}

TEST(Designer, ShortBumpViolatesAdiabaticity) {
  try {
    design_adiabatic_schedule(one_mode(), {0, 1}, -kPi / 4, 1);
    FAIL() << "expected AdiabaticityViolated";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AdiabaticityViolated);
  }
}

TEST(Designer, RefocusedCyclesCloseAndAdd) {
  const auto modes = one_mode();
  const auto two = design_refocused_schedule(modes, {0, 1}, kPi / 8, 1, 1);
  ASSERT_EQ(two.cycles, 2u);
  EXPECT_EQ(two.reversal_sign(0), 1);
  EXPECT_EQ(two.reversal_sign(1), -1);
  const auto r2 = coupling_phase(two, modes, {0, 1});
  EXPECT_LT(r2.max_abs_eta(), 1e-12);
  EXPECT_NEAR(r2.phase_total, kPi / 8, 1e-9);

  auto one = two;
  one.cycles = 1;
  one.reversal = {1};
  const auto r1 = coupling_phase(one, modes, {0, 1});
  EXPECT_NEAR(r2.phase_total, 2.0 * r1.phase_total, 1e-12);
}

TEST(Designer, FourCycleThueMorseSigns) {
  const auto s = design_refocused_schedule(one_mode(), {0, 1}, kPi / 8, 1, 2);
  ASSERT_EQ(s.cycles, 4u);
  EXPECT_EQ(s.reversal, (std::vector<int>{1, -1, -1, 1}));
}

TEST(Designer, IncommensurateModes) {
  RealMatrix h(2, 2);
  h << 1.5, -0.5, -0.5, 1.5;  // ω = {1, √2}
  const auto modes = diagonalize_modes(h, 1.0);
  try {
    design_refocused_schedule(modes, {0, 1}, kPi / 8, 1);
    FAIL() << "expected IncommensurateModes";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IncommensurateModes);
  }
}

TEST(Window, SlowBumpPassesBoth) {
  const auto modes = one_mode();
  const auto s = design_adiabatic_schedule(modes, {0, 1}, -kPi / 4, 100);
  const auto w = check_adiabatic_window(s, modes, 0.0);
  EXPECT_TRUE(w.slow_enough);
  EXPECT_TRUE(w.fast_enough);
}

TEST(Window, KickTrainIsNotSlow) {
  auto s = constant_schedule(0.2, 2 * kPi);
  s.shape = PulseShape::KickTrain;
  s.levels = {1.0, -1.0};
  const auto w = check_adiabatic_window(s, one_mode(), 0.0);
  EXPECT_FALSE(w.slow_enough);
}

TEST(Window, RelaxationFasterThanPulse) {
  // max|ḟ| = Aπ/T for A sin²(πt/T); pick it as 0.05 ω_l.
  const double duration = 2 * kPi * 10;
  const double a = 0.05 * duration / kPi;
  const auto w = check_adiabatic_window(bump_schedule(a, duration), one_mode(), 0.07);
  EXPECT_NEAR(w.max_slope, 0.05, 1e-12);
  EXPECT_TRUE(w.slow_enough);
  EXPECT_FALSE(w.fast_enough);
}

TEST(EtaTrajectory, EndsAtResidual) {
  const auto s = design_refocused_schedule(one_mode(), {0, 1}, kPi / 8, 1, 0);
  const auto traj = eta_trajectory(s, 1.0);
  ASSERT_EQ(traj.times.size(), traj.eta.size());
  EXPECT_NEAR(traj.times.back(), s.total_duration(), 1e-12);
  const std::size_t mid = traj.times.size() / 2;
  const Complex expected = s.amplitude * (1.0 - std::exp(Complex(0.0, -traj.times[mid]))) / kI;
  EXPECT_LT(std::abs(traj.eta[mid] - expected), 1e-7);
  EXPECT_LT(std::abs(traj.eta.back()), 1e-12);
}

}  // namespace
}  // namespace iondfs
