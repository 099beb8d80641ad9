#include "iondfs/errors.hpp"
#include "iondfs/modes.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace iondfs {
namespace {

TEST(Hessian, SingleIonIsTrapCurvature) {
  const auto h = build_hessian(IonArrayConfig::uniform(1, 1.0, 0.1));
  ASSERT_EQ(h.rows(), 1);
  EXPECT_DOUBLE_EQ(h(0, 0), 1.0);
}

TEST(Hessian, TwoIons) {
  const auto h = build_hessian(IonArrayConfig::uniform(2, 1.0, 0.1));
  RealMatrix expected(2, 2);
  expected << 1.1, -0.1, -0.1, 1.1;
  EXPECT_LT(max_abs(h - expected), 1e-15);
}

TEST(Hessian, ThreeIonChainNearestNeighbour) {
  const auto h = build_hessian(IonArrayConfig::uniform(3, 1.0, 0.1));
  EXPECT_NEAR(h(0, 0), 1.1, 1e-15);
  EXPECT_NEAR(h(1, 1), 1.2, 1e-15);
  EXPECT_NEAR(h(2, 2), 1.1, 1e-15);
  EXPECT_NEAR(h(0, 1), -0.1, 1e-15);
  EXPECT_NEAR(h(1, 2), -0.1, 1e-15);
  EXPECT_EQ(h(0, 2), 0.0);
}

TEST(Hessian, MatchesFiniteDifferenceOfPotential) {
  for (auto range : {CouplingRange::NearestNeighbor, CouplingRange::LongRange}) {
    for (std::size_t n : {2u, 3u, 5u}) {
      auto cfg = IonArrayConfig::uniform(n, 1.3, 0.2, 1.5, 2.0);
      cfg.range = range;
      const auto fd = testing::finite_difference_hessian(cfg);
      EXPECT_LT(max_abs(build_hessian(cfg) - fd), 1e-6) << "n = " << n;
    }
  }
}

TEST(Hessian, RingWrapsAround) {
  auto cfg = IonArrayConfig::uniform(4, 1.0, 0.1);
  cfg.topology = Topology::Ring;
  const auto h = build_hessian(cfg);
  EXPECT_NEAR(h(0, 3), -0.1, 1e-15);
  EXPECT_NEAR(h(0, 0), 1.2, 1e-15);
  EXPECT_EQ(h(0, 2), 0.0);
}

TEST(Hessian, RejectsBadConfig) {
  auto cfg = IonArrayConfig::uniform(2, 1.0, 0.1);
  cfg.trap_frequencies = {1.0};
  EXPECT_THROW(build_hessian(cfg), Error);
  cfg = IonArrayConfig::uniform(2, 1.0, 0.1);
  cfg.equilibrium_positions = {1.0, 0.5};
  EXPECT_THROW(build_hessian(cfg), Error);
}

TEST(Modes, TwoIonSpectrum) {
  const auto m = analyze_modes(IonArrayConfig::uniform(2, 1.0, 0.1));
  EXPECT_NEAR(m.frequencies(0), 1.0, 1e-12);
  EXPECT_NEAR(m.frequencies(1), std::sqrt(1.2), 1e-12);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(m.mode_matrix(0, 0), r, 1e-12);
  EXPECT_NEAR(m.mode_matrix(1, 0), r, 1e-12);
  EXPECT_NEAR(m.mode_matrix(0, 1), r, 1e-12);
  EXPECT_NEAR(m.mode_matrix(1, 1), -r, 1e-12);
}

TEST(Modes, IdentityHessian) {
  const auto m = diagonalize_modes(RealMatrix::Identity(3, 3), 1.0);
  EXPECT_LT(max_abs(m.frequencies - RealVector::Ones(3)), 1e-14);
  EXPECT_LT(max_abs(m.mode_matrix.cwiseAbs() - RealMatrix::Identity(3, 3)), 1e-14);
  for (Eigen::Index k = 0; k < 3; ++k) EXPECT_GT(m.mode_matrix.col(k).maxCoeff(), 0.0);
}

TEST(Modes, NegativeEigenvalueThrows) {
  RealMatrix h(2, 2);
  h << 0.25, 0.75, 0.75, 0.25;  // eigenvalues 1 and -0.5
  try {
    diagonalize_modes(h, 1.0);
    FAIL() << "expected NonPositiveMode";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveMode);
  }
}

TEST(Modes, OrthogonalityAndReconstruction) {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (auto range : {CouplingRange::NearestNeighbor, CouplingRange::LongRange}) {
      auto cfg = IonArrayConfig::uniform(n, 1.0, 0.15);
      cfg.range = range;
      const auto h = build_hessian(cfg);
      const auto m = diagonalize_modes(h, cfg.mass);
      const auto& d = m.mode_matrix;
      EXPECT_LT(max_abs(d.transpose() * d - RealMatrix::Identity(n, n)), 1e-12);
      const RealVector k = cfg.mass * m.frequencies.cwiseAbs2();
      EXPECT_LT(max_abs(d * k.asDiagonal() * d.transpose() - h), 1e-12);
      for (Eigen::Index c = 1; c < m.frequencies.size(); ++c) {
        EXPECT_LE(m.frequencies(c - 1), m.frequencies(c));
      }
    }
  }
}

TEST(Modes, CouplingScalesByZeroPointLength) {
  const auto m = analyze_modes(IonArrayConfig::uniform(3, 1.0, 0.1, 1.0, 2.0));
  for (Eigen::Index k = 0; k < 3; ++k) {
    const double s = 1.0 / std::sqrt(2.0 * 2.0 * m.frequencies(k));
    EXPECT_LT(max_abs(m.coupling.col(k) - s * m.mode_matrix.col(k)), 1e-15);
  }
}

TEST(Modes, RingCentreOfMassIsUniform) {
  auto cfg = IonArrayConfig::uniform(6, 1.0, 0.1);
  cfg.topology = Topology::Ring;
  const auto m = analyze_modes(cfg);
  const double u = 1.0 / std::sqrt(6.0);
  for (Eigen::Index j = 0; j < 6; ++j) EXPECT_NEAR(m.mode_matrix(j, 0), u, 1e-12);
  EXPECT_NEAR(m.frequencies(0), 1.0, 1e-12);
}

TEST(Modes, LowestSelectsLeadingColumns) {
  const auto m = analyze_modes(IonArrayConfig::uniform(4, 1.0, 0.1));
  const auto low = m.lowest(2);
  EXPECT_EQ(low.n_modes(), 2u);
  EXPECT_EQ(low.n_ions(), 4u);
  EXPECT_EQ(low.frequencies(1), m.frequencies(1));
  EXPECT_THROW(m.lowest(5), Error);
}

TEST(Modes, SingleModeRequiresUnitProjections) {
  EXPECT_THROW(ModeSpectrum::single_mode(1.0, {0.5, 0.5}), Error);
  const auto m = ModeSpectrum::single_mode(1.0, {std::sqrt(0.5), std::sqrt(0.5)});
  EXPECT_NEAR(m.coupling(0, 0), 0.5, 1e-15);
}

}  // namespace
}  // namespace iondfs
