#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library routine it is used to check.

#include "iondfs/linalg.hpp"
#include "iondfs/modes.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace iondfs::testing {

/// Explicit microtrap potential: local wells plus Coulomb pairs c/r with
/// c = κ d³/2, so the pair curvature at r = d is κ. Chain topology only.
inline double chain_potential(const IonArrayConfig& cfg, const std::vector<double>& x) {
  const auto q = cfg.positions();
  const double c = cfg.coulomb_curvature * cfg.spacing * cfg.spacing * cfg.spacing / 2.0;
  double v = 0.0;
  for (std::size_t j = 0; j < cfg.n_ions; ++j) {
    v += 0.5 * cfg.mass * cfg.trap_frequencies[j] * cfg.trap_frequencies[j] * x[j] * x[j];
  }
  for (std::size_t j = 0; j < cfg.n_ions; ++j) {
    for (std::size_t k = j + 1; k < cfg.n_ions; ++k) {
      if (cfg.range == CouplingRange::NearestNeighbor && k != j + 1) continue;
      v += c / std::abs(q[k] + x[k] - q[j] - x[j]);
    }
  }
  return v;
}

/// Central-difference Hessian of chain_potential at the reference positions.
inline RealMatrix finite_difference_hessian(const IonArrayConfig& cfg, double h = 1e-4) {
  const auto n = cfg.n_ions;
  RealMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> x(n, 0.0);
  auto v = [&](std::size_t a, double da, std::size_t b, double db) {
    std::vector<double> y = x;
    y[a] += da;
    y[b] += db;
    return chain_potential(cfg, y);
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double d2 = v(a, h, b, h) - v(a, h, b, -h) - v(a, -h, b, h) + v(a, -h, b, -h);
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = d2 / (4.0 * h * h);
    }
  }
  return out;
}

/// ∫_a^b f(t) dt by composite 5-point Gauss–Legendre on `panels` panels.
inline std::complex<double> gauss_legendre(const std::function<std::complex<double>(double)>& f, double a, double b,
                                           std::size_t panels) {
  static const double nodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                  0.9061798459386640};
  static const double weights[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                    0.2369268850561891, 0.2369268850561891};
  const double h = (b - a) / static_cast<double>(panels);
  std::complex<double> sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    for (int i = 0; i < 5; ++i) sum += weights[i] * f(mid + 0.5 * h * nodes[i]);
  }
  return sum * (0.5 * h);
}

/// Kronecker product of dense complex matrices.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

inline ComplexMatrix pauli_matrix(char axis) {
  ComplexMatrix p(2, 2);
  const std::complex<double> i{0.0, 1.0};
  switch (axis) {
    case 'x': p << 0.0, 1.0, 1.0, 0.0; break;
    case 'y': p << 0.0, -i, i, 0.0; break;
    case 'z': p << 1.0, 0.0, 0.0, -1.0; break;
    default: p = ComplexMatrix::Identity(2, 2);
  }
  return p;
}

/// Two-qubit product σ_a ⊗ σ_b with qubit 0 as the least significant bit,
/// so the matrix for qubit 0 sits on the right of the Kronecker product.
inline ComplexMatrix two_qubit(char first, char second) { return kron(pauli_matrix(second), pauli_matrix(first)); }

}  // namespace iondfs::testing
