#include "iondfs/modes.hpp"

#include "iondfs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iondfs {

IonArrayConfig IonArrayConfig::uniform(std::size_t n_ions, double trap_frequency, double curvature,
                                       double spacing, double mass) {
  IonArrayConfig cfg;
  cfg.n_ions = n_ions;
  cfg.mass = mass;
  cfg.trap_frequencies.assign(n_ions, trap_frequency);
  cfg.spacing = spacing;
  cfg.coulomb_curvature = curvature;
  return cfg;
}

void IonArrayConfig::validate() const {
  if (n_ions < 1) throw Error(ErrorCode::InvalidArgument, "n_ions must be >= 1");
  if (!(mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be > 0");
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "spacing must be > 0");
  if (trap_frequencies.size() != n_ions) {
    throw Error(ErrorCode::InvalidArgument, "expected one trap frequency per ion");
  }
  for (double w : trap_frequencies) {
    if (!(w > 0.0)) throw Error(ErrorCode::InvalidArgument, "trap frequencies must be > 0");
  }
  if (!equilibrium_positions.empty()) {
    if (equilibrium_positions.size() != n_ions) {
      throw Error(ErrorCode::InvalidArgument, "expected one equilibrium position per ion");
    }
    for (std::size_t j = 1; j < n_ions; ++j) {
      if (!(equilibrium_positions[j] > equilibrium_positions[j - 1])) {
        throw Error(ErrorCode::InvalidArgument, "equilibrium positions must be strictly increasing");
      }
    }
  }
}

std::vector<double> IonArrayConfig::positions() const {
  if (!equilibrium_positions.empty()) return equilibrium_positions;
  std::vector<double> q(n_ions);
  for (std::size_t j = 0; j < n_ions; ++j) q[j] = static_cast<double>(j) * spacing;
  return q;
}

double IonArrayConfig::pair_curvature(std::size_t j, std::size_t k) const {
  if (j == k) return 0.0;
  const std::size_t lo = std::min(j, k);
  const std::size_t hi = std::max(j, k);
  const std::size_t gap = hi - lo;
  const std::size_t ring_gap = std::min(gap, n_ions - gap);

  if (range == CouplingRange::NearestNeighbor) {
    const bool adjacent = topology == Topology::Ring ? ring_gap == 1 : gap == 1;
    return adjacent ? coulomb_curvature : 0.0;
  }

  double distance = 0.0;
  if (topology == Topology::Ring) {
    distance = static_cast<double>(ring_gap) * spacing;
  } else {
    const auto q = positions();
    distance = q[hi] - q[lo];
  }
  const double ratio = spacing / distance;
  return coulomb_curvature * ratio * ratio * ratio;
}

RealMatrix build_hessian(const IonArrayConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(cfg.n_ions);
  RealMatrix v = RealMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double w = cfg.trap_frequencies[static_cast<std::size_t>(j)];
    v(j, j) = cfg.mass * w * w;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double kappa = cfg.pair_curvature(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
      if (kappa == 0.0) continue;
      v(j, j) += kappa;
      v(k, k) += kappa;
      v(j, k) -= kappa;
      v(k, j) -= kappa;
    }
  }
  return v;
}

namespace {

// Flip each column so that its largest-magnitude entry is positive. Ties
// within round-off resolve to the lowest index.
void fix_column_signs(RealMatrix& d) {
  for (Eigen::Index col = 0; col < d.cols(); ++col) {
    const double largest = d.col(col).cwiseAbs().maxCoeff();
    for (Eigen::Index row = 0; row < d.rows(); ++row) {
      if (std::abs(d(row, col)) >= largest - 1e-12) {
        if (d(row, col) < 0.0) d.col(col) *= -1.0;
        break;
      }
    }
  }
}

RealMatrix coupling_from(const RealMatrix& d, const RealVector& omega, double mass) {
  RealMatrix c = d;
  for (Eigen::Index k = 0; k < omega.size(); ++k) c.col(k) /= std::sqrt(2.0 * mass * omega(k));
  return c;
}

}  // namespace

ModeSpectrum diagonalize_modes(const RealMatrix& hessian, double mass) {
  if (hessian.rows() != hessian.cols() || hessian.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "Hessian must be a non-empty square matrix");
  }
  if (!(mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be > 0");
  const double scale = std::max(1.0, max_abs(hessian));
  if (max_abs(hessian - hessian.transpose()) > 1e-12 * scale) {
    throw Error(ErrorCode::InvalidArgument, "Hessian is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(hessian);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NotConverged, "symmetric eigensolver failed");
  }
  const RealVector& lambda = solver.eigenvalues();  // ascending
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (!(lambda(k) > 0.0)) {
      throw Error(ErrorCode::NonPositiveMode,
                  "mode " + std::to_string(k) + " has eigenvalue " + std::to_string(lambda(k)));
    }
  }

  ModeSpectrum spectrum;
  spectrum.mass = mass;
  spectrum.frequencies = (lambda / mass).cwiseSqrt();
  spectrum.mode_matrix = solver.eigenvectors();
  fix_column_signs(spectrum.mode_matrix);
  spectrum.coupling = coupling_from(spectrum.mode_matrix, spectrum.frequencies, mass);
  return spectrum;
}

ModeSpectrum ModeSpectrum::lowest(std::size_t count) const {
  if (count == 0 || count > n_modes()) {
    throw Error(ErrorCode::IndexOutOfRange, "requested " + std::to_string(count) + " of " +
                                                std::to_string(n_modes()) + " modes");
  }
  const auto m = static_cast<Eigen::Index>(count);
  ModeSpectrum out;
  out.mass = mass;
  out.frequencies = frequencies.head(m);
  out.mode_matrix = mode_matrix.leftCols(m);
  out.coupling = coupling.leftCols(m);
  return out;
}

ModeSpectrum ModeSpectrum::single_mode(double omega, const std::vector<double>& projections,
                                       double mass) {
  if (!(omega > 0.0)) throw Error(ErrorCode::NonPositiveMode, "mode frequency must be > 0");
  if (!(mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be > 0");
  if (projections.empty()) throw Error(ErrorCode::InvalidArgument, "no ion projections given");
  RealMatrix d(static_cast<Eigen::Index>(projections.size()), 1);
  for (std::size_t i = 0; i < projections.size(); ++i) d(static_cast<Eigen::Index>(i), 0) = projections[i];
  if (std::abs(d.col(0).norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "mode projections must have unit norm");
  }
  ModeSpectrum out;
  out.mass = mass;
  out.frequencies = RealVector::Constant(1, omega);
  out.mode_matrix = d;
  out.coupling = coupling_from(d, out.frequencies, mass);
  return out;
}

}  // namespace iondfs
