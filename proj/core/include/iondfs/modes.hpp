#pragma once

#include "iondfs/linalg.hpp"

#include <cstddef>
#include <vector>

namespace iondfs {

enum class Topology { Chain, Ring };
enum class CouplingRange { NearestNeighbor, LongRange };

/// Harmonic microtrap-array model: one local well per ion plus a pairwise
/// Coulomb curvature coupling. Units are dimensionless (ħ = 1, default m = 1).
///
/// The coupling constant `coulomb_curvature` is the second derivative of the
/// pair potential at the equilibrium separation `spacing`. It is positive for
/// the longitudinal axis and negative for a transverse axis. With
/// `CouplingRange::LongRange` every pair couples with strength
/// κ·(spacing/r)³; on a ring the distance r is measured along the ring.
struct IonArrayConfig {
  std::size_t n_ions = 1;
  double mass = 1.0;
  std::vector<double> trap_frequencies;  // one per ion
  double spacing = 1.0;
  double coulomb_curvature = 0.0;
  std::vector<double> equilibrium_positions;  // empty: j * spacing
  Topology topology = Topology::Chain;
  CouplingRange range = CouplingRange::NearestNeighbor;

  static IonArrayConfig uniform(std::size_t n_ions, double trap_frequency, double curvature,
                                double spacing = 1.0, double mass = 1.0);

  /// Throws InvalidArgument when an invariant is broken.
  void validate() const;

  std::vector<double> positions() const;

  /// κ_{jj'} for j ≠ j' (zero for uncoupled pairs).
  double pair_curvature(std::size_t j, std::size_t k) const;
};

/// Normal-mode spectrum. Columns of `mode_matrix` are modes, ascending in
/// frequency; each column's largest-magnitude entry is positive.
/// `coupling(μ, k)` = D_{μk} / sqrt(2 m ω_k).
struct ModeSpectrum {
  double mass = 1.0;
  RealVector frequencies;
  RealMatrix mode_matrix;
  RealMatrix coupling;

  std::size_t n_ions() const { return static_cast<std::size_t>(mode_matrix.rows()); }
  std::size_t n_modes() const { return static_cast<std::size_t>(frequencies.size()); }
  double min_frequency() const { return frequencies.minCoeff(); }
  double max_frequency() const { return frequencies.maxCoeff(); }

  /// The `count` lowest modes (a sideband-selected sub-spectrum).
  ModeSpectrum lowest(std::size_t count) const;

  /// One mode of frequency `omega` with the given (unit-norm) ion projections.
  static ModeSpectrum single_mode(double omega, const std::vector<double>& projections,
                                  double mass = 1.0);
};

RealMatrix build_hessian(const IonArrayConfig& cfg);

/// Throws NonPositiveMode if any eigenvalue is ≤ 0.
ModeSpectrum diagonalize_modes(const RealMatrix& hessian, double mass);

inline ModeSpectrum analyze_modes(const IonArrayConfig& cfg) {
  return diagonalize_modes(build_hessian(cfg), cfg.mass);
}

}  // namespace iondfs
