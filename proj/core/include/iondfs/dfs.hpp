#pragma once

#include "iondfs/linalg.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace iondfs {

/// Pair-bit code: logical qubit i lives on the physical pair (i₁, i₂) with
/// |0_L⟩ = |0⟩_{i₁}|1⟩_{i₂} and |1_L⟩ = |1⟩_{i₁}|0⟩_{i₂}. Physical qubits
/// outside every pair are held in |0⟩. Logical qubit 0 is the least
/// significant bit of a logical index, as for physical qubits.
class LogicalEncoding {
 public:
  LogicalEncoding(std::size_t n_physical, std::vector<std::pair<std::size_t, std::size_t>> pairs);

  /// Pairs (0,1), (2,3), ... on 2·n_logical physical qubits.
  static LogicalEncoding adjacent_pairs(std::size_t n_logical);

  std::size_t n_physical() const { return n_physical_; }
  std::size_t n_logical() const { return pairs_.size(); }
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }
  std::size_t logical_dimension() const { return std::size_t{1} << pairs_.size(); }

  /// Physical basis index of the logical basis state `logical`.
  std::size_t physical_index(std::size_t logical) const;

  /// 2^n_physical × 2^n_logical isometry V with columns = code basis.
  ComplexMatrix isometry() const;
  ComplexMatrix projector() const;

  /// Σ over pairs of σ_z^{(i₁)} + σ_z^{(i₂)}.
  ComplexMatrix collective_z() const;

 private:
  std::size_t n_physical_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

/// Throws DimensionMismatch on a wrong length and NotNormalized when
/// |‖a‖ − 1| > 1e-12.
ComplexVector encode_state(const LogicalEncoding& enc, const ComplexVector& amplitudes);

struct LogicalGateReport {
  ComplexMatrix logical;
  double leakage = 0.0;  // ‖(I − P) U P‖_max
  double fidelity = 0.0;
  double phase = 0.0;  // arg tr(target† logical)
};

struct ExtractOptions {
  bool strict = false;
  double leakage_bound = 1e-8;
};

/// Restricts a spin-space operator to the code. Throws LeakageAboveThreshold
/// in strict mode.
LogicalGateReport extract_logical_gate(const ComplexMatrix& u, const LogicalEncoding& enc,
                                       const ComplexMatrix& target, const ExtractOptions& opts = {});

/// 2×2 logical Pauli (0: I, 1: x, 2: y, 3: z).
ComplexMatrix logical_pauli(int which);

struct LogicalPauliEquivalents {
  ComplexMatrix xx;  // σ_x^{(1)}σ_x^{(2)} on one pair → π_x
  ComplexMatrix yx;  // σ_y^{(1)}σ_x^{(2)} on one pair → π_y
  ComplexMatrix zz;  // σ_z^{(i₁)}σ_z^{(j₁)} on two pairs → π_z π_z
};

/// Restrictions computed from the physical operators.
LogicalPauliEquivalents logical_pauli_equivalents();

/// True when both propagators restrict to the same logical matrix
/// entrywise within `tolerance`.
bool addressing_equivalence_check(const ComplexMatrix& u_first, const ComplexMatrix& u_second,
                                  const LogicalEncoding& enc, double tolerance = 1e-8);

}  // namespace iondfs
