#pragma once

#include "iondfs/linalg.hpp"
#include "iondfs/schedule.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace iondfs {

/// Qubits ⊗ truncated Fock ladders. Basis index =
///   spin + 2^{n_qubits} (n_0 + (c_0+1)(n_1 + (c_1+1)(...)))
/// where spin = Σ_q s_q 2^q (qubit 0 fastest) and modes follow in ascending
/// order. |0⟩ is the σ_z = +1 state.
class HilbertSpace {
 public:
  static constexpr std::size_t kMaxDimension = std::size_t{1} << 20;

  HilbertSpace(std::size_t n_qubits, std::vector<std::size_t> fock_cutoffs);
  static HilbertSpace uniform(std::size_t n_qubits, std::size_t n_modes, std::size_t cutoff);
  static HilbertSpace spins(std::size_t n_qubits) { return HilbertSpace(n_qubits, {}); }

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t n_modes() const { return cutoffs_.size(); }
  std::size_t cutoff(std::size_t mode) const { return cutoffs_.at(mode); }
  const std::vector<std::size_t>& cutoffs() const { return cutoffs_; }
  std::size_t spin_dimension() const { return spin_dim_; }
  std::size_t phonon_dimension() const { return dimension_ / spin_dim_; }
  std::size_t dimension() const { return dimension_; }

  std::size_t index(std::size_t spin, std::span<const std::size_t> occupations) const;
  std::size_t spin_of(std::size_t index) const { return index % spin_dim_; }
  std::size_t occupation(std::size_t index, std::size_t mode) const;

  HilbertSpace with_extra_mode(std::size_t cutoff) const;

  SparseOperator identity() const;
  SparseOperator pauli(std::size_t qubit, PauliAxis axis) const;
  SparseOperator annihilation(std::size_t mode) const;
  /// Σ_q σ_z^{(q)}.
  SparseOperator collective_z() const;

 private:
  std::size_t n_qubits_;
  std::vector<std::size_t> cutoffs_;
  std::vector<std::size_t> strides_;
  std::size_t spin_dim_;
  std::size_t dimension_;
};

/// Dense σ_axis on one qubit of an n-qubit register.
ComplexMatrix spin_pauli(std::size_t n_qubits, std::size_t qubit, PauliAxis axis);

}  // namespace iondfs
