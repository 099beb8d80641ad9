#include "iondfs/hilbert.hpp"

#include "iondfs/errors.hpp"

#include <cmath>
#include <string>

namespace iondfs {

HilbertSpace::HilbertSpace(std::size_t n_qubits, std::vector<std::size_t> fock_cutoffs)
    : n_qubits_(n_qubits), cutoffs_(std::move(fock_cutoffs)) {
  if (n_qubits_ > 20) throw Error(ErrorCode::DimensionGuard, "too many qubits");
  spin_dim_ = std::size_t{1} << n_qubits_;
  std::size_t dim = spin_dim_;
  strides_.reserve(cutoffs_.size());
  for (std::size_t c : cutoffs_) {
    if (c < 1) throw Error(ErrorCode::InvalidArgument, "Fock cutoff must be >= 1");
    strides_.push_back(dim);
    if (dim > kMaxDimension / (c + 1)) {
      throw Error(ErrorCode::DimensionGuard, "Hilbert space exceeds 2^20 states");
    }
    dim *= c + 1;
  }
  dimension_ = dim;
}

HilbertSpace HilbertSpace::uniform(std::size_t n_qubits, std::size_t n_modes, std::size_t cutoff) {
  return HilbertSpace(n_qubits, std::vector<std::size_t>(n_modes, cutoff));
}

std::size_t HilbertSpace::index(std::size_t spin, std::span<const std::size_t> occupations) const {
  if (spin >= spin_dim_ || occupations.size() != cutoffs_.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "basis label outside the Hilbert space");
  }
  std::size_t idx = spin;
  for (std::size_t m = 0; m < cutoffs_.size(); ++m) {
    if (occupations[m] > cutoffs_[m]) throw Error(ErrorCode::IndexOutOfRange, "occupation above cutoff");
    idx += occupations[m] * strides_[m];
  }
  return idx;
}

std::size_t HilbertSpace::occupation(std::size_t index, std::size_t mode) const {
  return (index / strides_.at(mode)) % (cutoffs_[mode] + 1);
}

HilbertSpace HilbertSpace::with_extra_mode(std::size_t cutoff) const {
  auto c = cutoffs_;
  c.push_back(cutoff);
  return HilbertSpace(n_qubits_, std::move(c));
}

SparseOperator HilbertSpace::identity() const {
  SparseOperator id(static_cast<Eigen::Index>(dimension_), static_cast<Eigen::Index>(dimension_));
  id.setIdentity();
  return id;
}

SparseOperator HilbertSpace::pauli(std::size_t qubit, PauliAxis axis) const {
  if (qubit >= n_qubits_) throw Error(ErrorCode::IndexOutOfRange, "qubit " + std::to_string(qubit));
  const std::size_t mask = std::size_t{1} << qubit;
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(dimension_);
  for (std::size_t col = 0; col < dimension_; ++col) {
    const bool one = (col & mask) != 0;
    const auto c = static_cast<Eigen::Index>(col);
    const auto flipped = static_cast<Eigen::Index>(col ^ mask);
    switch (axis) {
      case PauliAxis::X: entries.emplace_back(flipped, c, 1.0); break;
      // σ_y|0⟩ = i|1⟩, σ_y|1⟩ = −i|0⟩
      case PauliAxis::Y: entries.emplace_back(flipped, c, one ? -kI : kI); break;
      case PauliAxis::Z: entries.emplace_back(c, c, one ? -1.0 : 1.0); break;
    }
  }
  SparseOperator op(static_cast<Eigen::Index>(dimension_), static_cast<Eigen::Index>(dimension_));
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

SparseOperator HilbertSpace::annihilation(std::size_t mode) const {
  if (mode >= cutoffs_.size()) throw Error(ErrorCode::IndexOutOfRange, "mode " + std::to_string(mode));
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(dimension_);
  for (std::size_t col = 0; col < dimension_; ++col) {
    const std::size_t n = occupation(col, mode);
    if (n == 0) continue;
    entries.emplace_back(static_cast<Eigen::Index>(col - strides_[mode]), static_cast<Eigen::Index>(col),
                         std::sqrt(static_cast<double>(n)));
  }
  SparseOperator op(static_cast<Eigen::Index>(dimension_), static_cast<Eigen::Index>(dimension_));
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

SparseOperator HilbertSpace::collective_z() const {
  SparseOperator total(static_cast<Eigen::Index>(dimension_), static_cast<Eigen::Index>(dimension_));
  for (std::size_t q = 0; q < n_qubits_; ++q) total += pauli(q, PauliAxis::Z);
  return total;
}

ComplexMatrix spin_pauli(std::size_t n_qubits, std::size_t qubit, PauliAxis axis) {
  return ComplexMatrix(HilbertSpace::spins(n_qubits).pauli(qubit, axis));
}

}  // namespace iondfs
