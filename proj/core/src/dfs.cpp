#include "iondfs/dfs.hpp"

#include "iondfs/errors.hpp"
#include "iondfs/hilbert.hpp"

#include <cmath>
#include <string>

namespace iondfs {

LogicalEncoding::LogicalEncoding(std::size_t n_physical, std::vector<std::pair<std::size_t, std::size_t>> pairs)
    : n_physical_(n_physical), pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw Error(ErrorCode::InvalidArgument, "encoding needs at least one pair");
  if (n_physical_ > 20) throw Error(ErrorCode::DimensionGuard, "too many physical qubits");
  std::vector<bool> used(n_physical_, false);
  for (const auto& [a, b] : pairs_) {
    if (a >= n_physical_ || b >= n_physical_) throw Error(ErrorCode::IndexOutOfRange, "pair ion out of range");
    if (a == b || used[a] || used[b]) throw Error(ErrorCode::InvalidArgument, "pairs must use distinct ions");
    used[a] = used[b] = true;
  }
}

LogicalEncoding LogicalEncoding::adjacent_pairs(std::size_t n_logical) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n_logical; ++i) pairs.emplace_back(2 * i, 2 * i + 1);
  return LogicalEncoding(2 * n_logical, std::move(pairs));
}

std::size_t LogicalEncoding::physical_index(std::size_t logical) const {
  if (logical >= logical_dimension()) throw Error(ErrorCode::IndexOutOfRange, "logical index");
  std::size_t index = 0;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const bool one = (logical >> i) & 1U;
    index |= std::size_t{one ? 1U : 0U} << pairs_[i].first;
    index |= std::size_t{one ? 0U : 1U} << pairs_[i].second;
  }
  return index;
}

ComplexMatrix LogicalEncoding::isometry() const {
  const auto rows = static_cast<Eigen::Index>(std::size_t{1} << n_physical_);
  const auto cols = static_cast<Eigen::Index>(logical_dimension());
  ComplexMatrix v = ComplexMatrix::Zero(rows, cols);
  for (Eigen::Index l = 0; l < cols; ++l) v(static_cast<Eigen::Index>(physical_index(static_cast<std::size_t>(l))), l) = 1.0;
  return v;
}

ComplexMatrix LogicalEncoding::projector() const {
  const ComplexMatrix v = isometry();
  return v * v.adjoint();
}

ComplexMatrix LogicalEncoding::collective_z() const {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_physical_);
  ComplexMatrix z = ComplexMatrix::Zero(dim, dim);
  for (const auto& [a, b] : pairs_) {
    z += spin_pauli(n_physical_, a, PauliAxis::Z) + spin_pauli(n_physical_, b, PauliAxis::Z);
  }
  return z;
}

ComplexVector encode_state(const LogicalEncoding& enc, const ComplexVector& amplitudes) {
  if (static_cast<std::size_t>(amplitudes.size()) != enc.logical_dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(enc.logical_dimension()) + " amplitudes");
  }
  if (std::abs(amplitudes.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::NotNormalized, "amplitude norm " + std::to_string(amplitudes.norm()));
  }
  return enc.isometry() * amplitudes;
}

LogicalGateReport extract_logical_gate(const ComplexMatrix& u, const LogicalEncoding& enc,
                                       const ComplexMatrix& target, const ExtractOptions& opts) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << enc.n_physical());
  const auto ldim = static_cast<Eigen::Index>(enc.logical_dimension());
  if (u.rows() != dim || u.cols() != dim) throw Error(ErrorCode::DimensionMismatch, "operator is not on the spins");
  if (target.rows() != ldim || target.cols() != ldim) {
    throw Error(ErrorCode::DimensionMismatch, "target is not a logical operator");
  }
  const ComplexMatrix v = enc.isometry();
  const ComplexMatrix p = v * v.adjoint();
  LogicalGateReport report;
  report.logical = v.adjoint() * u * v;
  report.leakage = max_abs((ComplexMatrix::Identity(dim, dim) - p) * u * p);
  const Complex overlap = (target.adjoint() * report.logical).trace();
  report.fidelity = std::abs(overlap) / static_cast<double>(ldim);
  report.phase = std::arg(overlap);
  if (opts.strict && report.leakage > opts.leakage_bound) {
    throw Error(ErrorCode::LeakageAboveThreshold, "leakage " + std::to_string(report.leakage));
  }
  return report;
}

ComplexMatrix logical_pauli(int which) {
  switch (which) {
    case 0:
      return ComplexMatrix::Identity(2, 2);
    case 1:
      return spin_pauli(1, 0, PauliAxis::X);
    case 2:
      return spin_pauli(1, 0, PauliAxis::Y);
    case 3:
      return spin_pauli(1, 0, PauliAxis::Z);
    default:
      throw Error(ErrorCode::InvalidArgument, "Pauli index " + std::to_string(which));
  }
}

LogicalPauliEquivalents logical_pauli_equivalents() {
  const auto one = LogicalEncoding::adjacent_pairs(1);
  const auto two = LogicalEncoding::adjacent_pairs(2);
  const ComplexMatrix v1 = one.isometry();
  const ComplexMatrix v2 = two.isometry();
  LogicalPauliEquivalents out;
  out.xx = v1.adjoint() * spin_pauli(2, 0, PauliAxis::X) * spin_pauli(2, 1, PauliAxis::X) * v1;
  out.yx = v1.adjoint() * spin_pauli(2, 0, PauliAxis::Y) * spin_pauli(2, 1, PauliAxis::X) * v1;
  out.zz = v2.adjoint() * spin_pauli(4, 0, PauliAxis::Z) * spin_pauli(4, 2, PauliAxis::Z) * v2;
  return out;
}

bool addressing_equivalence_check(const ComplexMatrix& u_first, const ComplexMatrix& u_second,
                                  const LogicalEncoding& enc, double tolerance) {
  const auto ldim = static_cast<Eigen::Index>(enc.logical_dimension());
  const ComplexMatrix id = ComplexMatrix::Identity(ldim, ldim);
  const auto a = extract_logical_gate(u_first, enc, id);
  const auto b = extract_logical_gate(u_second, enc, id);
  return max_abs(a.logical - b.logical) <= tolerance;
}

}  // namespace iondfs
