#include "iondfs/linalg.hpp"

#include "iondfs/errors.hpp"

#include <algorithm>
#include <cmath>

namespace iondfs {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonPositiveMode: return "NonPositiveMode";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::AdiabaticityViolated: return "AdiabaticityViolated";
    case ErrorCode::IncommensurateModes: return "IncommensurateModes";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionGuard: return "DimensionGuard";
    case ErrorCode::CutoffGuard: return "CutoffGuard";
    case ErrorCode::ResolutionGuard: return "ResolutionGuard";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::ZeroTrace: return "ZeroTrace";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::LeakageAboveThreshold: return "LeakageAboveThreshold";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::RefocusPremiseViolated: return "RefocusPremiseViolated";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

double one_norm(const SparseOperator& op) {
  double best = 0.0;
  for (Eigen::Index col = 0; col < op.outerSize(); ++col) {
    double sum = 0.0;
    for (SparseOperator::InnerIterator it(op, col); it; ++it) sum += std::abs(it.value());
    best = std::max(best, sum);
  }
  return best;
}

double one_norm(const ComplexMatrix& op) {
  return op.size() == 0 ? 0.0 : op.cwiseAbs().colwise().sum().maxCoeff();
}

ComplexMatrix expm(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "expm requires a square matrix");
  }
  const Eigen::Index n = a.rows();
  const double norm = one_norm(a);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const ComplexMatrix scaled = a / std::ldexp(1.0, squarings);

  // With ‖scaled‖ ≤ 1/2 the Taylor tail after 30 terms is far below round-off.
  ComplexMatrix result = ComplexMatrix::Identity(n, n);
  ComplexMatrix term = ComplexMatrix::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    result += term;
    if (max_abs(term) <= 1e-18 * max_abs(result)) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

double unitarity_defect(const ComplexMatrix& u) {
  const ComplexMatrix gram = u.adjoint() * u;
  return max_abs(gram - ComplexMatrix::Identity(gram.rows(), gram.cols()));
}

}  // namespace iondfs
