#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>

namespace iondfs {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using SparseOperator = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kI{0.0, 1.0};

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Induced 1-norm (max column sum); cheap upper bound for series truncation.
double one_norm(const SparseOperator& op);
double one_norm(const ComplexMatrix& op);

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
ComplexMatrix expm(const ComplexMatrix& a);

/// ‖U†U − I‖_max.
double unitarity_defect(const ComplexMatrix& u);

/// Hermitian square-matrix functions: applies `f` to the eigenvalues of `h`.
template <typename F>
ComplexMatrix hermitian_function(const ComplexMatrix& h, F&& f) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const auto& values = solver.eigenvalues();
  ComplexVector mapped(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) mapped(i) = f(values(i));
  return solver.eigenvectors() * mapped.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace iondfs
