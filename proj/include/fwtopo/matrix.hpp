#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace fwtopo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Momentum = Eigen::VectorXd;

// Entrywise tolerance for structural identities. Every generator entry is
// 0, +-1 or +-i, so anything above rounding is a real defect.
inline constexpr double kMatrixTol = 1e-12;

inline constexpr Complex kI{0.0, 1.0};

// Only these sizes occur: 2x2 and 4x4 Dirac blocks, up to four copies.
bool is_supported_dim(Eigen::Index n);

double max_abs(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kMatrixTol);
bool is_hermitian(const ComplexMatrix& a, double tol = kMatrixTol);
bool is_unitary(const ComplexMatrix& a, double tol = kMatrixTol);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix identity(Eigen::Index n);

// Diagonal matrix with the given +-1 entries.
ComplexMatrix sign_diagonal(std::span<const int> signs);

namespace pauli {
ComplexMatrix id();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

}  // namespace fwtopo
