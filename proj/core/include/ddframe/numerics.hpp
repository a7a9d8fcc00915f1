// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDFRAME_NUMERICS_HPP
#define DDFRAME_NUMERICS_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

// Deterministic dense kernels with explicit contracts. All routines are pure,
// single-threaded and bit-reproducible across runs on the same platform.
namespace ddframe::numerics {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct QrFactors {
  Matrix O;  // square orthogonal
  Matrix U;  // upper triangular (trapezoidal), diagonal >= 0
};

/// Householder QR of A (rows >= cols) with A = O U, O^T O = I to 1e-13 and
/// nonnegative diagonal of U. Rank deficiency surfaces as zero diagonal
/// entries of U.
QrFactors qr_factor(const Matrix& A);

struct SymEig {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // orthonormal columns, matching order
};

/// Symmetric eigendecomposition. Requires max|A - A^T| <= 1e-12 * max|A|.
/// Eigenvalues returned in descending order; each eigenvector's largest-
/// magnitude entry (lowest index on ties) is made positive.
SymEig sym_eig(const Matrix& A);

/// Solve A x = b for square nonsingular A; throws std::runtime_error
/// ("singular system") when A is singular to working precision.
Vector solve_linear(const Matrix& A, const Vector& b);

/// Roots of sum_k coeffs[k] z^k (ascending powers, nonzero leading
/// coefficient) via companion-matrix eigenvalues, each polished by Newton
/// iteration. For real input the returned multiset is closed under
/// conjugation.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs);

}  // namespace ddframe::numerics

#endif  // DDFRAME_NUMERICS_HPP
