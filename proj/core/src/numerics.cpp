// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#include "ddframe/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddframe::numerics {

QrFactors qr_factor(const Matrix& A) {
  if (A.rows() < A.cols()) {
    throw std::invalid_argument("qr_factor requires rows >= cols");
  }
  Eigen::HouseholderQR<Matrix> qr(A);
  Matrix O = qr.householderQ();
  Matrix U = qr.matrixQR().triangularView<Eigen::Upper>();
  // Sign convention: nonnegative diagonal of U.
  const Eigen::Index r = std::min(U.rows(), U.cols());
  for (Eigen::Index i = 0; i < r; ++i) {
    if (U(i, i) < 0.0) {
      U.row(i) = -U.row(i);
      O.col(i) = -O.col(i);
    }
  }
  return {std::move(O), std::move(U)};
}

SymEig sym_eig(const Matrix& A) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("sym_eig requires a square matrix");
  }
  const double scale = A.cwiseAbs().maxCoeff();
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, scale)) {
    throw std::invalid_argument("sym_eig requires a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      Matrix((A + A.transpose()) / 2.0));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolver did not converge");
  }
  const Eigen::Index m = A.rows();
  SymEig out;
  out.eigenvalues = Vector(m);
  out.eigenvectors = Matrix(m, m);
  // Eigen returns ascending order; flip to descending.
  for (Eigen::Index i = 0; i < m; ++i) {
    out.eigenvalues[i] = solver.eigenvalues()[m - 1 - i];
    out.eigenvectors.col(i) = solver.eigenvectors().col(m - 1 - i);
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::Index arg = 0;
    out.eigenvectors.col(i).cwiseAbs().maxCoeff(&arg);
    if (out.eigenvectors(arg, i) < 0.0) {
      out.eigenvectors.col(i) = -out.eigenvectors.col(i);
    }
  }
  return out;
}

Vector solve_linear(const Matrix& A, const Vector& b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    throw std::invalid_argument("solve_linear requires a square system");
  }
  Eigen::FullPivLU<Matrix> lu(A);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) {
    throw std::runtime_error("singular system");
  }
  Vector x = lu.solve(b);
  const double scale =
      A.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff() +
      (b.size() > 0 ? b.cwiseAbs().maxCoeff() : 0.0);
  if ((A * x - b).cwiseAbs().maxCoeff() > 1e-11 * std::max(1.0, scale)) {
    throw std::runtime_error("singular system");
  }
  return x;
}

namespace {

std::complex<double> horner(const std::vector<double>& c,
                            std::complex<double> z) {
  std::complex<double> v(0.0, 0.0);
  for (size_t i = c.size(); i-- > 0;) v = v * z + c[i];
  return v;
}

std::complex<double> horner_derivative(const std::vector<double>& c,
                                       std::complex<double> z) {
  std::complex<double> v(0.0, 0.0);
  for (size_t i = c.size(); i-- > 1;) v = v * z + static_cast<double>(i) * c[i];
  return v;
}

}  // namespace

std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs) {
  if (coeffs.empty() || coeffs.back() == 0.0) {
    throw std::invalid_argument("poly_roots requires a nonzero leading coefficient");
  }
  const size_t deg = coeffs.size() - 1;
  if (deg == 0) return {};

  Matrix companion = Matrix::Zero(static_cast<Eigen::Index>(deg),
                                  static_cast<Eigen::Index>(deg));
  for (size_t i = 0; i + 1 < deg; ++i) {
    companion(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
  }
  for (size_t i = 0; i < deg; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) =
        -coeffs[i] / coeffs.back();
  }
  Eigen::EigenSolver<Matrix> solver(companion);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("poly_roots eigensolver did not converge");
  }

  std::vector<std::complex<double>> roots(deg);
  for (size_t i = 0; i < deg; ++i) {
    std::complex<double> z = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
    for (int it = 0; it < 8; ++it) {
      const std::complex<double> f = horner(coeffs, z);
      const std::complex<double> df = horner_derivative(coeffs, z);
      if (std::abs(df) == 0.0) break;
      const std::complex<double> step = f / df;
      z -= step;
      if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    roots[i] = z;
  }

  // Enforce conjugate closure after polishing: pair nearby conjugates and
  // average them; lone near-real roots collapse onto the real axis.
  std::vector<bool> used(deg, false);
  for (size_t i = 0; i < deg; ++i) {
    if (used[i] || std::abs(roots[i].imag()) == 0.0) continue;
    size_t best = i;
    double best_dist = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < deg; ++j) {
      if (j == i || used[j]) continue;
      const double dist = std::abs(roots[j] - std::conj(roots[i]));
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    const double tol = 1e-8 * std::max(1.0, std::abs(roots[i]));
    if (best != i && best_dist < tol) {
      const std::complex<double> avg = (roots[i] + std::conj(roots[best])) / 2.0;
      roots[i] = avg;
      roots[best] = std::conj(avg);
      used[i] = used[best] = true;
    } else if (std::abs(roots[i].imag()) < tol) {
      roots[i] = {roots[i].real(), 0.0};
    }
  }
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

}  // namespace ddframe::numerics
