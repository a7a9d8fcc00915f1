// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDFRAME_SUBDIVISION_HPP
#define DDFRAME_SUBDIVISION_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ddframe/mesh.hpp"

namespace ddframe {

/// Lagrange basis values L_j(x_star) for the given pairwise-distinct nodes,
/// evaluated in barycentric form. The weights sum to 1 and reproduce
/// polynomials up to degree nodes.size()-1 exactly. Throws
/// std::invalid_argument ("degenerate interpolation nodes") on duplicates.
Eigen::VectorXd midpoint_weights(const std::vector<double>& nodes,
                                 double x_star);

/// Semi-regular Dubuc-Deslauriers 2n-point subdivision operator on the mesh
/// of cfg: P(2k,k) = 1 and row 2k+1 of columns k-n+1..k+n carries
/// midpoint_weights(t(k-n+1..k+n), t(2k+1)/2).
BandedOperator build_subdivision_operator(const MeshConfig& cfg);

/// Index set {1-2n, ..., 2n-1} of the finite section.
IndexWindow finite_section_window(int n);

/// The square matrix (P(m,k)) for m,k in {1-2n,...,2n-1}, which carries all
/// nonzero spectrum of the operator.
Eigen::MatrixXd finite_section(const BandedOperator& op);

struct ConvergenceReport {
  std::vector<std::complex<double>> eigenvalues;  // descending modulus
  bool one_is_simple = false;
  bool spectral_ok = false;
  std::vector<double> cascade_diff;  // per-level max first difference near 0
  bool cascade_ok = false;           // monotone decrease below tol
};

/// Eigenvalue part of the convergence check: exactly one eigenvalue within
/// tol.spectral of 1 and all others of modulus < 1 - tol.spectral_margin.
/// cascade_diff is left empty. Throws std::runtime_error
/// ("spectrum not computed") on eigensolver failure.
ConvergenceReport spectral_check(const Eigen::MatrixXd& section,
                                 const ToleranceSet& tol);

/// Full convergence report: spectral_check of the finite section plus the
/// cascade first-difference decay max_{k in I_irr} |f_j(0) - f_j(+-1)| for
/// f_j = P^j delta_k over tol.cascade_depth levels.
ConvergenceReport analyze_convergence(const BandedOperator& op,
                                      const MeshConfig& cfg);

/// One subdivision step P * coeffs on the induced support window.
WindowedVector subdivision_step(const BandedOperator& op,
                                const WindowedVector& coeffs);

/// Values at the points 2^{-level} t(m) of the function with coefficients
/// `coeffs`: for coeffs = delta_k these are exactly phi_k(2^{-level} t(m)).
struct SampledFunction {
  int level = 0;
  IndexWindow window{};
  Eigen::VectorXd values;
};

SampledFunction cascade_sample(const BandedOperator& op,
                               const WindowedVector& coeffs, int level);

}  // namespace ddframe

#endif  // DDFRAME_SUBDIVISION_HPP
