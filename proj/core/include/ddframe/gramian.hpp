// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDFRAME_GRAMIAN_HPP
#define DDFRAME_GRAMIAN_HPP

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ddframe/mesh.hpp"
#include "ddframe/subdivision.hpp"

namespace ddframe {

/// Thrown when the integrals of the basic limit functions are not strictly
/// positive, i.e. the scaling functions do not exist for this mesh ratio.
class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inner products g(tau) = int phi_0(x) phi_0(x - tau) dx of the regular
/// basic limit function on the unit mesh, tau in {2-4n, ..., 4n-2}. Solves
/// the transfer eigenproblem g(m) = (1/2) sum_{i,j} p(i) p(j) g(2m + j - i),
/// normalized by sum_tau g(tau) = 1. Throws std::runtime_error
/// ("Gramian eigenproblem degenerate") when the eigenvalue-1 eigenspace is
/// not one-dimensional.
WindowedVector regular_gram(const Filter& p);

/// Central block of the Gramian G = int [phi_k][phi_k]^T together with the
/// regular tails. Entries for index pairs on the same regular side are
/// h_side * g(m-k); pairs with support overlap and at least one irregular
/// index are solved from the fixed-point system G = (1/2) P^T G P.
struct GramianWindow {
  int n = 0;
  double h_left = 1.0;
  double h_right = 1.0;
  IndexWindow window{};      // central_window(n)
  Eigen::MatrixXd central;   // symmetric block over window x window
  Eigen::VectorXd tail;      // unit-mesh g over {2-4n,...,4n-2}
  bool normalized = false;
  double fixed_point_residual = 0.0;

  // Entry at arbitrary indices, using the tails outside the central block.
  double entry(long k, long m) const;
};

/// Solves the finite linear system for the unknown Gramian entries and
/// validates the solution both by the fixed-point residual and by an
/// independent pinned fixed-point iteration. Throws std::runtime_error
/// ("Gramian system singular") or on residual above cfg.tol.gram_residual.
GramianWindow semiregular_gram(const BandedOperator& op,
                               const WindowedVector& unit_gram,
                               const MeshConfig& cfg);

/// Row sums d(k) = sum_m G(k,m) of the raw Gramian = integrals of the basic
/// limit functions, over the central window. Throws std::runtime_error
/// ("scaling functions undefined for this mesh ratio") when any integral is
/// not strictly positive; this is the admissibility boundary.
Eigen::VectorXd integrals(const GramianWindow& raw);

/// G_Phi = D^{-1/2} G D^{-1/2}; the normalized tails are the unit-mesh g on
/// both sides.
GramianWindow normalize_gram(const GramianWindow& raw,
                             const Eigen::VectorXd& d_diag);

/// Integrals d, coefficient vectors c_alpha = D^{1/2} t^alpha for
/// alpha = 0..2n-1 and moments m_alpha = G_Phi c_alpha for alpha = 0..n-1
/// (band-finite sums; tails m_alpha = c_alpha). The windowed products
/// G_Phi c_alpha for alpha = n..2n-1 are kept separately without any tail
/// claim.
struct MomentTable {
  int n = 0;
  MeshConfig cfg{};
  IndexWindow window{};                    // central_window(n)
  Eigen::VectorXd d_diag;                  // integrals over window
  std::vector<Eigen::VectorXd> c;          // alpha = 0..2n-1
  std::vector<Eigen::VectorXd> m;          // alpha = 0..n-1
  std::vector<Eigen::VectorXd> m_window_only;  // alpha = n..2n-1

  double d_at(long k) const;               // tails h_left / h_right
  double c_at(int alpha, long k) const;    // tail sqrt(d) * t^alpha
  double m_at(int alpha, long k) const;    // alpha < n, tail = c_at
};

MomentTable moment_table(const GramianWindow& normalized,
                         const Eigen::VectorXd& d_diag, const MeshConfig& cfg);

/// Max residual of G - (1/2) P^T G P over the given window (tails used
/// outside the central block).
double gram_fixed_point_residual(const GramianWindow& G,
                                 const BandedOperator& op);

}  // namespace ddframe

#endif  // DDFRAME_GRAMIAN_HPP
