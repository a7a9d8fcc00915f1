// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDFRAME_FRAME_HPP
#define DDFRAME_FRAME_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ddframe/gramian.hpp"

namespace ddframe {

/// Vanishing-moment recovery matrix: identity outside the irregular block,
/// which is the orthogonal projector onto span{c_alpha|_{I_irr}}.
struct SMatrix {
  IndexWindow irr{};          // irregular_index_set(n)
  Eigen::MatrixXd irr_block;  // symmetric idempotent, trace = projector_rank
  int projector_rank = 0;

  double entry(long k, long m) const;
};

/// Builds S: C = [c_alpha|_{I_irr}] for alpha < n_columns, QR-factorize
/// C = O U and set S_irr = O~ O~^T with O~ the first n_columns columns of O.
/// On a regular mesh S is the identity. n_columns defaults to n; a smaller
/// value trades vanishing moments for the same construction. Throws
/// std::runtime_error ("coefficient vectors degenerate") when rank(C) <
/// n_columns.
SMatrix build_S(const MomentTable& moments, int n_columns = -1);

/// Window on which R is materialized: central_window(n) padded by 4n.
IndexWindow padded_window(int n);

/// D^{1/2} P D^{-1/2} materialized over rows x cols.
Eigen::MatrixXd scaled_operator(const BandedOperator& op,
                                const MomentTable& moments, IndexWindow rows,
                                IndexWindow cols);

/// R = S - (1/2) Ps S Ps^T over padded_window(n). Entries outside the
/// central window are checked against the pure-regular pattern
/// I - (1/2) P P^T; failure throws std::runtime_error ("R window too small").
Eigen::MatrixXd build_R(const SMatrix& S, const BandedOperator& op,
                        const MomentTable& moments);

/// R_irr = R - (1/2) sum_{k not in I_irr} [q1 q1^T + q2 q2^T](.-2k, .-2k)
/// restricted to the central window. The subtracted expression must vanish
/// outside the central window to 1e-11; failure throws std::runtime_error
/// ("R_irr support violation").
Eigen::MatrixXd build_R_irr(const Eigen::MatrixXd& R_padded,
                            const RegularFrame& frame, const MeshConfig& cfg);

/// Symmetric eigendecomposition factor: eigenvalues within
/// [-tol_psd*||R||, tol_psd*||R||] are clipped to zero, columns ordered by
/// descending eigenvalue, ||Q Q^T - R_irr||_max <= tol_psd*||R_irr||. Throws
/// std::runtime_error when an eigenvalue is below -tol_psd*||R_irr||
/// ("R_irr not positive semi-definite ...").
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& R_irr, double tol_psd);

struct FrameColumn {
  long k = 0;  // translation
  int j = 1;   // framelet index, 1 or 2
};

/// Frame operator Q: regular columns 2^{-1/2} q_j(. - 2k) for k outside
/// I_irr plus the dense irregular block. On a regular mesh the irregular
/// block is empty and the regular columns cover all k.
struct FrameOperator {
  int n = 0;
  MeshConfig cfg{};
  RegularFrame regular{};
  Eigen::MatrixXd q_irr;   // rows over irr_rows; may have zero columns
  IndexWindow irr_rows{};  // central_window(n)
  bool regular_mesh = false;

  bool regular_column_allowed(long k) const;
  std::vector<FrameColumn> regular_columns(IndexWindow rows) const;
  /// Dense Q over the row window: regular columns touching it (ascending k,
  /// then j), followed by the irregular columns.
  Eigen::MatrixXd materialize(IndexWindow rows) const;
  /// Q^T v for a finitely supported v (regular columns touching v's window,
  /// then irregular).
  Eigen::VectorXd apply_transpose(const WindowedVector& v) const;
};

FrameOperator assemble_frame(const RegularFrame& frame,
                             const Eigen::MatrixXd& q_irr,
                             const MeshConfig& cfg);

struct ResidualCheck {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::vector<ResidualCheck> checks;

  bool all_pass() const;
  const ResidualCheck* find(const std::string& name) const;
};

}  // namespace ddframe

#endif  // DDFRAME_FRAME_HPP
