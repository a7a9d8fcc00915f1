// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDFRAME_MESH_HPP
#define DDFRAME_MESH_HPP

#include <Eigen/Dense>

#include "ddframe/filters.hpp"

namespace ddframe {

/// Thresholds used throughout the pipeline. All values must be strictly
/// positive; depths must be >= 1.
struct ToleranceSet {
  double verify = 1e-10;         // generic verification residual bound
  double psd_clip = 1e-9;        // relative eigenvalue clip in psd_factor
  double gram_residual = 1e-11;  // Gramian fixed-point residual bound
  double uep = 1e-12;            // UEP coefficient-identity residual bound
  double projector = 1e-12;      // projector identity residual bound
  double spectral = 1e-8;        // |lambda - 1| for the simple eigenvalue
  double spectral_margin = 1e-3; // remaining spectrum needs |lambda| < 1 - margin
  double cascade = 1e-2;         // final first-difference bound near 0
  int cascade_depth = 12;
  int quad_level = 12;           // dyadic sampling level for quadrature
  int parseval_depth = 6;
  double parseval_telescope = 1e-9;  // relative to ||f||^2
  double parseval_limit = 1e-2;      // relative to ||f||^2

  void validate() const;  // throws std::invalid_argument
};

/// Inclusive range of bi-infinite sequence indices.
struct IndexWindow {
  long lo = 0;
  long hi = 0;

  long length() const { return hi - lo + 1; }
  bool contains(long k) const { return lo <= k && k <= hi; }
  // Position of index k inside the window, for dense storage.
  Eigen::Index pos(long k) const { return static_cast<Eigen::Index>(k - lo); }
  bool operator==(const IndexWindow&) const = default;
};

/// Columns of the subdivision operator that differ from the regular rule,
/// {2-2n, ..., 2n-2}.
IndexWindow irregular_index_set(int n);

/// Indices affected by the irregular columns, {5-6n, ..., 6n-5}.
IndexWindow central_window(int n);

/// Semi-regular mesh t(k) = k*h_left for k < 0, k*h_right for k >= 0,
/// together with the order n and the tolerance configuration.
struct MeshConfig {
  int n = 1;
  double h_left = 1.0;
  double h_right = 1.0;
  ToleranceSet tol{};

  MeshConfig() = default;
  MeshConfig(int order, double hl, double hr, ToleranceSet t = {});

  double mesh_point(long k) const {
    return k < 0 ? static_cast<double>(k) * h_left
                 : static_cast<double>(k) * h_right;
  }
  bool regular() const { return h_left == h_right; }
};

double mesh_point(const MeshConfig& cfg, long k);

/// Finitely supported sequence with explicit index window.
struct WindowedVector {
  IndexWindow window{};
  Eigen::VectorXd values;

  double at(long k) const {
    return window.contains(k) ? values[window.pos(k)] : 0.0;
  }
};

/// Bi-infinite 2-slanted operator: regular mask placed at rows 2k + offset
/// for columns outside irr_cols, plus a dense block for the irregular
/// columns. Row support of every column k is {2k-2n+1, ..., 2k+2n-1}.
struct BandedOperator {
  int n = 0;
  Filter regular_mask;        // support {1-2n, ..., 2n-1}
  IndexWindow irr_cols{};     // irregular_index_set(n)
  IndexWindow irr_rows{};     // central_window(n)
  Eigen::MatrixXd irregular;  // irr_rows x irr_cols block

  double entry(long row, long col) const;
  IndexWindow column_support(long col) const {
    return {2 * col - 2 * n + 1, 2 * col + 2 * n - 1};
  }
  // Columns whose support intersects the row window.
  IndexWindow columns_touching(IndexWindow rows) const;
};

/// Materializes entries P(m,k) for m in rows, k in cols. Entries outside the
/// column supports are exactly zero.
Eigen::MatrixXd to_dense(const BandedOperator& op, IndexWindow rows,
                         IndexWindow cols);

}  // namespace ddframe

#endif  // DDFRAME_MESH_HPP
