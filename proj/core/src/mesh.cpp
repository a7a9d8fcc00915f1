// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#include "ddframe/mesh.hpp"

#include <stdexcept>

namespace ddframe {

void ToleranceSet::validate() const {
  const double values[] = {verify,   psd_clip,        gram_residual,
                           uep,      projector,       spectral,
                           spectral_margin, cascade,  parseval_telescope,
                           parseval_limit};
  for (double v : values) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("all tolerance values must be strictly positive");
    }
  }
  if (cascade_depth < 1 || quad_level < 1 || parseval_depth < 1) {
    throw std::invalid_argument("all depths must be >= 1");
  }
}

IndexWindow irregular_index_set(int n) {
  if (n < 1) throw std::invalid_argument("order n must be >= 1");
  return {2 - 2 * n, 2 * n - 2};
}

IndexWindow central_window(int n) {
  if (n < 1) throw std::invalid_argument("order n must be >= 1");
  return {5 - 6 * n, 6 * n - 5};
}

MeshConfig::MeshConfig(int order, double hl, double hr, ToleranceSet t)
    : n(order), h_left(hl), h_right(hr), tol(t) {
  if (n < 1) throw std::invalid_argument("order n must be >= 1");
  if (!(h_left > 0.0) || !(h_right > 0.0)) {
    throw std::invalid_argument("mesh steps must be strictly positive");
  }
  tol.validate();
}

double mesh_point(const MeshConfig& cfg, long k) { return cfg.mesh_point(k); }

double BandedOperator::entry(long row, long col) const {
  if (irr_cols.contains(col)) {
    return irr_rows.contains(row) ? irregular(irr_rows.pos(row), irr_cols.pos(col))
                                  : 0.0;
  }
  return regular_mask.at(row - 2 * col);
}

IndexWindow BandedOperator::columns_touching(IndexWindow rows) const {
  // supp(col k) = {2k-2n+1, ..., 2k+2n-1} intersects rows
  const long lo = (rows.lo - (2 * n - 1) + 1) / 2 - 1;
  const long hi = (rows.hi + (2 * n - 1)) / 2 + 1;
  long klo = lo, khi = hi;
  while (2 * klo + 2 * n - 1 < rows.lo) ++klo;
  while (2 * khi - 2 * n + 1 > rows.hi) --khi;
  return {klo, khi};
}

Eigen::MatrixXd to_dense(const BandedOperator& op, IndexWindow rows,
                         IndexWindow cols) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows.length(), cols.length());
  for (long k = cols.lo; k <= cols.hi; ++k) {
    for (long m = rows.lo; m <= rows.hi; ++m) {
      out(rows.pos(m), cols.pos(k)) = op.entry(m, k);
    }
  }
  return out;
}

}  // namespace ddframe
