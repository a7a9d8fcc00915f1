// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#include "ddframe/frame.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ddframe/numerics.hpp"

namespace ddframe {

double SMatrix::entry(long k, long m) const {
  if (irr.contains(k) && irr.contains(m)) {
    return irr_block(irr.pos(k), irr.pos(m));
  }
  return k == m ? 1.0 : 0.0;
}

SMatrix build_S(const MomentTable& moments, int n_columns) {
  const int n = moments.n;
  const int cols = n_columns < 0 ? n : n_columns;
  if (cols < 1 || cols > n) {
    throw std::invalid_argument("build_S needs 1 <= n_columns <= n");
  }
  const IndexWindow irr = irregular_index_set(n);

  SMatrix S;
  S.irr = irr;
  S.projector_rank = cols;
  if (moments.cfg.regular()) {
    S.irr_block = Eigen::MatrixXd::Identity(irr.length(), irr.length());
    S.projector_rank = static_cast<int>(irr.length());
    return S;
  }

  Eigen::MatrixXd C(irr.length(), cols);
  for (int alpha = 0; alpha < cols; ++alpha) {
    for (long k = irr.lo; k <= irr.hi; ++k) {
      C(irr.pos(k), alpha) = moments.c_at(alpha, k);
    }
  }
  const auto qr = numerics::qr_factor(C);
  for (int i = 0; i < cols; ++i) {
    if (std::abs(qr.U(i, i)) <= 1e-12 * C.cwiseAbs().maxCoeff()) {
      throw std::runtime_error("coefficient vectors degenerate");
    }
  }
  const Eigen::MatrixXd O_tilde = qr.O.leftCols(cols);
  S.irr_block = O_tilde * O_tilde.transpose();

  // Cross-check against the normal-equation projector C (C^T C)^{-1} C^T.
  const Eigen::MatrixXd gram = C.transpose() * C;
  const Eigen::MatrixXd projector =
      C * gram.llt().solve(Eigen::MatrixXd::Identity(cols, cols)) * C.transpose();
  if ((S.irr_block - projector).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::runtime_error("coefficient vectors degenerate");
  }
  return S;
}

IndexWindow padded_window(int n) {
  const IndexWindow w = central_window(n);
  return {w.lo - 4 * n, w.hi + 4 * n};
}

Eigen::MatrixXd scaled_operator(const BandedOperator& op,
                                const MomentTable& moments, IndexWindow rows,
                                IndexWindow cols) {
  Eigen::MatrixXd Ps = Eigen::MatrixXd::Zero(rows.length(), cols.length());
  for (long k = cols.lo; k <= cols.hi; ++k) {
    const IndexWindow supp = op.column_support(k);
    const double dk = moments.d_at(k);
    for (long u = std::max(rows.lo, supp.lo); u <= std::min(rows.hi, supp.hi); ++u) {
      Ps(rows.pos(u), cols.pos(k)) =
          std::sqrt(moments.d_at(u) / dk) * op.entry(u, k);
    }
  }
  return Ps;
}

Eigen::MatrixXd build_R(const SMatrix& S, const BandedOperator& op,
                        const MomentTable& moments) {
  const int n = op.n;
  const IndexWindow rows = padded_window(n);
  const IndexWindow cols = op.columns_touching(rows);
  const Eigen::MatrixXd Ps = scaled_operator(op, moments, rows, cols);

  Eigen::MatrixXd S_cols(cols.length(), cols.length());
  for (long k = cols.lo; k <= cols.hi; ++k) {
    for (long m = cols.lo; m <= cols.hi; ++m) {
      S_cols(cols.pos(k), cols.pos(m)) = S.entry(k, m);
    }
  }
  Eigen::MatrixXd R = -0.5 * (Ps * S_cols * Ps.transpose());
  for (long u = rows.lo; u <= rows.hi; ++u) {
    for (long v = rows.lo; v <= rows.hi; ++v) {
      R(rows.pos(u), rows.pos(v)) += S.entry(u, v);
    }
  }

  // Outside the central window R must agree with the pure-regular pattern
  // I - (1/2) P P^T (the mask is the same on both sides and D cancels).
  const IndexWindow cen = central_window(n);
  const Filter& p = op.regular_mask;
  for (long u = rows.lo; u <= rows.hi; ++u) {
    for (long v = rows.lo; v <= rows.hi; ++v) {
      if (cen.contains(u) && cen.contains(v)) continue;
      double reg = (u == v) ? 1.0 : 0.0;
      const long klo = (std::max(u, v) - (2 * n - 1) + 1) / 2 - 1;
      const long khi = (std::min(u, v) + (2 * n - 1)) / 2 + 1;
      for (long k = klo; k <= khi; ++k) {
        reg -= 0.5 * p.at(u - 2 * k) * p.at(v - 2 * k);
      }
      if (std::abs(R(rows.pos(u), rows.pos(v)) - reg) > 1e-12) {
        throw std::runtime_error("R window too small");
      }
    }
  }
  return R;
}

Eigen::MatrixXd build_R_irr(const Eigen::MatrixXd& R_padded,
                            const RegularFrame& frame, const MeshConfig& cfg) {
  const int n = cfg.n;
  const IndexWindow rows = padded_window(n);
  if (R_padded.rows() != rows.length() || R_padded.cols() != rows.length()) {
    throw std::invalid_argument("build_R_irr expects R on the padded window");
  }
  const IndexWindow irr = irregular_index_set(n);
  const IndexWindow cen = central_window(n);

  Eigen::MatrixXd acc = R_padded;
  const Filter* qs[2] = {&frame.q1, &frame.q2};
  // Regular framelet blocks at shift 2k for every k outside I_irr whose
  // support touches the padded window.
  const long klo = (rows.lo - (2 * n - 1) + 1) / 2 - 1;
  const long khi = (rows.hi + (2 * n - 1)) / 2 + 1;
  for (long k = klo; k <= khi; ++k) {
    if (irr.contains(k)) continue;
    for (const Filter* q : qs) {
      for (long u = std::max(rows.lo, 2 * k + q->first());
           u <= std::min(rows.hi, 2 * k + q->last()); ++u) {
        const double qu = q->at(u - 2 * k);
        if (qu == 0.0) continue;
        for (long v = std::max(rows.lo, 2 * k + q->first());
             v <= std::min(rows.hi, 2 * k + q->last()); ++v) {
          acc(rows.pos(u), rows.pos(v)) -= 0.5 * qu * q->at(v - 2 * k);
        }
      }
    }
  }

  Eigen::MatrixXd R_irr(cen.length(), cen.length());
  for (long u = rows.lo; u <= rows.hi; ++u) {
    for (long v = rows.lo; v <= rows.hi; ++v) {
      if (cen.contains(u) && cen.contains(v)) {
        R_irr(cen.pos(u), cen.pos(v)) = acc(rows.pos(u), rows.pos(v));
      } else if (std::abs(acc(rows.pos(u), rows.pos(v))) > 1e-11) {
        throw std::runtime_error("R_irr support violation");
      }
    }
  }
  return R_irr;
}

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& R_irr, double tol_psd) {
  const auto eig = numerics::sym_eig(R_irr);
  const Eigen::Index m = eig.eigenvalues.size();
  const double norm = eig.eigenvalues.cwiseAbs().maxCoeff();
  const double clip = tol_psd * norm;

  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double lambda = eig.eigenvalues[i];
    if (lambda < -clip) {
      throw std::runtime_error(
          "R_irr not positive semi-definite (Conjecture 1(i) fails numerically for this instance)");
    }
    if (lambda > clip) ++rank;
  }
  Eigen::MatrixXd Q(m, rank);
  for (Eigen::Index i = 0; i < rank; ++i) {
    Q.col(i) = eig.eigenvectors.col(i) * std::sqrt(eig.eigenvalues[i]);
  }
  if (rank > 0 &&
      (Q * Q.transpose() - R_irr).cwiseAbs().maxCoeff() > tol_psd * norm) {
    throw std::runtime_error("R_irr factor reconstruction above tolerance");
  }
  return Q;
}

bool FrameOperator::regular_column_allowed(long k) const {
  return regular_mesh || !irregular_index_set(n).contains(k);
}

std::vector<FrameColumn> FrameOperator::regular_columns(IndexWindow rows) const {
  std::vector<FrameColumn> cols;
  const Filter* qs[2] = {&regular.q1, &regular.q2};
  const long klo = (rows.lo - (2 * n - 1) + 1) / 2 - 1;
  const long khi = (rows.hi + (2 * n - 1)) / 2 + 1;
  for (long k = klo; k <= khi; ++k) {
    if (!regular_column_allowed(k)) continue;
    for (int j = 0; j < 2; ++j) {
      if (2 * k + qs[j]->last() >= rows.lo && 2 * k + qs[j]->first() <= rows.hi) {
        cols.push_back({k, j + 1});
      }
    }
  }
  return cols;
}

Eigen::MatrixXd FrameOperator::materialize(IndexWindow rows) const {
  const std::vector<FrameColumn> cols = regular_columns(rows);
  const Eigen::Index n_irr = regular_mesh ? 0 : q_irr.cols();
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(
      rows.length(), static_cast<Eigen::Index>(cols.size()) + n_irr);
  const double w = 1.0 / std::sqrt(2.0);
  for (size_t c = 0; c < cols.size(); ++c) {
    const Filter& q = cols[c].j == 1 ? regular.q1 : regular.q2;
    for (long u = std::max(rows.lo, 2 * cols[c].k + q.first());
         u <= std::min(rows.hi, 2 * cols[c].k + q.last()); ++u) {
      Q(rows.pos(u), static_cast<Eigen::Index>(c)) = w * q.at(u - 2 * cols[c].k);
    }
  }
  for (Eigen::Index c = 0; c < n_irr; ++c) {
    for (long u = std::max(rows.lo, irr_rows.lo);
         u <= std::min(rows.hi, irr_rows.hi); ++u) {
      Q(rows.pos(u), static_cast<Eigen::Index>(cols.size()) + c) =
          q_irr(irr_rows.pos(u), c);
    }
  }
  return Q;
}

Eigen::VectorXd FrameOperator::apply_transpose(const WindowedVector& v) const {
  const std::vector<FrameColumn> cols = regular_columns(v.window);
  const Eigen::Index n_irr = regular_mesh ? 0 : q_irr.cols();
  Eigen::VectorXd out =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cols.size()) + n_irr);
  const double w = 1.0 / std::sqrt(2.0);
  for (size_t c = 0; c < cols.size(); ++c) {
    const Filter& q = cols[c].j == 1 ? regular.q1 : regular.q2;
    double s = 0.0;
    for (long u = q.first(); u <= q.last(); ++u) {
      s += q.at(u) * v.at(2 * cols[c].k + u);
    }
    out[static_cast<Eigen::Index>(c)] = w * s;
  }
  for (Eigen::Index c = 0; c < n_irr; ++c) {
    double s = 0.0;
    for (long u = irr_rows.lo; u <= irr_rows.hi; ++u) {
      s += q_irr(irr_rows.pos(u), c) * v.at(u);
    }
    out[static_cast<Eigen::Index>(cols.size()) + c] = s;
  }
  return out;
}

FrameOperator assemble_frame(const RegularFrame& frame,
                             const Eigen::MatrixXd& q_irr,
                             const MeshConfig& cfg) {
  FrameOperator op;
  op.n = cfg.n;
  op.cfg = cfg;
  op.regular = frame;
  op.irr_rows = central_window(cfg.n);
  op.regular_mesh = cfg.regular();
  // On a regular mesh the shift-invariant columns already factor R; the
  // irregular block stays empty.
  op.q_irr = op.regular_mesh
                 ? Eigen::MatrixXd::Zero(op.irr_rows.length(), 0)
                 : q_irr;
  return op;
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ResidualCheck& c) { return c.pass; });
}

const ResidualCheck* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace ddframe
