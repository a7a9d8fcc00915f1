// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#include "ddframe/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ddframe/numerics.hpp"

namespace ddframe {

namespace {

double rel_residual(double delta, double reference) {
  return std::abs(delta) / std::max(1.0, std::abs(reference));
}

}  // namespace

Pipeline build_pipeline(const MeshConfig& cfg, int s_columns) {
  cfg.tol.validate();
  Pipeline pl;
  pl.cfg = cfg;
  pl.op = build_subdivision_operator(cfg);
  pl.filters = build_regular_frame(cfg.n);
  pl.unit_gram = regular_gram(pl.filters.p);
  pl.gram_raw = semiregular_gram(pl.op, pl.unit_gram, cfg);
  pl.d_diag = integrals(pl.gram_raw);
  pl.gram = normalize_gram(pl.gram_raw, pl.d_diag);
  pl.moments = moment_table(pl.gram, pl.d_diag, cfg);
  pl.S = build_S(pl.moments, s_columns);
  pl.padded = padded_window(cfg.n);
  pl.R = build_R(pl.S, pl.op, pl.moments);
  pl.R_irr = build_R_irr(pl.R, pl.filters, cfg);
  pl.Q_irr = psd_factor(pl.R_irr, cfg.tol.psd_clip);
  pl.frame = assemble_frame(pl.filters, pl.Q_irr, cfg);
  return pl;
}

double s_projector_residual(const SMatrix& S, const MomentTable& moments) {
  const Eigen::MatrixXd& B = S.irr_block;
  double res = (B - B.transpose()).cwiseAbs().maxCoeff();
  res = std::max(res, (B * B - B).cwiseAbs().maxCoeff());
  res = std::max(res, std::abs(B.trace() - S.projector_rank));
  const int n_mom = std::min(moments.n, S.projector_rank);
  for (int alpha = 0; alpha < n_mom; ++alpha) {
    Eigen::VectorXd c(S.irr.length());
    for (long k = S.irr.lo; k <= S.irr.hi; ++k) {
      c[S.irr.pos(k)] = moments.c_at(alpha, k);
    }
    const Eigen::VectorXd delta = B * c - c;
    for (Eigen::Index i = 0; i < delta.size(); ++i) {
      res = std::max(res, rel_residual(delta[i], c[i]));
    }
  }
  return res;
}

double moment_map_residual(const SMatrix& S, const MomentTable& moments) {
  const IndexWindow window = moments.window;
  const int n_mom = std::min(moments.n, S.projector_rank);
  double res = 0.0;
  for (int alpha = 0; alpha < n_mom; ++alpha) {
    for (long k = window.lo; k <= window.hi; ++k) {
      double s = moments.m_at(alpha, k);
      if (S.irr.contains(k)) {
        s = 0.0;
        for (long l = S.irr.lo; l <= S.irr.hi; ++l) {
          s += S.irr_block(S.irr.pos(k), S.irr.pos(l)) * moments.m_at(alpha, l);
        }
      }
      res = std::max(res, rel_residual(s - moments.c_at(alpha, k),
                                       moments.c_at(alpha, k)));
    }
  }
  return res;
}

double vanishing_moment_residual(const FrameOperator& frame,
                                 const MomentTable& moments, int n_moments) {
  const IndexWindow rows = padded_window(frame.n);
  const std::vector<FrameColumn> cols = frame.regular_columns(rows);
  const double w = 1.0 / std::sqrt(2.0);
  double res = 0.0;
  for (int alpha = 0; alpha < n_moments; ++alpha) {
    for (const FrameColumn& col : cols) {
      const Filter& q = col.j == 1 ? frame.regular.q1 : frame.regular.q2;
      double s = 0.0, scale = 0.0;
      for (long u = q.first(); u <= q.last(); ++u) {
        const double m = moments.m_at(alpha, 2 * col.k + u);
        s += q.at(u) * m;
        scale = std::max(scale, std::abs(m));
      }
      res = std::max(res, std::abs(w * s) / std::max(1.0, scale));
    }
    for (Eigen::Index c = 0; c < frame.q_irr.cols(); ++c) {
      double s = 0.0, scale = 0.0;
      for (long u = frame.irr_rows.lo; u <= frame.irr_rows.hi; ++u) {
        const double m = moments.m_at(alpha, u);
        s += frame.q_irr(frame.irr_rows.pos(u), c) * m;
        scale = std::max(scale, std::abs(m));
      }
      res = std::max(res, std::abs(s) / std::max(1.0, scale));
    }
  }
  return res;
}

double eigen_relation_residual(const BandedOperator& op,
                               const MomentTable& moments) {
  const int n = op.n;
  const IndexWindow W = padded_window(n);
  const auto ps_entry = [&](long u, long v) {
    return std::sqrt(moments.d_at(u) / moments.d_at(v)) * op.entry(u, v);
  };
  double res = 0.0;

  // m_alpha^T (D^{1/2} P D^{-1/2}) = 2^{alpha+1} m_alpha^T on columns whose
  // stencil lies inside the padded window.
  for (int alpha = 0; alpha < n; ++alpha) {
    for (long v = W.lo; v <= W.hi; ++v) {
      const IndexWindow supp = op.column_support(v);
      if (supp.lo < W.lo || supp.hi > W.hi) continue;
      double lhs = 0.0;
      for (long u = supp.lo; u <= supp.hi; ++u) {
        lhs += moments.m_at(alpha, u) * ps_entry(u, v);
      }
      const double rhs = std::pow(2.0, alpha + 1) * moments.m_at(alpha, v);
      res = std::max(res, rel_residual(lhs - rhs, rhs));
    }
  }
  // (D^{1/2} P D^{-1/2}) c_alpha = 2^{-alpha} c_alpha for alpha <= 2n-1.
  for (int alpha = 0; alpha < 2 * n; ++alpha) {
    for (long u = W.lo; u <= W.hi; ++u) {
      double lhs = 0.0;
      for (long v = (u - 2 * n) / 2 - 1; v <= (u + 2 * n) / 2 + 1; ++v) {
        const IndexWindow supp = op.column_support(v);
        if (!supp.contains(u)) continue;
        lhs += ps_entry(u, v) * moments.c_at(alpha, v);
      }
      const double rhs = std::pow(2.0, -alpha) * moments.c_at(alpha, u);
      res = std::max(res, rel_residual(lhs - rhs, rhs));
    }
  }
  return res;
}

namespace {

struct Bump {
  double center = 0.0;
  double width = 1.0;

  double operator()(double x) const {
    const double u = (x - center) / width;
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
  }
  double support_lo() const { return center - width; }
  double support_hi() const { return center + width; }
};

double squared_norm(const Bump& f) {
  const int intervals = 1 << 20;
  const double a = f.support_lo(), b = f.support_hi();
  const double step = (b - a) / intervals;
  double s = 0.0;
  for (int i = 1; i < intervals; ++i) {
    const double v = f(a + step * i);
    s += v * v;
  }
  return s * step;  // endpoint values vanish
}

// Scaling coefficients v_J(k) = 2^{J/2} int f(x) phi_k(2^J x) dx by
// trapezoidal quadrature on level-L dyadic samples of the scaling functions.
WindowedVector finest_coefficients(const Pipeline& pl, const Bump& f, int J) {
  const MeshConfig& cfg = pl.cfg;
  const int n = cfg.n;
  const int L = cfg.tol.quad_level;
  const long steps = 1L << L;
  const double pow2J = std::pow(2.0, J);
  const double fa = f.support_lo(), fb = f.support_hi();

  // Unit-mesh regular limit function, sampled on the full support index
  // range [(1-2n) 2^L, (2n-1) 2^L] (zero-padded to the support ends).
  const MeshConfig unit_cfg(n, 1.0, 1.0, cfg.tol);
  const BandedOperator unit_op = build_subdivision_operator(unit_cfg);
  const SampledFunction phi_reg =
      cascade_sample(unit_op, {{0, 0}, Eigen::VectorXd::Ones(1)}, L);
  const long u_lo = (1 - 2 * n) * steps;
  const long u_count = 2 * (2 * n - 1) * steps + 1;
  Eigen::VectorXd phi(u_count);
  for (long i = 0; i < u_count; ++i) {
    const long idx = u_lo + i;
    phi[i] = phi_reg.window.contains(idx) ? phi_reg.values[phi_reg.window.pos(idx)]
                                          : 0.0;
  }

  const IndexWindow irr = irregular_index_set(n);
  // Regular families: k <= 1-2n on the left, k >= 2n-1 on the right.
  const auto side_range = [&](bool left) -> IndexWindow {
    const double h = left ? cfg.h_left : cfg.h_right;
    long lo = static_cast<long>(std::ceil(pow2J * fa / h)) - (2 * n - 1) - 1;
    long hi = static_cast<long>(std::floor(pow2J * fb / h)) + (2 * n - 1) + 1;
    if (left) {
      hi = std::min(hi, static_cast<long>(1 - 2 * n));
    } else {
      lo = std::max(lo, static_cast<long>(2 * n - 1));
    }
    return {lo, hi};
  };
  const IndexWindow left = side_range(true);
  const IndexWindow right = side_range(false);

  long k_lo = irr.lo, k_hi = irr.hi;
  if (left.lo <= left.hi) k_lo = std::min(k_lo, left.lo);
  if (right.lo <= right.hi) k_hi = std::max(k_hi, right.hi);
  WindowedVector v{{k_lo, k_hi}, Eigen::VectorXd::Zero(k_hi - k_lo + 1)};

  const double quad_step = std::pow(2.0, -L);
  const double scale = std::pow(2.0, -0.5 * J);

  for (int side = 0; side < 2; ++side) {
    const bool is_left = side == 0;
    const IndexWindow range = is_left ? left : right;
    if (range.lo > range.hi) continue;
    const double h = is_left ? cfg.h_left : cfg.h_right;
    // One pass over the shared fine grid; each grid point contributes to the
    // <= 4n-2 columns whose sample window contains it.
    const long q_lo = range.lo * steps + u_lo;
    const long q_hi = range.hi * steps - u_lo;
    const auto floor_div = [](long a, long b) {
      return a >= 0 ? a / b : -((-a + b - 1) / b);
    };
    for (long q = q_lo; q <= q_hi; ++q) {
      const double x = h * quad_step * static_cast<double>(q) / pow2J;
      if (x < fa || x > fb) continue;
      const double fx = f(x);
      if (fx == 0.0) continue;
      const long k_first = std::max(range.lo, floor_div(q + u_lo, steps));
      for (long k = k_first; k <= range.hi; ++k) {
        const long i = q - k * steps - u_lo;
        if (i < 0) break;
        if (i >= u_count) continue;
        v.values[v.window.pos(k)] += fx * phi[i];
      }
    }
    for (long k = range.lo; k <= range.hi; ++k) {
      v.values[v.window.pos(k)] *=
          scale * h * quad_step / std::sqrt(pl.moments.d_at(k));
    }
  }

  // Irregular columns on the semi-regular mesh, non-uniform trapezoid.
  for (long k = irr.lo; k <= irr.hi; ++k) {
    const SampledFunction phik =
        cascade_sample(pl.op, {{k, k}, Eigen::VectorXd::Ones(1)}, L);
    const long m_lo = (k + 1 - 2 * n) * steps;
    const long m_hi = (k + 2 * n - 1) * steps;
    const auto value = [&](long m) {
      return phik.window.contains(m) ? phik.values[phik.window.pos(m)] : 0.0;
    };
    const auto point = [&](long m) {
      return quad_step * (m < 0 ? m * cfg.h_left : m * cfg.h_right);
    };
    double s = 0.0;
    for (long m = m_lo + 1; m < m_hi; ++m) {
      const double weight = (point(m + 1) - point(m - 1)) / 2.0;
      s += weight * value(m) * f(point(m) / pow2J);
    }
    v.values[v.window.pos(k)] += scale * s / std::sqrt(pl.moments.d_at(k));
  }
  return v;
}

// Exact two-scale restriction v_j = 2^{-1/2} D^{-1/2} P^T D^{1/2} v_{j+1}.
WindowedVector coarsen(const Pipeline& pl, const WindowedVector& fine) {
  const IndexWindow cols = pl.op.columns_touching(fine.window);
  WindowedVector out{cols, Eigen::VectorXd::Zero(cols.length())};
  const double w = 1.0 / std::sqrt(2.0);
  for (long k = cols.lo; k <= cols.hi; ++k) {
    const IndexWindow supp = pl.op.column_support(k);
    double s = 0.0;
    for (long u = supp.lo; u <= supp.hi; ++u) {
      s += pl.op.entry(u, k) * std::sqrt(pl.moments.d_at(u)) * fine.at(u);
    }
    out.values[cols.pos(k)] = w * s / std::sqrt(pl.moments.d_at(k));
  }
  return out;
}

double s_energy(const Pipeline& pl, const WindowedVector& v) {
  double e = v.values.squaredNorm();
  const IndexWindow irr = pl.S.irr;
  for (long k = irr.lo; k <= irr.hi; ++k) {
    for (long l = irr.lo; l <= irr.hi; ++l) {
      const double correction =
          pl.S.irr_block(irr.pos(k), irr.pos(l)) - (k == l ? 1.0 : 0.0);
      e += correction * v.at(k) * v.at(l);
    }
  }
  return e;
}

}  // namespace

ParsevalWitness parseval_witness(const Pipeline& pl) {
  const MeshConfig& cfg = pl.cfg;
  const int n = cfg.n;
  const int J = cfg.tol.parseval_depth;
  const double hmax = std::max(cfg.h_left, cfg.h_right);
  const double width = 2.0 * n * std::max(hmax, 1.0);
  const double irr_lo = cfg.mesh_point(3 - 4 * n);
  const double irr_hi = cfg.mesh_point(4 * n - 3);

  const Bump bumps[3] = {
      {0.0, width},
      {irr_lo - width - cfg.h_left, width},
      {irr_hi + width + cfg.h_right, width},
  };

  ParsevalWitness out;
  out.limit_errors.assign(static_cast<size_t>(J) + 1, 0.0);
  out.monotone_from_3 = true;

  for (const Bump& f : bumps) {
    const double f_norm2 = squared_norm(f);
    std::vector<WindowedVector> v(static_cast<size_t>(J) + 2);
    v[static_cast<size_t>(J) + 1] = finest_coefficients(pl, f, J + 1);
    for (int j = J; j >= 0; --j) {
      v[static_cast<size_t>(j)] = coarsen(pl, v[static_cast<size_t>(j) + 1]);
    }
    std::vector<double> energy(static_cast<size_t>(J) + 2);
    for (int j = 0; j <= J + 1; ++j) {
      energy[static_cast<size_t>(j)] = s_energy(pl, v[static_cast<size_t>(j)]);
    }
    for (int j = 0; j <= J; ++j) {
      const double detail =
          pl.frame.apply_transpose(v[static_cast<size_t>(j) + 1]).squaredNorm();
      const double telescope = std::abs(energy[static_cast<size_t>(j) + 1] -
                                        energy[static_cast<size_t>(j)] - detail);
      out.telescope_max = std::max(out.telescope_max, telescope / f_norm2);
    }
    std::vector<double> errors(static_cast<size_t>(J) + 1);
    for (int j = 0; j <= J; ++j) {
      errors[static_cast<size_t>(j)] =
          std::abs(energy[static_cast<size_t>(j)] - f_norm2) / f_norm2;
      out.limit_errors[static_cast<size_t>(j)] =
          std::max(out.limit_errors[static_cast<size_t>(j)], errors[static_cast<size_t>(j)]);
    }
    for (int j = 3; j < J; ++j) {
      if (errors[static_cast<size_t>(j) + 1] > errors[static_cast<size_t>(j)]) {
        out.monotone_from_3 = false;
      }
    }
  }
  out.limit_final = out.limit_errors.back();
  return out;
}

namespace {

VerificationReport run_verification(const Pipeline& pl,
                                    const RegularFrame& filters,
                                    const FrameOperator& frame) {
  const ToleranceSet& tol = pl.cfg.tol;
  VerificationReport report;
  const auto add = [&report](std::string name, double residual, double threshold) {
    report.checks.push_back(
        {std::move(name), residual, threshold, residual <= threshold});
  };

  add("uep", uep_residual(filters.p, {filters.q1, filters.q2}), tol.uep);
  add("gram_fixed_point", pl.gram_raw.fixed_point_residual, tol.gram_residual);
  add("s_projector", s_projector_residual(pl.S, pl.moments), tol.projector);
  add("moment_map", moment_map_residual(pl.S, pl.moments), tol.verify);

  const auto eig = numerics::sym_eig(pl.R_irr);
  const double norm = eig.eigenvalues.cwiseAbs().maxCoeff();
  add("psd_min_eigenvalue", std::max(0.0, -eig.eigenvalues.minCoeff()),
      tol.psd_clip * norm);

  // Factor reconstruction with the frame's own irregular block; the regular
  // mesh uses the shift-invariant columns over I_irr instead.
  Eigen::MatrixXd recon;
  if (frame.regular_mesh) {
    const IndexWindow cen = central_window(pl.cfg.n);
    recon = Eigen::MatrixXd::Zero(cen.length(), cen.length());
    const Filter* qs[2] = {&filters.q1, &filters.q2};
    for (long k = pl.S.irr.lo; k <= pl.S.irr.hi; ++k) {
      for (const Filter* q : qs) {
        for (long u = 2 * k + q->first(); u <= 2 * k + q->last(); ++u) {
          for (long v = 2 * k + q->first(); v <= 2 * k + q->last(); ++v) {
            recon(cen.pos(u), cen.pos(v)) += 0.5 * q->at(u - 2 * k) * q->at(v - 2 * k);
          }
        }
      }
    }
  } else {
    recon = frame.q_irr * frame.q_irr.transpose();
  }
  add("psd_reconstruction", (recon - pl.R_irr).cwiseAbs().maxCoeff(),
      tol.psd_clip * std::max(1e-300, norm));

  const Eigen::MatrixXd Q = frame.materialize(pl.padded);
  add("frame_identity", (Q * Q.transpose() - pl.R).cwiseAbs().maxCoeff(),
      tol.verify);

  const int n_mom = std::min(pl.cfg.n, pl.S.projector_rank);
  add("vanishing_moments",
      vanishing_moment_residual(frame, pl.moments, n_mom), tol.verify);
  add("eigen_relations", eigen_relation_residual(pl.op, pl.moments), tol.verify);

  Pipeline shadow = pl;  // frame under test drives the Parseval witness
  shadow.frame = frame;
  const ParsevalWitness witness = parseval_witness(shadow);
  add("parseval_telescope", witness.telescope_max, tol.parseval_telescope);
  report.checks.push_back({"parseval_limit", witness.limit_final,
                           tol.parseval_limit,
                           witness.limit_final <= tol.parseval_limit &&
                               witness.monotone_from_3});
  return report;
}

}  // namespace

VerificationReport verify_frame(const Pipeline& pl) {
  return run_verification(pl, pl.filters, pl.frame);
}

VerificationReport verify_against(const Pipeline& pl,
                                  const RegularFrame& filters,
                                  const FrameOperator& frame) {
  return run_verification(pl, filters, frame);
}

}  // namespace ddframe
