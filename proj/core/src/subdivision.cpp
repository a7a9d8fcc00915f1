// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#include "ddframe/subdivision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ddframe {

Eigen::VectorXd midpoint_weights(const std::vector<double>& nodes,
                                 double x_star) {
  const size_t m = nodes.size();
  if (m == 0) throw std::invalid_argument("degenerate interpolation nodes");
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      if (nodes[i] == nodes[j]) {
        throw std::invalid_argument("degenerate interpolation nodes");
      }
    }
  }
  Eigen::VectorXd w(static_cast<Eigen::Index>(m));
  // Exact hit on a node: the weights are the indicator of that node.
  for (size_t i = 0; i < m; ++i) {
    if (nodes[i] == x_star) {
      w.setZero();
      w[static_cast<Eigen::Index>(i)] = 1.0;
      return w;
    }
  }
  // Barycentric form; the final normalization makes the weights sum to 1.
  Eigen::VectorXd lambda(static_cast<Eigen::Index>(m));
  for (size_t i = 0; i < m; ++i) {
    double denom = 1.0;
    for (size_t j = 0; j < m; ++j) {
      if (j != i) denom *= nodes[i] - nodes[j];
    }
    lambda[static_cast<Eigen::Index>(i)] = 1.0 / denom;
  }
  double total = 0.0;
  for (size_t i = 0; i < m; ++i) {
    w[static_cast<Eigen::Index>(i)] =
        lambda[static_cast<Eigen::Index>(i)] / (x_star - nodes[i]);
    total += w[static_cast<Eigen::Index>(i)];
  }
  return w / total;
}

BandedOperator build_subdivision_operator(const MeshConfig& cfg) {
  const int n = cfg.n;
  BandedOperator op;
  op.n = n;
  op.regular_mask = dd_mask(n);
  op.irr_cols = irregular_index_set(n);
  op.irr_rows = central_window(n);
  op.irregular = Eigen::MatrixXd::Zero(op.irr_rows.length(), op.irr_cols.length());

  for (long k = op.irr_cols.lo; k <= op.irr_cols.hi; ++k) {
    op.irregular(op.irr_rows.pos(2 * k), op.irr_cols.pos(k)) = 1.0;
  }
  // Odd rows 2j+1 carry the midpoint weights of the 2n neighbours
  // t(j-n+1), ..., t(j+n); the row intersects the irregular columns for
  // j = irr.lo-n .. irr.hi+n-1.
  for (long j = op.irr_cols.lo - n; j <= op.irr_cols.hi + n - 1; ++j) {
    std::vector<double> nodes(static_cast<size_t>(2 * n));
    for (long i = 0; i < 2 * n; ++i) {
      nodes[static_cast<size_t>(i)] = cfg.mesh_point(j - n + 1 + i);
    }
    const Eigen::VectorXd w =
        midpoint_weights(nodes, cfg.mesh_point(2 * j + 1) / 2.0);
    for (long i = 0; i < 2 * n; ++i) {
      const long col = j - n + 1 + i;
      if (op.irr_cols.contains(col)) {
        op.irregular(op.irr_rows.pos(2 * j + 1), op.irr_cols.pos(col)) = w[i];
      }
    }
  }
  return op;
}

IndexWindow finite_section_window(int n) { return {1 - 2 * n, 2 * n - 1}; }

Eigen::MatrixXd finite_section(const BandedOperator& op) {
  const IndexWindow w = finite_section_window(op.n);
  return to_dense(op, w, w);
}

ConvergenceReport spectral_check(const Eigen::MatrixXd& section,
                                 const ToleranceSet& tol) {
  if (section.rows() != section.cols()) {
    throw std::invalid_argument("finite section must be square");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(section);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectrum not computed");
  }
  ConvergenceReport report;
  report.eigenvalues.assign(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + section.rows());
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](const auto& a, const auto& b) {
              const double ma = std::abs(a), mb = std::abs(b);
              if (ma != mb) return ma > mb;
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() > b.imag();
            });
  int near_one = 0;
  bool rest_contractive = true;
  for (const auto& ev : report.eigenvalues) {
    if (std::abs(ev - 1.0) <= tol.spectral) {
      ++near_one;
    } else if (std::abs(ev) >= 1.0 - tol.spectral_margin) {
      rest_contractive = false;
    }
  }
  report.one_is_simple = (near_one == 1);
  report.spectral_ok = report.one_is_simple && rest_contractive;
  return report;
}

ConvergenceReport analyze_convergence(const BandedOperator& op,
                                      const MeshConfig& cfg) {
  ConvergenceReport report = spectral_check(finite_section(op), cfg.tol);

  const IndexWindow irr = irregular_index_set(cfg.n);
  std::vector<WindowedVector> f;
  for (long k = irr.lo; k <= irr.hi; ++k) {
    WindowedVector delta{{k, k}, Eigen::VectorXd::Ones(1)};
    f.push_back(delta);
  }
  report.cascade_diff.clear();
  for (int level = 1; level <= cfg.tol.cascade_depth; ++level) {
    double diff = 0.0;
    for (auto& v : f) {
      v = subdivision_step(op, v);
      diff = std::max(diff, std::abs(v.at(0) - v.at(1)));
      diff = std::max(diff, std::abs(v.at(0) - v.at(-1)));
    }
    report.cascade_diff.push_back(diff);
  }
  report.cascade_ok = true;
  for (size_t i = 0; i + 1 < report.cascade_diff.size(); ++i) {
    if (report.cascade_diff[i + 1] > report.cascade_diff[i] * (1.0 + 1e-12)) {
      report.cascade_ok = false;
    }
  }
  if (report.cascade_diff.empty() ||
      report.cascade_diff.back() >= cfg.tol.cascade) {
    report.cascade_ok = false;
  }
  return report;
}

WindowedVector subdivision_step(const BandedOperator& op,
                                const WindowedVector& coeffs) {
  const IndexWindow in = coeffs.window;
  const IndexWindow out_window{2 * in.lo - 2 * op.n + 1, 2 * in.hi + 2 * op.n - 1};
  WindowedVector out{out_window, Eigen::VectorXd::Zero(out_window.length())};
  for (long k = in.lo; k <= in.hi; ++k) {
    const double c = coeffs.values[in.pos(k)];
    if (c == 0.0) continue;
    const IndexWindow supp = op.column_support(k);
    for (long m = supp.lo; m <= supp.hi; ++m) {
      out.values[out_window.pos(m)] += c * op.entry(m, k);
    }
  }
  return out;
}

SampledFunction cascade_sample(const BandedOperator& op,
                               const WindowedVector& coeffs, int level) {
  if (level < 0) throw std::invalid_argument("level must be >= 0");
  WindowedVector v = coeffs;
  for (int j = 0; j < level; ++j) v = subdivision_step(op, v);
  return {level, v.window, std::move(v.values)};
}

}  // namespace ddframe
