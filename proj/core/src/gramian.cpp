// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#include "ddframe/gramian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include <Eigen/SVD>

#include "ddframe/numerics.hpp"

namespace ddframe {

WindowedVector regular_gram(const Filter& p) {
  const long n = (1 - p.first()) / 2;
  if (p.empty() || p.first() != 1 - 2 * n || p.last() != 2 * n - 1) {
    throw std::invalid_argument("regular_gram expects a mask supported on {1-2n,...,2n-1}");
  }
  const IndexWindow taus{2 - 4 * n, 4 * n - 2};
  const Eigen::Index m = taus.length();

  // Transfer matrix T(t,l) = (1/2) sum_i p(i) p(l - 2t + i).
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (long t = taus.lo; t <= taus.hi; ++t) {
    for (long l = taus.lo; l <= taus.hi; ++l) {
      double s = 0.0;
      for (long i = p.first(); i <= p.last(); ++i) {
        s += p.at(i) * p.at(l - 2 * t + i);
      }
      T(taus.pos(t), taus.pos(l)) = s / 2.0;
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      T - Eigen::MatrixXd::Identity(m, m), Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double thresh = 1e-8 * std::max(1.0, sigma[0]);
  int null_dim = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] <= thresh) ++null_dim;
  }
  if (null_dim != 1) throw std::runtime_error("Gramian eigenproblem degenerate");

  Eigen::VectorXd g = svd.matrixV().col(m - 1);
  const double total = g.sum();
  if (std::abs(total) < 1e-8) {
    throw std::runtime_error("Gramian eigenproblem degenerate");
  }
  g /= total;
  return {taus, std::move(g)};
}

double GramianWindow::entry(long k, long m) const {
  if (std::labs(m - k) >= 4 * n - 2) return 0.0;
  if (window.contains(k) && window.contains(m)) {
    return central(window.pos(k), window.pos(m));
  }
  const IndexWindow taus{2 - 4 * n, 4 * n - 2};
  if (k <= 1 - 2 * n && m <= 1 - 2 * n) {
    return (normalized ? 1.0 : h_left) * tail[taus.pos(m - k)];
  }
  if (k >= 2 * n - 1 && m >= 2 * n - 1) {
    return (normalized ? 1.0 : h_right) * tail[taus.pos(m - k)];
  }
  return 0.0;
}

namespace {

using PairKey = std::pair<long, long>;

PairKey canonical(long k, long m) { return {std::min(k, m), std::max(k, m)}; }

}  // namespace

GramianWindow semiregular_gram(const BandedOperator& op,
                               const WindowedVector& unit_gram,
                               const MeshConfig& cfg) {
  const int n = cfg.n;
  const IndexWindow irr = irregular_index_set(n);
  const IndexWindow window = central_window(n);
  const IndexWindow taus{2 - 4 * n, 4 * n - 2};

  const auto known_entry = [&](long k, long m) -> double {
    if (std::labs(m - k) >= 4 * n - 2) return 0.0;
    if (k <= 1 - 2 * n && m <= 1 - 2 * n) {
      return cfg.h_left * unit_gram.values[taus.pos(m - k)];
    }
    if (k >= 2 * n - 1 && m >= 2 * n - 1) {
      return cfg.h_right * unit_gram.values[taus.pos(m - k)];
    }
    return 0.0;
  };
  const auto is_unknown = [&](long k, long m) {
    return std::labs(m - k) <= 4 * n - 3 &&
           (irr.contains(k) || irr.contains(m));
  };

  std::vector<PairKey> unknowns;
  std::map<PairKey, Eigen::Index> index_of;
  for (long k = window.lo; k <= window.hi; ++k) {
    for (long m = k; m <= window.hi; ++m) {
      if (is_unknown(k, m)) {
        index_of.emplace(PairKey{k, m}, static_cast<Eigen::Index>(unknowns.size()));
        unknowns.push_back({k, m});
      }
    }
  }
  const Eigen::Index count = static_cast<Eigen::Index>(unknowns.size());

  // Fixed point G(k,m) = (1/2) sum_{u,v} P(u,k) P(v,m) G(u,v), split into
  // the unknown coefficients M and the known right-hand side b.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(count, count);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(count);
  for (Eigen::Index row = 0; row < count; ++row) {
    const auto [k, m] = unknowns[static_cast<size_t>(row)];
    const IndexWindow su = op.column_support(k);
    const IndexWindow sv = op.column_support(m);
    for (long u = su.lo; u <= su.hi; ++u) {
      const double pu = op.entry(u, k);
      if (pu == 0.0) continue;
      for (long v = sv.lo; v <= sv.hi; ++v) {
        const double coef = 0.5 * pu * op.entry(v, m);
        if (coef == 0.0) continue;
        const auto it = index_of.find(canonical(u, v));
        if (it != index_of.end()) {
          M(row, it->second) += coef;
        } else {
          b[row] += coef * known_entry(u, v);
        }
      }
    }
  }

  Eigen::VectorXd x;
  try {
    x = numerics::solve_linear(Eigen::MatrixXd::Identity(count, count) - M, b);
  } catch (const std::runtime_error&) {
    throw std::runtime_error("Gramian system singular");
  }

  // Independent witness: the pinned fixed-point iteration, which never goes
  // through the linear solver.
  Eigen::VectorXd y = Eigen::VectorXd::Zero(count);
  for (int it = 0; it < 600; ++it) {
    Eigen::VectorXd next = M * y + b;
    const double delta = (next - y).cwiseAbs().maxCoeff();
    y = std::move(next);
    if (delta < 1e-15) break;
  }
  if ((y - x).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
    throw std::runtime_error("Gramian fixed-point validator disagrees with the direct solve");
  }

  GramianWindow G;
  G.n = n;
  G.h_left = cfg.h_left;
  G.h_right = cfg.h_right;
  G.window = window;
  G.tail = unit_gram.values;
  G.normalized = false;
  G.central = Eigen::MatrixXd::Zero(window.length(), window.length());
  for (long k = window.lo; k <= window.hi; ++k) {
    for (long m = window.lo; m <= window.hi; ++m) {
      const auto it = index_of.find(canonical(k, m));
      G.central(window.pos(k), window.pos(m)) =
          it != index_of.end() ? x[it->second] : known_entry(k, m);
    }
  }
  G.fixed_point_residual = gram_fixed_point_residual(G, op);
  if (G.fixed_point_residual > cfg.tol.gram_residual) {
    throw std::runtime_error("Gramian fixed-point residual above tolerance");
  }
  return G;
}

Eigen::VectorXd integrals(const GramianWindow& raw) {
  const IndexWindow window = raw.window;
  Eigen::VectorXd d(window.length());
  for (long k = window.lo; k <= window.hi; ++k) {
    double s = 0.0;
    for (long tau = 3 - 4 * raw.n; tau <= 4 * raw.n - 3; ++tau) {
      s += raw.entry(k, k + tau);
    }
    d[window.pos(k)] = s;
  }
  if (!(d.minCoeff() > 0.0)) {
    throw AdmissibilityError("scaling functions undefined for this mesh ratio");
  }
  return d;
}

GramianWindow normalize_gram(const GramianWindow& raw,
                             const Eigen::VectorXd& d_diag) {
  GramianWindow out = raw;
  const Eigen::VectorXd inv_sqrt = d_diag.cwiseSqrt().cwiseInverse();
  out.central = inv_sqrt.asDiagonal() * raw.central * inv_sqrt.asDiagonal();
  out.normalized = true;
  return out;
}

double MomentTable::d_at(long k) const {
  if (window.contains(k)) return d_diag[window.pos(k)];
  return k < 0 ? cfg.h_left : cfg.h_right;
}

double MomentTable::c_at(int alpha, long k) const {
  if (window.contains(k)) return c[static_cast<size_t>(alpha)][window.pos(k)];
  return std::sqrt(d_at(k)) * std::pow(cfg.mesh_point(k), alpha);
}

double MomentTable::m_at(int alpha, long k) const {
  if (alpha >= n) {
    throw std::out_of_range("moments with tails are available for alpha < n only");
  }
  if (window.contains(k)) return m[static_cast<size_t>(alpha)][window.pos(k)];
  return c_at(alpha, k);
}

MomentTable moment_table(const GramianWindow& normalized,
                         const Eigen::VectorXd& d_diag, const MeshConfig& cfg) {
  if (!normalized.normalized) {
    throw std::invalid_argument("moment_table expects the normalized Gramian");
  }
  MomentTable table;
  table.n = cfg.n;
  table.cfg = cfg;
  table.window = normalized.window;
  table.d_diag = d_diag;
  for (int alpha = 0; alpha < 2 * cfg.n; ++alpha) {
    Eigen::VectorXd ca(table.window.length());
    for (long k = table.window.lo; k <= table.window.hi; ++k) {
      ca[table.window.pos(k)] =
          std::sqrt(d_diag[table.window.pos(k)]) * std::pow(cfg.mesh_point(k), alpha);
    }
    table.c.push_back(std::move(ca));
  }
  for (int alpha = 0; alpha < 2 * cfg.n; ++alpha) {
    Eigen::VectorXd ma(table.window.length());
    for (long k = table.window.lo; k <= table.window.hi; ++k) {
      double s = 0.0;
      for (long tau = 3 - 4 * cfg.n; tau <= 4 * cfg.n - 3; ++tau) {
        s += normalized.entry(k, k + tau) * table.c_at(alpha, k + tau);
      }
      ma[table.window.pos(k)] = s;
    }
    if (alpha < cfg.n) {
      table.m.push_back(std::move(ma));
    } else {
      table.m_window_only.push_back(std::move(ma));
    }
  }
  return table;
}

double gram_fixed_point_residual(const GramianWindow& G,
                                 const BandedOperator& op) {
  const IndexWindow window = G.window;
  double residual = 0.0;
  for (long k = window.lo; k <= window.hi; ++k) {
    const IndexWindow su = op.column_support(k);
    for (long m = window.lo; m <= window.hi; ++m) {
      const IndexWindow sv = op.column_support(m);
      double s = 0.0;
      for (long u = su.lo; u <= su.hi; ++u) {
        const double pu = op.entry(u, k);
        if (pu == 0.0) continue;
        for (long v = sv.lo; v <= sv.hi; ++v) {
          s += pu * op.entry(v, m) * G.entry(u, v);
        }
      }
      residual = std::max(residual, std::abs(G.entry(k, m) - 0.5 * s));
    }
  }
  return residual;
}

}  // namespace ddframe
