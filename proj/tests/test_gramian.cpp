#include <doctest.h>

#include <cmath>

#include "ddframe/gramian.hpp"
#include "oracles.hpp"

using namespace ddframe;

namespace {

GramianWindow raw_gram(const MeshConfig& cfg) {
  const BandedOperator op = build_subdivision_operator(cfg);
  return semiregular_gram(op, regular_gram(dd_mask(cfg.n)), cfg);
}

}  // namespace

TEST_SUITE_BEGIN("gramian");

TEST_CASE("regular gram of the hat function") {
  const WindowedVector g = regular_gram(dd_mask(1));
  CHECK(g.window == IndexWindow{-2, 2});
  CHECK(g.values[g.window.pos(0)] == doctest::Approx(2.0 / 3).epsilon(1e-13));
  CHECK(g.values[g.window.pos(1)] == doctest::Approx(1.0 / 6).epsilon(1e-13));
  CHECK(g.values[g.window.pos(-1)] == doctest::Approx(1.0 / 6).epsilon(1e-13));
  CHECK(std::abs(g.values[g.window.pos(2)]) < 1e-14);
}

TEST_CASE("regular gram sums to one") {
  for (int n = 1; n <= 5; ++n) {
    const WindowedVector g = regular_gram(dd_mask(n));
    CHECK(g.values.sum() == doctest::Approx(1.0).epsilon(1e-12));
    // symmetry g(tau) = g(-tau)
    for (long tau = 0; tau <= 4 * n - 2; ++tau) {
      CHECK(g.values[g.window.pos(tau)] ==
            doctest::Approx(g.values[g.window.pos(-tau)]).epsilon(1e-11));
    }
  }
}

TEST_CASE("regular gram agrees with cascade quadrature for n=2") {
  const WindowedVector g = regular_gram(dd_mask(2));
  for (long tau = -6; tau <= 6; ++tau) {
    CHECK(g.values[g.window.pos(tau)] ==
          doctest::Approx(oracles::unit_gram_quadrature(2, tau, 12)).epsilon(1e-8));
  }
}

TEST_CASE("semiregular gram for hats matches exact integration") {
  oracles::Rng rng(4001);
  for (int trial = 0; trial < 10; ++trial) {
    const double hl = (trial < 5) ? 1.0 : rng.uniform(0.2, 4.0);
    const double hr = (trial == 0) ? 3.0 : rng.uniform(0.2, 4.0);
    const MeshConfig cfg(1, hl, hr);
    const GramianWindow G = raw_gram(cfg);
    CHECK(G.fixed_point_residual < 1e-11);
    for (long k = -1; k <= 1; ++k) {
      for (long m = -1; m <= 1; ++m) {
        CHECK(G.entry(k, m) ==
              doctest::Approx(oracles::hat_gram(cfg, k, m)).epsilon(1e-12));
      }
    }
    // row sum at 0 is the integral (h_left + h_right)/2
    double row = 0.0;
    for (long m = -2; m <= 2; ++m) row += G.entry(0, m);
    CHECK(row == doctest::Approx((hl + hr) / 2).epsilon(1e-12));
  }
}

TEST_CASE("uniform mesh gram is the scaled regular tail") {
  for (int n : {1, 2, 3}) {
    for (double h : {0.5, 2.0}) {
      const MeshConfig cfg(n, h, h);
      const WindowedVector g = regular_gram(dd_mask(n));
      const GramianWindow G = raw_gram(cfg);
      for (long k = G.window.lo; k <= G.window.hi; ++k) {
        for (long m = G.window.lo; m <= G.window.hi; ++m) {
          const double want =
              std::labs(m - k) <= 4 * n - 2 ? h * g.at(m - k) : 0.0;
          CHECK(G.entry(k, m) == doctest::Approx(want).epsilon(1e-11));
        }
      }
    }
  }
}

TEST_CASE("gram entries vanish for support-disjoint pairs") {
  const GramianWindow G = raw_gram(MeshConfig(2, 1.0, 2.0));
  CHECK(G.entry(-7, 0) == 0.0);
  CHECK(G.entry(-4, 3) == 0.0);
  CHECK(G.central(G.window.pos(-7), G.window.pos(0)) == 0.0);
}

TEST_CASE("symmetry and fixed point residual across meshes") {
  oracles::Rng rng(4002);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = static_cast<int>(rng.integer(1, 3));
    const MeshConfig cfg(n, rng.uniform(0.4, 2.0), rng.uniform(0.5, 2.5));
    const BandedOperator op = build_subdivision_operator(cfg);
    const GramianWindow G = semiregular_gram(op, regular_gram(dd_mask(n)), cfg);
    CHECK((G.central - G.central.transpose()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(G.fixed_point_residual < 1e-11);
    CHECK(gram_fixed_point_residual(G, op) < 1e-11);
  }
}

TEST_CASE("integrals: golden value and admissibility boundary for n=2") {
  const GramianWindow g2 = raw_gram(MeshConfig(2, 1.0, 2.0));
  const Eigen::VectorXd d = integrals(g2);
  CHECK(d[g2.window.pos(0)] == doctest::Approx(27.0 / 16).epsilon(1e-12));

  CHECK_THROWS_AS(integrals(raw_gram(MeshConfig(2, 1.0, 0.25))),
                  AdmissibilityError);
  CHECK_THROWS_WITH(integrals(raw_gram(MeshConfig(2, 1.0, 0.25))),
                    "scaling functions undefined for this mesh ratio");
  CHECK_THROWS_AS(integrals(raw_gram(MeshConfig(2, 1.0, 3.6))),
                  AdmissibilityError);
  CHECK_NOTHROW(integrals(raw_gram(MeshConfig(2, 1.0, 0.3))));
  CHECK_NOTHROW(integrals(raw_gram(MeshConfig(2, 1.0, 3.4))));
}

TEST_CASE("hat integrals always positive") {
  oracles::Rng rng(4003);
  for (int trial = 0; trial < 8; ++trial) {
    const MeshConfig cfg(1, 1.0, rng.uniform(0.05, 10.0));
    const Eigen::VectorXd d = integrals(raw_gram(cfg));
    CHECK(d.minCoeff() > 0.0);
    CHECK(d[central_window(1).pos(0)] ==
          doctest::Approx((1.0 + cfg.h_right) / 2).epsilon(1e-12));
  }
}

TEST_CASE("moment table basics") {
  const MeshConfig cfg(2, 1.0, 2.0);
  const GramianWindow raw = raw_gram(cfg);
  const Eigen::VectorXd d = integrals(raw);
  const MomentTable table = moment_table(normalize_gram(raw, d), d, cfg);

  // m_0 = sqrt(d) everywhere in the window
  for (long k = table.window.lo; k <= table.window.hi; ++k) {
    CHECK(table.m_at(0, k) ==
          doctest::Approx(std::sqrt(table.d_at(k))).epsilon(1e-12));
  }
  // golden first moment at the junction
  const double h = 2.0;
  const double want = (h + 1) * (h - 1) * (31 * h * h + 40 * h + 31) /
                      (600 * h) / std::sqrt((h + 1) * (h + 1) * (h + 1) / (8 * h));
  CHECK(table.m_at(1, 0) == doctest::Approx(want).epsilon(1e-11));
}

TEST_CASE("regular mesh moments equal the coefficient vectors") {
  const MeshConfig cfg(2, 1.0, 1.0);
  const GramianWindow raw = raw_gram(cfg);
  const Eigen::VectorXd d = integrals(raw);
  const MomentTable table = moment_table(normalize_gram(raw, d), d, cfg);
  for (int alpha = 0; alpha < 2 * cfg.n; ++alpha) {
    const Eigen::VectorXd& m =
        alpha < cfg.n ? table.m[static_cast<size_t>(alpha)]
                      : table.m_window_only[static_cast<size_t>(alpha - cfg.n)];
    for (long k = table.window.lo; k <= table.window.hi; ++k) {
      const double c = table.c_at(alpha, k);
      CHECK(std::abs(m[table.window.pos(k)] - c) < 1e-11 * std::max(1.0, std::abs(c)));
    }
  }
}

TEST_CASE("normalized gram is positive definite on the window") {
  for (double h : {0.4, 1.0, 2.5}) {
    const MeshConfig cfg(2, 1.0, h);
    const GramianWindow raw = raw_gram(cfg);
    const Eigen::VectorXd d = integrals(raw);
    const GramianWindow gphi = normalize_gram(raw, d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gphi.central);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("strict locality of the supports") {
  oracles::Rng rng(4004);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = static_cast<int>(rng.integer(1, 5));
    const MeshConfig cfg(n, rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0));
    const long k = rng.integer(-10, 10);
    // 4n-1 consecutive functions: the last support starts where the first ends
    const long s = 4 * n - 2;
    CHECK(cfg.mesh_point(k + s + 1 - 2 * n) >= cfg.mesh_point(k + 2 * n - 1));
    // 4n-2 consecutive functions still overlap
    CHECK(cfg.mesh_point(k + s - 2 * n) < cfg.mesh_point(k + 2 * n - 1));
  }
}

TEST_CASE("degenerate transfer problem is reported") {
  // A mask violating partition of unity has no eigenvalue-1 eigenvector.
  CHECK_THROWS_WITH_AS(regular_gram(Filter({0.5, 1.0, 0.25}, -1)),
                       "Gramian eigenproblem degenerate", std::runtime_error);
}

TEST_SUITE_END();
